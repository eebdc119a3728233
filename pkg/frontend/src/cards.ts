/** Hover card rendering: knowledge-base description, depiction image,
 * page links, and (once the crawl has run) the reference gallery. */

import { escapeHtml } from "./annotate.js";
import type { Card, References } from "./types.js";

export function cardHtml(card: Card, references: References | null): string {
  const parts: string[] = ['<div class="card">'];
  parts.push(`<div class="card-title">${escapeHtml(card.label)}</div>`);
  if (card.depiction) {
    parts.push(
      `<img class="card-depiction" src="${escapeHtml(card.depiction)}" ` +
        `alt="${escapeHtml(card.label)}">`,
    );
  }
  if (card.description) {
    parts.push(`<p class="card-description">${escapeHtml(card.description)}</p>`);
  }
  const links = Object.entries(card.links);
  if (links.length > 0) {
    const anchors = links
      .map(
        ([name, href]) =>
          `<a href="${escapeHtml(href)}" target="_blank" rel="noopener">${escapeHtml(name)}</a>`,
      )
      .join(" ");
    parts.push(`<div class="card-links">${anchors}</div>`);
  }
  if (references && references.images.length > 0) {
    const thumbs = references.images
      .map(
        (image) =>
          `<img class="card-thumb" src="${escapeHtml(image.thumbnail_url)}" ` +
          `alt="reference ${image.index}">`,
      )
      .join("");
    parts.push(`<div class="card-gallery">${thumbs}</div>`);
  } else {
    parts.push('<div class="card-gallery card-gallery-empty">references not crawled yet</div>');
  }
  parts.push("</div>");
  return parts.join("");
}
