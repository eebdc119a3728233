/** Turn API entity offsets into render segments.
 *
 * Offsets arrive as character positions into the submitted text; the
 * segmented output must reproduce the text byte-for-byte, so every span
 * is validated against its surface before anything is rendered. A
 * mismatch (e.g. the user edited the text after linking) throws rather
 * than highlighting the wrong characters.
 */

import type { EntityAnnotation, EntityType } from "./types.js";

export interface Segment {
  text: string;
  entity?: EntityAnnotation;
}

export class SpanMismatchError extends Error {}

/** Highlight colors are keyed by type and never change between renders. */
export const TYPE_COLORS: Record<EntityType, string> = {
  person: "#8839ef",
  location: "#1e66f5",
  event: "#d20f39",
};

export function segmentText(text: string, entities: EntityAnnotation[]): Segment[] {
  const marks: { start: number; end: number; entity: EntityAnnotation }[] = [];
  for (const entity of entities) {
    for (const span of entity.spans) {
      if (span.start < 0 || span.end > text.length || span.start >= span.end) {
        throw new SpanMismatchError(
          `span [${span.start}, ${span.end}) outside text of length ${text.length}`,
        );
      }
      const actual = text.slice(span.start, span.end);
      if (actual !== span.surface) {
        throw new SpanMismatchError(
          `span [${span.start}, ${span.end}) reads ${JSON.stringify(actual)}, ` +
            `API reported ${JSON.stringify(span.surface)}`,
        );
      }
      marks.push({ start: span.start, end: span.end, entity });
    }
  }
  marks.sort((a, b) => a.start - b.start);
  for (let i = 1; i < marks.length; i++) {
    if (marks[i].start < marks[i - 1].end) {
      throw new SpanMismatchError("overlapping entity spans");
    }
  }

  const segments: Segment[] = [];
  let cursor = 0;
  for (const mark of marks) {
    if (mark.start > cursor) {
      segments.push({ text: text.slice(cursor, mark.start) });
    }
    segments.push({ text: text.slice(mark.start, mark.end), entity: mark.entity });
    cursor = mark.end;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor) });
  }
  return segments;
}

export function escapeHtml(value: string): string {
  return value
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function renderAnnotatedHtml(text: string, entities: EntityAnnotation[]): string {
  return segmentText(text, entities)
    .map((segment) => {
      if (!segment.entity) {
        return escapeHtml(segment.text);
      }
      const type = segment.entity.entity_type;
      return (
        `<span class="entity entity-${type}" data-kb-id="${escapeHtml(segment.entity.kb_id)}"` +
        ` style="--entity-color: ${TYPE_COLORS[type]}">` +
        escapeHtml(segment.text) +
        "</span>"
      );
    })
    .join("");
}
