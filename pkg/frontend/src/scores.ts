/** Score presentation.
 *
 * Values are shown exactly as the API reported them (formatting only,
 * never recomputation); absent scores render as "no visual evidence";
 * rows appear only for jobs in the done state.
 */

import type { EntityAnnotation, EntityType, Job, Score, ScoreKind } from "./types.js";

export const KIND_FOR_TYPE: Record<EntityType, ScoreKind> = {
  person: "CMPS",
  location: "CMLS",
  event: "CMES",
};

export const NO_EVIDENCE_LABEL = "no visual evidence";

export interface ScoreRow {
  kbId: string;
  label: string;
  entityType: EntityType;
  kind: ScoreKind;
  value: number | null;
  display: string;
  color: string;
  evidenceCount: number;
  breakdown: Score["breakdown"];
}

export function formatScore(value: number | null): string {
  if (value === null) {
    return NO_EVIDENCE_LABEL;
  }
  return (value >= 0 ? "+" : "") + value.toFixed(2);
}

/** Diverging scale over the raw cosine: -1 blue, 0 near-white, +1 red. */
export function scoreColor(value: number | null): string {
  if (value === null) {
    return "#9ca0b0";
  }
  const clamped = Math.max(-1, Math.min(1, value));
  const t = Math.abs(clamped);
  const strength = Math.round(244 - 140 * t);
  return clamped >= 0
    ? `rgb(244, ${strength}, ${strength})`
    : `rgb(${strength}, ${strength}, 244)`;
}

/** Rows for the given entities/scores, restricted to the requested
 * entity types; entities never scored (absent from the map) are
 * skipped. */
export function rowsFor(
  entities: readonly EntityAnnotation[],
  scores: Record<string, Score | null>,
  enabledTypes: readonly EntityType[],
): ScoreRow[] {
  const wanted = new Set(enabledTypes);
  const rows: ScoreRow[] = [];
  for (const entity of entities) {
    if (!wanted.has(entity.entity_type) || !(entity.kb_id in scores)) {
      continue;
    }
    const score = scores[entity.kb_id];
    rows.push({
      kbId: entity.kb_id,
      label: entity.label,
      entityType: entity.entity_type,
      kind: score?.kind ?? KIND_FOR_TYPE[entity.entity_type],
      value: score?.value ?? null,
      display: formatScore(score?.value ?? null),
      color: scoreColor(score?.value ?? null),
      evidenceCount: score?.evidence_count ?? 0,
      breakdown: score?.breakdown ?? [],
    });
  }
  return rows;
}

/** Rows for a finished job; anything not in a done state yields no rows
 * at all. */
export function scoreRows(job: Job | null, enabledTypes: readonly EntityType[]): ScoreRow[] {
  if (!job || job.state !== "done" || !job.result) {
    return [];
  }
  return rowsFor(job.result.entities, job.result.scores, enabledTypes);
}

export function overallProgress(job: Job | null): number {
  if (!job) {
    return 0;
  }
  const stages = ["linking", "crawling", "scoring"];
  const total = stages.reduce((sum, stage) => sum + (job.progress[stage] ?? 0), 0);
  return total / stages.length;
}
