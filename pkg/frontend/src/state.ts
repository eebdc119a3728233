/** Single view-state store for the page. */

import type { EntityAnnotation, EntityType, Job, Score } from "./types.js";

export type ComputeStatus = "idle" | "running" | "done" | "failed";

export interface ViewState {
  articleText: string;
  articleImageUrl: string | null;
  language: "en" | "de";
  entities: EntityAnnotation[];
  hoverKbId: string | null;
  /** one compute flow per type button */
  compute: Record<EntityType, { status: ComputeStatus; jobId: string | null }>;
  scores: Record<string, Score | null>;
  warnings: string[];
  error: string | null;
}

export function initialState(): ViewState {
  return {
    articleText: "",
    articleImageUrl: null,
    language: "en",
    entities: [],
    hoverKbId: null,
    compute: {
      person: { status: "idle", jobId: null },
      location: { status: "idle", jobId: null },
      event: { status: "idle", jobId: null },
    },
    scores: {},
    warnings: [],
    error: null,
  };
}

export class Store {
  private listeners = new Set<(state: ViewState) => void>();

  constructor(private current: ViewState = initialState()) {}

  get state(): ViewState {
    return this.current;
  }

  subscribe(listener: (state: ViewState) => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  update(mutate: (state: ViewState) => ViewState): void {
    this.current = mutate(this.current);
    for (const listener of this.listeners) {
      listener(this.current);
    }
  }
}

/** Fold a job snapshot for one type button into the state. Scores merge
 * only when the job is done; a running job only moves its status. */
export function applyJobUpdate(state: ViewState, type: EntityType, job: Job): ViewState {
  const compute = { ...state.compute };
  if (job.state === "failed") {
    compute[type] = { status: "failed", jobId: job.job_id };
    return {
      ...state,
      compute,
      error: `${type} computation failed during ${job.failed_stage ?? "?"}: ${job.error ?? ""}`,
    };
  }
  if (job.state !== "done" || !job.result) {
    compute[type] = { status: "running", jobId: job.job_id };
    return { ...state, compute };
  }
  compute[type] = { status: "done", jobId: job.job_id };
  const scores = { ...state.scores };
  for (const [kbId, score] of Object.entries(job.result.scores)) {
    scores[kbId] = score;
  }
  return {
    ...state,
    compute,
    scores,
    entities: job.result.entities.length > 0 ? job.result.entities : state.entities,
    warnings: job.result.warnings,
  };
}
