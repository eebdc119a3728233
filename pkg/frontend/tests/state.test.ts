import { describe, expect, it } from "vitest";

import { applyJobUpdate, initialState, Store } from "../src/state.js";
import type { Job, Report } from "../src/types.js";

function job(state: Job["state"], result: Report | null = null): Job {
  return {
    job_id: "j1",
    state,
    submitted_at: 0,
    progress: {},
    result,
    error: state === "failed" ? "provider outage" : null,
    failed_stage: state === "failed" ? "scoring" : null,
  };
}

const REPORT: Report = {
  report_version: "1",
  document_id: "d",
  language: "en",
  entities: [
    {
      kb_id: "Q76",
      label: "Barack Obama",
      entity_type: "person",
      spans: [{ start: 0, end: 5, surface: "Obama" }],
    },
  ],
  scores: {
    Q76: {
      kb_id: "Q76",
      kind: "CMPS",
      value: 0.8,
      evidence_count: 1,
      breakdown: [{ reference: 0, query: 0, similarity: 0.8 }],
    },
  },
  warnings: [],
};

describe("applyJobUpdate", () => {
  it("running jobs only move the status, scores stay hidden", () => {
    const next = applyJobUpdate(initialState(), "person", job("scoring"));
    expect(next.compute.person.status).toBe("running");
    expect(Object.keys(next.scores)).toHaveLength(0);
  });

  it("done jobs merge scores and entities", () => {
    const next = applyJobUpdate(initialState(), "person", job("done", REPORT));
    expect(next.compute.person.status).toBe("done");
    expect(next.scores.Q76?.value).toBe(0.8);
    expect(next.entities).toHaveLength(1);
  });

  it("failed jobs surface an error banner with the stage", () => {
    const next = applyJobUpdate(initialState(), "person", job("failed"));
    expect(next.compute.person.status).toBe("failed");
    expect(next.error).toContain("scoring");
    expect(next.error).toContain("provider outage");
  });

  it("per-type flows are independent", () => {
    let state = applyJobUpdate(initialState(), "person", job("done", REPORT));
    state = applyJobUpdate(state, "location", job("scoring"));
    expect(state.compute.person.status).toBe("done");
    expect(state.compute.location.status).toBe("running");
    expect(state.compute.event.status).toBe("idle");
  });
});

describe("Store", () => {
  it("notifies subscribers and supports unsubscribe", () => {
    const store = new Store();
    const seen: number[] = [];
    const unsubscribe = store.subscribe((s) => seen.push(s.entities.length));
    store.update((s) => ({ ...s, entities: REPORT.entities }));
    unsubscribe();
    store.update((s) => ({ ...s, entities: [] }));
    expect(seen).toEqual([1]);
  });
});
