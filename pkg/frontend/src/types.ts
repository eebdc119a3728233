/** Payload shapes of the /v1 API (see ../schemas/ at the repo root). */

export type EntityType = "person" | "location" | "event";
export type ScoreKind = "CMPS" | "CMLS" | "CMES";
export type JobState = "queued" | "linking" | "crawling" | "scoring" | "done" | "failed";

export interface Span {
  start: number;
  end: number;
  surface: string;
}

export interface EntityAnnotation {
  kb_id: string;
  label: string;
  entity_type: EntityType;
  spans: Span[];
}

export interface BreakdownRow {
  reference: number;
  query: number;
  similarity: number;
}

export interface Score {
  kb_id: string;
  kind: ScoreKind;
  value: number | null;
  evidence_count: number;
  breakdown: BreakdownRow[];
}

export interface Report {
  report_version: string;
  document_id: string;
  language: string;
  entities: EntityAnnotation[];
  scores: Record<string, Score | null>;
  warnings: string[];
}

export interface Job {
  job_id: string;
  state: JobState;
  submitted_at: number;
  progress: Record<string, number>;
  result: Report | null;
  error: string | null;
  failed_stage: string | null;
}

export interface ParsedArticle {
  url: string;
  title: string;
  text: string;
  main_image_url: string | null;
  language: "en" | "de";
}

export interface Card {
  kb_id: string;
  label: string;
  description: string | null;
  depiction: string | null;
  links: Record<string, string>;
}

export interface ReferenceImageMeta {
  index: number;
  source_url: string;
  content_type: string;
  fetched_at: number;
  thumbnail_url: string;
}

export interface References {
  kb_id: string;
  query: string;
  k: number;
  images: ReferenceImageMeta[];
}

export interface AnalyzeAccepted {
  job_id: string;
  status_url: string;
  reused: boolean;
}
