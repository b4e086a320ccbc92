/** Shapes of the pipeline API payloads this client consumes. */

export interface StorySummary {
  id: string;
  title: string;
  n_sources: number;
  analyzed: boolean;
}

export interface SourceRef {
  id: string;
  display_name: string;
}

export interface MemberPayload {
  answer_id: string;
  text: string;
  source_id: string;
  source_name: string;
  article_id: string;
  url: string | null;
}

export interface GroupPayload {
  representative: MemberPayload;
  members: MemberPayload[];
}

export interface QuestionStatsPayload {
  n_sources: number;
  answering_sources: number;
  n_answers: number;
  largest_group_size: number;
  n_distractor_answers: number;
}

export interface QuestionPayload {
  id: string;
  text: string;
  start_word: string;
  label: string;
  reasons: string[];
  stats: QuestionStatsPayload;
  groups: GroupPayload[];
}

export type ServerGridCell =
  | { answered: false }
  | { answered: true; group_index: number; answer_text: string; url: string | null };

export interface ServerGrid {
  rows: string[];
  cols: string[];
  cells: ServerGridCell[][];
}

export interface AnalysisPayload {
  story_id: string;
  title: string;
  analyzed_at: string;
  config_fingerprint: string;
  sources: SourceRef[];
  selected: string[];
  questions: QuestionPayload[];
  grid: ServerGrid;
  warnings: string[];
}
