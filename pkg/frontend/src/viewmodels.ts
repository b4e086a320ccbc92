/**
 * Pure view models over the analysis payload.
 *
 * Both builders are plain functions of their input: no fetching, no DOM,
 * no mutation, so they snapshot-test without a browser.
 */

import type { AnalysisPayload, MemberPayload, QuestionPayload } from "./types";

export const EXCERPT_LIMIT = 160;

/** Fixed 12-color cycle; cells and cards key it by group index per question. */
export const GROUP_PALETTE = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
  "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
] as const;

export function groupColor(groupIndex: number): string {
  const color = GROUP_PALETTE[groupIndex % GROUP_PALETTE.length];
  return color ?? GROUP_PALETTE[0];
}

export function excerpt(text: string): string {
  if (text.length <= EXCERPT_LIMIT) {
    return text;
  }
  return `${text.slice(0, EXCERPT_LIMIT - 1).trimEnd()}…`;
}

export interface GridRow {
  questionId: string;
  text: string;
}

export interface GridCol {
  sourceId: string;
  displayName: string;
  answeredCount: number;
}

export type GridCell =
  | { answered: false }
  | {
      answered: true;
      groupIndex: number;
      answerExcerpt: string;
      url: string | null;
      color: string;
    };

export interface GridModel {
  rows: GridRow[];
  cols: GridCol[];
  cells: GridCell[][];
}

export interface SourceLink {
  sourceId: string;
  sourceName: string;
  url: string | null;
}

export interface QAGroup {
  representativeText: string;
  representativeExcerpt: string;
  representativeSource: SourceLink;
  memberCount: number;
  members: SourceLink[];
  color: string;
}

export interface QAQuestion {
  questionId: string;
  text: string;
  startWord: string;
  answeringSources: number;
  totalSources: number;
  groups: QAGroup[];
}

export interface QAViewModel {
  questions: QAQuestion[];
}

function selectedQuestions(analysis: AnalysisPayload): QuestionPayload[] {
  const byId = new Map(analysis.questions.map((q) => [q.id, q]));
  return analysis.selected.flatMap((id) => {
    const question = byId.get(id);
    return question === undefined ? [] : [question];
  });
}

function memberLink(member: MemberPayload): SourceLink {
  return { sourceId: member.source_id, sourceName: member.source_name, url: member.url };
}

/**
 * Grid view: one row per selected question in selection order, one column
 * per story source ordered by how many of those questions it answered
 * (descending, ties alphabetical by source id). A cell carries the source's
 * answer excerpt and its group color, or is blank.
 */
export function buildGridModel(analysis: AnalysisPayload): GridModel {
  const questions = selectedQuestions(analysis);
  const rows: GridRow[] = questions.map((q) => ({ questionId: q.id, text: q.text }));

  const cellsBySource = new Map<string, Map<string, GridCell>>();
  for (const question of questions) {
    question.groups.forEach((group, groupIndex) => {
      for (const member of group.members) {
        let perSource = cellsBySource.get(member.source_id);
        if (perSource === undefined) {
          perSource = new Map();
          cellsBySource.set(member.source_id, perSource);
        }
        perSource.set(question.id, {
          answered: true,
          groupIndex,
          answerExcerpt: excerpt(member.text),
          url: member.url,
          color: groupColor(groupIndex),
        });
      }
    });
  }

  const cols: GridCol[] = analysis.sources
    .map((source) => ({
      sourceId: source.id,
      displayName: source.display_name,
      answeredCount: cellsBySource.get(source.id)?.size ?? 0,
    }))
    .sort((a, b) =>
      a.answeredCount !== b.answeredCount
        ? b.answeredCount - a.answeredCount
        : a.sourceId < b.sourceId
          ? -1
          : 1,
    );

  const cells: GridCell[][] = rows.map((row) =>
    cols.map(
      (col) => cellsBySource.get(col.sourceId)?.get(row.questionId) ?? { answered: false },
    ),
  );
  return { rows, cols, cells };
}

/**
 * Q&A view: the selected questions in selection order, each with its answer
 * groups in the analysis's own order (size descending) as carousel cards.
 */
export function buildQaModel(analysis: AnalysisPayload): QAViewModel {
  const questions = selectedQuestions(analysis).map((question) => ({
    questionId: question.id,
    text: question.text,
    startWord: question.start_word,
    answeringSources: question.stats.answering_sources,
    totalSources: question.stats.n_sources,
    groups: question.groups.map((group, groupIndex) => ({
      representativeText: group.representative.text,
      representativeExcerpt: excerpt(group.representative.text),
      representativeSource: memberLink(group.representative),
      memberCount: group.members.length,
      members: group.members.map(memberLink),
      color: groupColor(groupIndex),
    })),
  }));
  return { questions };
}
