import { describe, expect, it } from "vitest";

import {
  EXCERPT_LIMIT,
  GROUP_PALETTE,
  buildGridModel,
  buildQaModel,
  excerpt,
  groupColor,
} from "../src/viewmodels";
import type { AnalysisPayload } from "../src/types";
import golden from "./fixtures/analysis.json";

const analysis = golden as unknown as AnalysisPayload;

function payloadUrls(payload: AnalysisPayload): Set<string | null> {
  const urls = new Set<string | null>();
  for (const question of payload.questions) {
    for (const group of question.groups) {
      urls.add(group.representative.url);
      for (const member of group.members) {
        urls.add(member.url);
      }
    }
  }
  return urls;
}

describe("buildGridModel", () => {
  it("matches the committed snapshot for the golden analysis", () => {
    expect(buildGridModel(analysis)).toMatchSnapshot();
  });

  it("has dimensions selected questions by story sources", () => {
    const model = buildGridModel(analysis);
    expect(model.rows.length).toBe(analysis.selected.length);
    expect(model.cols.length).toBe(analysis.sources.length);
    expect(model.cells.length).toBe(model.rows.length);
    for (const row of model.cells) {
      expect(row.length).toBe(model.cols.length);
    }
  });

  it("orders rows by selection and columns by answers then id", () => {
    const model = buildGridModel(analysis);
    expect(model.rows.map((r) => r.questionId)).toEqual(analysis.selected);
    const counts = model.cols.map((c) => c.answeredCount);
    expect(counts).toEqual([...counts].sort((a, b) => b - a));
    for (let i = 0; i + 1 < model.cols.length; i += 1) {
      const here = model.cols[i]!;
      const next = model.cols[i + 1]!;
      if (here.answeredCount === next.answeredCount) {
        expect(here.sourceId < next.sourceId).toBe(true);
      }
    }
  });

  it("marks a cell answered exactly when the source answered the question", () => {
    const model = buildGridModel(analysis);
    const questionsById = new Map(analysis.questions.map((q) => [q.id, q]));
    model.rows.forEach((row, rowIndex) => {
      const question = questionsById.get(row.questionId)!;
      const answeredSources = new Set(
        question.groups.flatMap((g) => g.members.map((m) => m.source_id)),
      );
      model.cols.forEach((col, colIndex) => {
        const cell = model.cells[rowIndex]![colIndex]!;
        expect(cell.answered).toBe(answeredSources.has(col.sourceId));
      });
    });
  });

  it("agrees with the server's precomputed grid", () => {
    // the backend computes the same matrix independently; cross-check the
    // answered pattern and group indices cell by cell
    const model = buildGridModel(analysis);
    expect(model.rows.map((r) => r.questionId)).toEqual(analysis.grid.rows);
    expect(model.cols.map((c) => c.sourceId)).toEqual(analysis.grid.cols);
    model.cells.forEach((row, rowIndex) => {
      row.forEach((cell, colIndex) => {
        const serverCell = analysis.grid.cells[rowIndex]![colIndex]!;
        expect(cell.answered).toBe(serverCell.answered);
        if (cell.answered && serverCell.answered) {
          expect(cell.groupIndex).toBe(serverCell.group_index);
          expect(cell.url).toBe(serverCell.url);
        }
      });
    });
  });

  it("keeps group indices stable within a row and colors from the palette", () => {
    const model = buildGridModel(analysis);
    for (const row of model.cells) {
      for (const cell of row) {
        if (cell.answered) {
          expect(cell.color).toBe(GROUP_PALETTE[cell.groupIndex % GROUP_PALETTE.length]);
        }
      }
    }
  });

  it("every rendered url appears in the analysis payload", () => {
    const urls = payloadUrls(analysis);
    const model = buildGridModel(analysis);
    for (const row of model.cells) {
      for (const cell of row) {
        if (cell.answered) {
          expect(urls.has(cell.url)).toBe(true);
        }
      }
    }
  });

  it("returns the empty-state model when nothing is selected", () => {
    const empty = { ...analysis, selected: [] };
    const model = buildGridModel(empty);
    expect(model.rows).toEqual([]);
    expect(model.cells).toEqual([]);
    expect(model.cols.length).toBe(analysis.sources.length);
    expect(model.cols.every((c) => c.answeredCount === 0)).toBe(true);
  });

  it("does not mutate the payload", () => {
    const before = JSON.stringify(analysis);
    buildGridModel(analysis);
    buildQaModel(analysis);
    expect(JSON.stringify(analysis)).toBe(before);
  });
});

describe("buildQaModel", () => {
  it("matches the committed snapshot for the golden analysis", () => {
    expect(buildQaModel(analysis)).toMatchSnapshot();
  });

  it("keeps the analysis group order, largest first", () => {
    const model = buildQaModel(analysis);
    const questionsById = new Map(analysis.questions.map((q) => [q.id, q]));
    for (const question of model.questions) {
      const payload = questionsById.get(question.questionId)!;
      expect(question.groups.map((g) => g.memberCount)).toEqual(
        payload.groups.map((g) => g.members.length),
      );
      const sizes = question.groups.map((g) => g.memberCount);
      expect(sizes).toEqual([...sizes].sort((a, b) => b - a));
    }
  });

  it("singleton groups show exactly one source", () => {
    const model = buildQaModel(analysis);
    for (const question of model.questions) {
      for (const group of question.groups) {
        expect(group.members.length).toBe(group.memberCount);
        if (group.memberCount === 1) {
          expect(group.members[0]!.sourceId).toBe(group.representativeSource.sourceId);
        }
      }
    }
  });

  it("every member link resolves to a payload url", () => {
    const urls = payloadUrls(analysis);
    const model = buildQaModel(analysis);
    for (const question of model.questions) {
      for (const group of question.groups) {
        expect(urls.has(group.representativeSource.url)).toBe(true);
        for (const member of group.members) {
          expect(urls.has(member.url)).toBe(true);
        }
      }
    }
  });

  it("is a pure function of the payload", () => {
    expect(buildQaModel(analysis)).toEqual(buildQaModel(analysis));
  });
});

describe("excerpt", () => {
  it("keeps short text verbatim", () => {
    expect(excerpt("short answer")).toBe("short answer");
  });

  it("truncates to the limit with an ellipsis", () => {
    const long = "word ".repeat(60).trim();
    const cut = excerpt(long);
    expect(cut.length).toBeLessThanOrEqual(EXCERPT_LIMIT);
    expect(cut.endsWith("…")).toBe(true);
  });

  it("applies inside view models", () => {
    const long = "a".repeat(400);
    const doctored: AnalysisPayload = JSON.parse(JSON.stringify(analysis));
    doctored.questions[0]!.groups[0]!.representative.text = long;
    doctored.questions[0]!.groups[0]!.members[0]!.text = long;
    const qa = buildQaModel(doctored);
    expect(qa.questions[0]!.groups[0]!.representativeExcerpt.length).toBe(EXCERPT_LIMIT);
    const grid = buildGridModel(doctored);
    const answered = grid.cells.flat().filter((c) => c.answered);
    expect(answered.some((c) => c.answered && c.answerExcerpt.length === EXCERPT_LIMIT)).toBe(
      true,
    );
  });
});

describe("groupColor", () => {
  it("cycles the 12-color palette", () => {
    expect(GROUP_PALETTE.length).toBe(12);
    expect(groupColor(0)).toBe(GROUP_PALETTE[0]);
    expect(groupColor(12)).toBe(GROUP_PALETTE[0]);
    expect(groupColor(13)).toBe(GROUP_PALETTE[1]);
  });
});
