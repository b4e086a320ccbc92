#!/usr/bin/env python3
"""End to end: analyze the sample corpus, persist the results, and serve
them over the HTTP API.

Run from the repository root: python demos/05_full_pipeline.py
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from newsdiscord import AnalysisStore, RunConfig, analyze_story, load_story_bundle, make_providers
from newsdiscord.service import create_app

REPO = Path(__file__).resolve().parents[1]
CORPUS = REPO / "corpus"

config = RunConfig()  # reference providers, default thresholds

with tempfile.TemporaryDirectory() as tmp:
    store = AnalysisStore(tmp)

    # Analysis is deterministic: same bundle, same config, same providers
    # give byte-identical stored records on any machine.
    for path in sorted(CORPUS.glob("*.json")):
        story = load_story_bundle(path)
        providers = make_providers(config, story)
        analysis = analyze_story(story, providers, config)
        store.store(analysis, config)
        print(f"{story.id}: {len(analysis.questions)} questions analyzed")
        for qa in analysis.questions:
            mark = "->" if qa.question.id in analysis.selected else "  "
            print(
                f"  {mark} [{qa.label.label.value:<10}] {qa.question.text} "
                f"({qa.stats.answering_sources}/{qa.stats.n_sources} sources, "
                f"{len(qa.grouping.groups)} groups)"
            )

    # The same records through the reader-facing API. In production this is
    # `newsdiscord serve`; the in-process client here keeps the demo
    # self-contained.
    client = TestClient(create_app(store, CORPUS, config))
    print("\nGET /stories")
    for entry in client.get("/stories").json():
        print(f"  {entry['id']:<22} sources={entry['n_sources']} analyzed={entry['analyzed']}")

    payload = client.get("/stories/offshore-wind-bill/analysis").json()
    print("\nGET /stories/offshore-wind-bill/analysis")
    questions = {q["id"]: q for q in payload["questions"]}
    for qid in payload["selected"]:
        question = questions[qid]
        print(f"  discord question: {question['text']}")
        for group in question["groups"]:
            rep = group["representative"]
            print(f"    [{len(group['members'])} source(s)] {rep['text']}  - {rep['source_name']}")

    grid = payload["grid"]
    print("\n  grid (rows=selected questions, cols=sources by answers):")
    header = "".join(col.split(".")[0][:14].ljust(16) for col in grid["cols"])
    print(f"    {'':<10}{header}")
    for row_id, row in zip(grid["rows"], grid["cells"]):
        cells = "".join(
            (f"group {cell['group_index']}" if cell["answered"] else "-").ljust(16)
            for cell in row
        )
        print(f"    {row_id[:8]:<10}{cells}")
