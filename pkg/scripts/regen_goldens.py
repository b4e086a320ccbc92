#!/usr/bin/env python3
"""Regenerate the golden fixtures under tests/golden/.

Goldens freeze the byte-exact output of a reference run over the sample
corpus: one stored analysis record per story plus the public API responses.
Regenerate only after an intentional behavior change, re-verify the values
by hand, and commit the diff.
"""

from __future__ import annotations

import json
import shutil
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO_ROOT / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from newsdiscord.config import RunConfig, make_providers  # noqa: E402
from newsdiscord.corpus import load_story_bundle  # noqa: E402
from newsdiscord.pipeline import analyze_story  # noqa: E402
from newsdiscord.service import create_app  # noqa: E402
from newsdiscord.storage import AnalysisStore  # noqa: E402

CORPUS_DIR = REPO_ROOT / "corpus"
GOLDEN_DIR = REPO_ROOT / "tests" / "golden"
API_STORY = "offshore-wind-bill"
ANALYZE_STORY = "glass-mill-closure"


def main() -> int:
    analyses_dir = GOLDEN_DIR / "analyses"
    api_dir = GOLDEN_DIR / "api"
    shutil.rmtree(analyses_dir, ignore_errors=True)
    shutil.rmtree(api_dir, ignore_errors=True)
    api_dir.mkdir(parents=True)

    config = RunConfig()
    store = AnalysisStore(analyses_dir)
    for path in sorted(CORPUS_DIR.glob("*.json")):
        story = load_story_bundle(path)
        analysis = analyze_story(story, make_providers(config, story), config)
        stored = store.store(analysis, config)
        print(f"wrote {stored.relative_to(REPO_ROOT)}")

    client = TestClient(create_app(store, CORPUS_DIR, config))

    def freeze(name: str, response) -> None:
        payload = {"status_code": response.status_code, "body": response.json()}
        target = api_dir / name
        target.write_text(
            json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n", "utf-8"
        )
        print(f"wrote {target.relative_to(REPO_ROOT)}")

    freeze("get_stories.json", client.get("/stories"))
    freeze(f"get_analysis_{API_STORY}.json", client.get(f"/stories/{API_STORY}/analysis"))

    # The POST flow runs against a fresh store so the golden captures the
    # un-analyzed path: schedule, then the analysis becomes retrievable.
    with tempfile.TemporaryDirectory() as tmp:
        fresh_client = TestClient(create_app(AnalysisStore(tmp), CORPUS_DIR, config))
        flow = {}
        first = fresh_client.post(f"/stories/{ANALYZE_STORY}/analyze")
        flow["post_unanalyzed"] = {"status_code": first.status_code, "body": first.json()}
        after = fresh_client.get(f"/stories/{ANALYZE_STORY}/analysis")
        flow["get_after_post"] = {"status_code": after.status_code, "body": after.json()}
        repeat = fresh_client.post(f"/stories/{ANALYZE_STORY}/analyze")
        flow["post_analyzed"] = {"status_code": repeat.status_code, "body": repeat.json()}
        target = api_dir / "post_analyze_flow.json"
        target.write_text(
            json.dumps(flow, ensure_ascii=False, indent=2, sort_keys=True) + "\n", "utf-8"
        )
        print(f"wrote {target.relative_to(REPO_ROOT)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
