#!/usr/bin/env python3
"""Loading story bundles: validation, canonical ordering, summaries,
distractor selection.

Run from the repository root: python demos/01_bundles_and_stories.py
"""

from pathlib import Path

from newsdiscord import load_story_bundle, select_distractors, select_summary

CORPUS = Path(__file__).resolve().parents[1] / "corpus"

# A bundle is one JSON file per story: declared sources, articles with
# ISO-8601 UTC timestamps, optional distractor articles, and optional seed
# questions for the fixture generator.
story = load_story_bundle(CORPUS / "offshore-wind-bill.json")

print(f"story: {story.id!r} - {story.title}")
print(f"sources ({len(story.sources)}):")
for source in story.sources:
    count = sum(1 for a in story.articles if a.source_id == source.id)
    print(f"  {source.id:<28} {source.display_name:<18} {count} article(s)")

# Articles are canonicalized by (published_at, id), so any permutation of
# the same bundle loads to an identical Story value.
print("\narticles in canonical order:")
for article in story.articles:
    print(f"  {article.published_at:%Y-%m-%d %H:%M}  {article.id}  {article.headline}")

# The summary feeds question generation. The earliest article with an
# explicit summary wins; otherwise the earliest article's first three
# sentences stand in.
print(f"\nselected summary:\n  {select_summary(story)}")

# Distractor articles are older, unrelated pieces used later to catch vague
# questions. The bundle ships a small archive; the selector keeps the most
# recent articles at least 90 days older than the story.
distractors = select_distractors(story, story.distractor_articles)
print(f"\ndistractors: {len(distractors.articles)} selected"
      f" (insufficient={distractors.insufficient})")
for article in distractors.articles:
    print(f"  {article.published_at:%Y-%m-%d}  {article.headline}")
