#!/usr/bin/env python3
"""The three model roles and their deterministic reference implementations:
question generation, extractive answering, and answer-pair scoring.

Run from the repository root: python demos/02_reference_providers.py
"""

from pathlib import Path

from newsdiscord import (
    FixtureQuestionProvider,
    LexicalAnswerExtractor,
    StartWord,
    TemplateQuestionProvider,
    TokenF1Scorer,
    load_story_bundle,
    nli_score,
    select_summary,
)
from newsdiscord.providers import Scale, to_unit

CORPUS = Path(__file__).resolve().parents[1] / "corpus"
story = load_story_bundle(CORPUS / "central-bank-rates.json")
summary = select_summary(story)

# Question generation. The fixture provider replays questions stored in the
# bundle; the template provider derives trivial questions from the summary.
# Both enforce the invariant: text starts with the start word, ends with "?".
fixture_qg = FixtureQuestionProvider(story)
template_qg = TemplateQuestionProvider()
print("fixture questions (How):")
for q in fixture_qg.generate_questions(summary, StartWord.HOW, 5, story_id=story.id):
    print(f"  {q.id}  {q.text}")
print("template questions (What):")
for q in template_qg.generate_questions(summary, StartWord.WHAT, 2, story_id=story.id):
    print(f"  {q.id}  {q.text}")

# Extractive answering. The lexical extractor picks the sentence with the
# highest stopword-filtered token overlap; below two overlapping tokens it
# reports an explicit no-answer. Spans are verbatim slices of the article.
question = fixture_qg.generate_questions(summary, StartWord.HOW, 1, story_id=story.id)[0]
qa = LexicalAnswerExtractor()
print(f"\nanswers to: {question.text}")
for article in story.articles:
    result = qa.extract_answer(question, article)
    if hasattr(result, "text"):
        assert article.content[result.char_start:result.char_end] == result.text
        print(f"  {article.source_id:<26} conf={result.confidence:.2f}  {result.text}")
    else:
        print(f"  {article.source_id:<26} no answer (conf={result.confidence:.2f})")

# Pair scoring. The reference scorer is multiset token F1 on the unit scale;
# other backends may answer on a 1-5 or signed scale, and affine adapters
# bring everything onto [0, 1] before consolidation.
scorer = TokenF1Scorer()
a = "four rate increases this year"
b = "as many as seven rate increases this year"
print(f"\ntoken F1({a!r}, {b!r}) = {scorer.score_pair(question.text, a, b).score:.3f}")
print(f"unit value of 4.0 on the 1-5 scale: {to_unit(4.0, Scale.MOCHA):.3f}")

# Entailment-style backends reduce to a signed score: the entailment
# probability minus the contradiction probability.
print(f"signed score for p_entail=0.7, p_contradict=0.1: {nli_score(0.7, 0.1):.2f}")
print(f"as a unit value: {to_unit(nli_score(0.7, 0.1), Scale.SIGNED):.2f}")
