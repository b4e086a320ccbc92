import pytest

from newsdiscord.errors import StoryUnavailable
from newsdiscord.feeds import (
    BELOW_SOURCE_MINIMUM,
    DirectoryFeedClient,
    fetch_story,
    registered_domain,
)

from .conftest import FIXTURES_DIR

FEED_ROOT = FIXTURES_DIR / "feed"


@pytest.mark.parametrize(
    "url, expected",
    [
        ("https://www.example.com/a/b", "example.com"),
        ("https://news.bbc.co.uk/story", "bbc.co.uk"),
        ("http://sub.deep.example.org:8080/x", "example.org"),
        ("https://example.com", "example.com"),
        ("https://user@host.example.net/p", "example.net"),
    ],
)
def test_registered_domain(url, expected):
    assert registered_domain(url) == expected


def test_listing_is_sorted():
    client = DirectoryFeedClient(FEED_ROOT)
    assert client.list_recent_stories() == ["busy-story", "patchy-story", "sparse-story"]


def test_fetch_busy_story_not_flagged():
    client = DirectoryFeedClient(FEED_ROOT)
    result = fetch_story(client, "busy-story")
    assert len(result.story.sources) == 12
    assert result.story.flags == ()
    assert result.report == ()
    # articles canonicalized and mapped to registered domains
    assert "mu-tribune.co.uk" in {s.id for s in result.story.sources}


def test_fetch_sparse_story_flagged_below_minimum():
    client = DirectoryFeedClient(FEED_ROOT)
    result = fetch_story(client, "sparse-story")
    assert len(result.story.sources) == 6
    assert BELOW_SOURCE_MINIMUM in result.story.flags


def test_fetch_patchy_story_skips_empty_body_with_report():
    client = DirectoryFeedClient(FEED_ROOT)
    result = fetch_story(client, "patchy-story")
    assert len(result.story.articles) == 11
    assert len(result.report) == 1
    assert result.report[0].reason == "empty_content"
    assert "delta-wire.example" in result.report[0].url


def test_fetch_is_deterministic():
    client = DirectoryFeedClient(FEED_ROOT)
    first = fetch_story(client, "busy-story")
    second = fetch_story(client, "busy-story")
    assert first == second


def test_unknown_ref_raises():
    client = DirectoryFeedClient(FEED_ROOT)
    with pytest.raises(StoryUnavailable):
        fetch_story(client, "missing-story")
