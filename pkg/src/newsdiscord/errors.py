"""Exception types shared across the package."""


class NewsDiscordError(Exception):
    """Base class for all package errors."""


class ParseError(NewsDiscordError):
    """A file or payload could not be decoded into the expected structure."""


class ValidationError(NewsDiscordError):
    """Decoded data violates a structural invariant."""


class FetchError(NewsDiscordError):
    """A single article could not be retrieved from a feed."""


class StoryUnavailable(NewsDiscordError):
    """A story reference could not be resolved by the feed client."""


class ProviderUnavailable(NewsDiscordError):
    """A model backend failed after retries for one request."""


class MalformedOutput(NewsDiscordError):
    """A model backend returned a payload that does not fit the wire contract."""


class InputError(NewsDiscordError):
    """An argument is outside its documented range."""


class OneClassOnly(NewsDiscordError):
    """A labeled pair set contains a single gold class."""


class ZeroVariance(NewsDiscordError):
    """Correlation is undefined because one input sequence is constant."""


class MismatchedAnswerSets(NewsDiscordError):
    """Two groupings do not cover the same answer ids."""


class NotFound(NewsDiscordError):
    """No stored analysis exists for the requested key."""


class CorruptRecord(NewsDiscordError):
    """A stored analysis failed its checksum or consistency check."""


class AllProvidersDown(NewsDiscordError):
    """Every provider call required to analyze a story failed."""
