"""UTC timestamp parsing and formatting at millisecond precision.

All instants in the engine are timezone-aware UTC datetimes truncated to
whole milliseconds; the wire format is ISO-8601 with a trailing ``Z``
(``2026-01-05T12:30:00.250Z``).
"""

from __future__ import annotations

from datetime import datetime, timezone

from .errors import InvalidTimestamp

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def truncate_ms(dt: datetime) -> datetime:
    """Drop sub-millisecond precision; naive datetimes are taken as UTC."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    else:
        dt = dt.astimezone(timezone.utc)
    return dt.replace(microsecond=(dt.microsecond // 1000) * 1000)


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 UTC timestamp string.

    Accepts a ``Z`` suffix or an explicit offset; the result is normalized
    to UTC and truncated to millisecond precision.
    """
    if not isinstance(value, str) or not value:
        raise InvalidTimestamp(f"timestamp must be an ISO-8601 string, got {value!r}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise InvalidTimestamp(f"unparseable timestamp {value!r}: {exc}") from None
    return truncate_ms(dt)


def format_timestamp(dt: datetime) -> str:
    """Render as ``YYYY-MM-DDTHH:MM:SS.mmmZ`` (always 3 fraction digits)."""
    dt = truncate_ms(dt)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}Z"
