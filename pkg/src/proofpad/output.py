"""Parse raw ACL2 output into structured messages and sorted summaries.

Messages are paragraphs (blank-line delimited, matching ACL2's formatting).
The raw output is always retained verbatim; raw ranges index into it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

FAILED_BANNER = "******** FAILED ********"

HEADLINE_LIMIT = 120

# Preamble ACL2 prints before the message proper.
_PREAMBLE_RE = re.compile(
    r"^ACL2 (?:Error|Warning)(?:\s*\[[^\]]*\])?\s+in\s+\(.*?\):\s*")

# Curated rewrites of known noisy messages: (pattern, friendly headline).
# Applied to the whitespace-flattened paragraph; first match wins.
REWRITES: list[tuple[re.Pattern, str]] = [
    (re.compile(r'There is no file named\s+"(?P<path>[^"]+)"\s+that can be '
                r'opened for input'),
     "The book could not be found at {path}"),
    (re.compile(r"Unable to load\s+compiled file for book"),
     "Unable to load compiled file for this book"),
]

_SEVERITY_RANK = {"error": 0, "warning": 1, "success": 2, "info": 3}


@dataclass(frozen=True)
class StructuredMessage:
    severity: str  # "error" | "warning" | "success" | "info"
    headline: str
    detail: str
    raw_start: int
    raw_end: int

    @property
    def raw_range(self) -> tuple[int, int]:
        return (self.raw_start, self.raw_end)


@dataclass
class Summary:
    items: list[StructuredMessage]
    overall: str  # "success" | "failure"
    raw: str


def scan_failure(raw: str) -> bool:
    """The failure markers the backend keys its outcome on."""
    if FAILED_BANNER in raw:
        return True
    return any(line.startswith("ACL2 Error") for line in raw.splitlines())


def _paragraphs(raw: str):
    """Yield (start, end) offsets of blank-line-delimited paragraphs."""
    start = None
    offset = 0
    last_end = 0
    for line in raw.splitlines(keepends=True):
        stripped = line.strip()
        if stripped:
            if start is None:
                start = offset
            last_end = offset + len(line.rstrip("\n"))
        else:
            if start is not None:
                yield (start, last_end)
                start = None
        offset += len(line)
    if start is not None:
        yield (start, last_end)


def _headline(paragraph: str) -> str:
    flat = re.sub(r"\s+", " ", paragraph).strip()
    for pattern, template in REWRITES:
        m = pattern.search(flat)
        if m:
            return template.format(**m.groupdict())[:HEADLINE_LIMIT]
    flat = _PREAMBLE_RE.sub("", flat)
    m = re.search(r"\.(?:\s|$)", flat)
    if m:
        flat = flat[:m.start() + 1]
    return flat[:HEADLINE_LIMIT]


def parse_output(raw: str) -> list[StructuredMessage]:
    """Split one submission's complete output into classified messages."""
    failed = scan_failure(raw)
    messages: list[StructuredMessage] = []
    for start, end in _paragraphs(raw):
        text = raw[start:end]
        first = text.splitlines()[0]
        if FAILED_BANNER in text:
            severity = "error"
            headline = "Proof attempt failed"
        elif first.startswith("ACL2 Error"):
            severity = "error"
            headline = _headline(text)
        elif first.startswith("ACL2 Warning"):
            severity = "warning"
            headline = _headline(text)
        elif first.startswith("Summary") and "Form:" in text:
            severity = "info" if failed else "success"
            headline = _headline_for_summary(text)
        else:
            severity = "info"
            headline = _headline(text)
        messages.append(StructuredMessage(severity, headline, text, start, end))
    return messages


def _headline_for_summary(text: str) -> str:
    for line in text.splitlines():
        if line.startswith("Form:"):
            return ("Accepted " + line[len("Form:"):].strip())[:HEADLINE_LIMIT]
    return "Summary"


def summarize(messages: list[StructuredMessage], raw: str) -> Summary:
    """Severity-sort the messages; original order kept within a severity."""
    items = sorted(messages, key=lambda m: _SEVERITY_RANK[m.severity])
    overall = "failure" if scan_failure(raw) else "success"
    return Summary(items=items, overall=overall, raw=raw)


def summarize_raw(raw: str) -> Summary:
    return summarize(parse_output(raw), raw)
