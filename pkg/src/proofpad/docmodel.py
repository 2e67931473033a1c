"""Document persistence: plain source files and the .proofpad region format.

A .proofpad file starts with a version header line and marks read-only
blocks with begin/end comment lines:

    ;; proofpad:v1
    ;; proofpad:readonly:begin
    (defun provided (x) x)
    ;; proofpad:readonly:end
    ; student code here

The markers are ACL2 comments, so plain ACL2 can still load the file.
``Document.text`` holds the content without header or marker lines; the
region list carries spans into that text.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedProofpad, ReadOnlyViolation

HEADER = ";; proofpad:v1"
RO_BEGIN = ";; proofpad:readonly:begin"
RO_END = ";; proofpad:readonly:end"


@dataclass(frozen=True)
class Region:
    start: int
    end: int
    access: str  # "read-only" | "read-write"

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class Document:
    text: str
    regions: tuple[Region, ...]
    origin: str  # "plain" | "proofpad"

    def check_invariants(self):
        pos = 0
        for region in self.regions:
            assert region.start == pos and region.end >= region.start
            pos = region.end
        assert pos == len(self.text)


def plain_document(text: str) -> Document:
    return Document(text, (Region(0, len(text), "read-write"),), "plain")


def parse_proofpad(raw: str) -> Document:
    """Parse .proofpad file contents into text plus regions."""
    lines = raw.split("\n")
    if lines[0].rstrip() != HEADER:
        raise MalformedProofpad("missing ;; proofpad:v1 header line")
    segments: list[tuple[str, str]] = []  # (access, content)
    current: list[str] = []
    in_readonly = False

    def flush(access: str):
        if current:
            segments.append((access, "".join(current)))
            current.clear()

    body = lines[1:]
    for idx, line in enumerate(body):
        terminated = idx < len(body) - 1
        stripped = line.rstrip()
        if stripped == RO_BEGIN:
            if in_readonly:
                raise MalformedProofpad("nested readonly:begin marker")
            flush("read-write")
            in_readonly = True
        elif stripped == RO_END:
            if not in_readonly:
                raise MalformedProofpad("readonly:end without begin")
            flush("read-only")
            in_readonly = False
        else:
            current.append(line + ("\n" if terminated else ""))
    if in_readonly:
        raise MalformedProofpad("unterminated readonly:begin marker")
    flush("read-write")

    text_parts: list[str] = []
    regions: list[Region] = []
    pos = 0
    for access, content in segments:
        if not content:
            continue  # empty edge regions elided
        text_parts.append(content)
        regions.append(Region(pos, pos + len(content), access))
        pos += len(content)
    return Document("".join(text_parts), tuple(regions), "proofpad")


def render(doc: Document) -> str:
    """Serialize a Document back to file contents."""
    if doc.origin == "plain":
        return doc.text
    parts = [HEADER + "\n"]
    for region in doc.regions:
        content = doc.text[region.start:region.end]
        if region.access == "read-only":
            parts.append(RO_BEGIN + "\n")
            parts.append(content)
            parts.append(RO_END + "\n")
        else:
            parts.append(content)
    return "".join(parts)


def load(path: str) -> Document:
    """Read a document; .proofpad files get region parsing."""
    with open(path, encoding="utf-8") as f:
        raw = f.read()
    if str(path).endswith(".proofpad"):
        return parse_proofpad(raw)
    return plain_document(raw)


def save(doc: Document, path: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(render(doc))


def writable_region(doc: Document, start: int, end: int) -> Region | None:
    """The read-write region wholly containing [start, end), if any."""
    for region in doc.regions:
        if region.access == "read-write" \
                and region.start <= start and end <= region.end:
            return region
    return None


def apply_edit(doc: Document, start: int, end: int,
               replacement: str) -> Document:
    """Replace text[start:end]; the span must sit inside one rw region."""
    if not 0 <= start <= end <= len(doc.text):
        raise ValueError("edit span out of range")
    target = writable_region(doc, start, end)
    if target is None:
        raise ReadOnlyViolation("edit overlaps a read-only region")
    delta = len(replacement) - (end - start)
    text = doc.text[:start] + replacement + doc.text[end:]
    regions = []
    for region in doc.regions:
        if region is target:
            regions.append(Region(region.start, region.end + delta,
                                  region.access))
        elif region.start >= target.end:
            regions.append(Region(region.start + delta, region.end + delta,
                                  region.access))
        else:
            regions.append(region)
    return Document(text, tuple(regions), doc.origin)
