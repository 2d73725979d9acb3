"""Import of Web of Science tagged export files.

WoS "Other Reference Software" exports are plain text: a few header lines,
then one record per publication.  A record starts with a ``PT`` line, ends
with ``ER``, and consists of two-letter tag lines (``TAG value``) whose
wrapped values continue on lines indented with three spaces.  Every line of
the ``CR`` tag is one raw cited-reference string.
"""

from __future__ import annotations

import string
import warnings
from dataclasses import dataclass, field

__all__ = [
    "PublicationRecord",
    "ParsedCR",
    "ImportConfig",
    "WosParseError",
    "WosImportError",
    "parse_wos_file",
    "parse_cited_reference",
    "import_files",
    "render_wos_export",
]

LOWERCASE_VOWELS = set("aeiou")


class WosParseError(Exception):
    """A WoS export file that cannot be parsed, with the offending line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class WosImportError(Exception):
    """Raised when none of the given files could be parsed."""

    def __init__(self, errors: list[str]):
        super().__init__("no file could be imported: " + "; ".join(errors))
        self.errors = errors


@dataclass
class PublicationRecord:
    """One citing paper from a WoS export, with its raw cited references.

    ``cited_refs`` preserves file order and multiplicity: a reference listed
    twice in the record appears twice.
    """

    publication_year: int | None = None
    authors: list[str] = field(default_factory=list)
    title: str | None = None
    source: str | None = None
    cited_refs: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class ParsedCR:
    """A raw cited-reference string split into its bibliographic fields.

    Fields the grammar cannot locate stay empty (``None`` or ``""``), they
    are never guessed.  ``title_short`` concatenates the first letters of the
    source title's words when there is more than one word, otherwise it
    equals the source title.
    """

    raw: str
    author_full: str
    last_name: str
    first_initial: str
    year: int | None
    source: str
    source_title: str
    title_short: str
    volume: str | None = None
    page: str | None = None
    doi: str | None = None


@dataclass(frozen=True)
class ImportConfig:
    """Import limits; zero always means "no bound".

    ``max_crs`` caps the number of cited-reference occurrences accepted
    across all files.  ``min_cry``/``max_cry`` bound the cited-reference
    year; while either bound is active, references without a recognizable
    year are skipped.
    """

    max_crs: int = 100_000
    min_cry: int = 0
    max_cry: int = 0

    def __post_init__(self):
        if self.max_crs < 0 or self.min_cry < 0 or self.max_cry < 0:
            raise ValueError("import limits must be nonnegative")
        if self.min_cry and self.max_cry and self.min_cry > self.max_cry:
            raise ValueError(
                f"min_cry {self.min_cry} exceeds max_cry {self.max_cry}"
            )


def _tag_of(line: str) -> str | None:
    """Return the two-character tag when the line opens one, else None."""
    if len(line) < 2:
        return None
    if not ("A" <= line[0] <= "Z" and ("A" <= line[1] <= "Z" or line[1].isdigit())):
        return None
    if len(line) > 2 and line[2] != " ":
        return None
    return line[:2]


def parse_wos_file(content: str) -> list[PublicationRecord]:
    """Parse one tagged export file into publication records.

    Raises WosParseError if the file contains no ``PT`` record at all, or if
    a record is missing its ``ER`` terminator.
    """
    if content.startswith("﻿"):
        content = content[1:]
    records: list[PublicationRecord] = []
    tags: dict[str, list[str]] = {}
    current_tag: str | None = None
    record_start = 0

    for lineno, raw_line in enumerate(content.split("\n"), start=1):
        line = raw_line.rstrip("\r")
        tag = _tag_of(line)
        if record_start == 0:
            # between records: wait for the next PT, ignore headers/EF/blank
            if tag == "PT":
                record_start = lineno
                tags = {"PT": [line[3:].strip()]}
                current_tag = "PT"
            continue
        if tag == "ER":
            records.append(_build_record(tags))
            record_start = 0
            current_tag = None
        elif tag in ("PT", "EF"):
            raise WosParseError(
                f"record starting at line {record_start} has no ER terminator",
                line=record_start,
            )
        elif tag is not None:
            current_tag = tag
            tags.setdefault(tag, []).append(line[3:].strip())
        elif line.startswith("   ") and line.strip() and current_tag is not None:
            tags[current_tag].append(line.strip())
        # anything else inside a record (stray blank line) is tolerated

    if record_start:
        raise WosParseError(
            f"record starting at line {record_start} has no ER terminator",
            line=record_start,
        )
    if not records:
        raise WosParseError("no publication record (PT tag) found", line=1)
    return records


def _build_record(tags: dict[str, list[str]]) -> PublicationRecord:
    year = None
    for value in tags.get("PY", []):
        value = value.strip()
        if len(value) == 4 and value.isdigit():
            year = int(value)
            break
    return PublicationRecord(
        publication_year=year,
        authors=[a for a in tags.get("AU", []) if a],
        title=" ".join(tags["TI"]) if "TI" in tags else None,
        source=" ".join(tags["SO"]) if "SO" in tags else None,
        cited_refs=[r for r in tags.get("CR", []) if r],
    )


def _split_author(author_full: str) -> tuple[str, str]:
    """Derive (last_name, first_initial) from the author segment.

    The final whitespace token counts as an initials block only when it
    contains no lowercase vowels ("JE", "P.", "a.j." fails); otherwise the
    last name is the first token stripped of punctuation.
    """
    tokens = author_full.split()
    if not tokens:
        return "", ""
    if len(tokens) >= 2 and not (set(tokens[-1]) & LOWERCASE_VOWELS):
        initial = next((c for c in tokens[-1] if c.isalpha()), "")
        return " ".join(tokens[:-1]), initial
    last = tokens[0].strip(string.punctuation)
    if len(tokens) >= 2:
        initial = next((c for c in tokens[1] if c.isalpha()), "")
    else:
        initial = ""
    return last, initial


def _title_short(source_title: str) -> str:
    words = source_title.split()
    if len(words) > 1:
        return "".join(w[0] for w in words)
    return source_title


def parse_cited_reference(raw: str) -> ParsedCR:
    """Split a raw WoS cited-reference string into fields.

    Grammar: segments are separated by ", "; segment one is the author, the
    first later all-digit 4-character segment is the year, the segment after
    the year is the source title, and among the remaining segments the first
    ``V<digits>``, ``P<digits>`` and ``DOI `` prefixes (case-insensitive)
    yield volume, page and DOI.  Total: strings without a year degrade to an
    author-only parse instead of raising.
    """
    segments = raw.split(", ")
    year_idx = None
    for i in range(1, len(segments)):
        seg = segments[i]
        if len(seg) == 4 and seg.isdigit() and seg.isascii():
            year_idx = i
            break

    if year_idx is None:
        author_full = raw
        year = None
        source = ""
        source_title = ""
        volume = page = doi = None
    else:
        author_full = segments[0]
        year = int(segments[year_idx])
        source_title = segments[year_idx + 1] if year_idx + 1 < len(segments) else ""
        source = ", ".join(segments[year_idx + 1 :])
        volume = page = doi = None
        for seg in segments[year_idx + 2 :]:
            if volume is None and len(seg) >= 2 and seg[0] in "Vv" and seg[1].isdigit():
                volume = seg[1:]
            elif page is None and len(seg) >= 2 and seg[0] in "Pp" and seg[1].isdigit():
                page = seg[1:]
            elif doi is None and seg[:4].upper() == "DOI ":
                doi = seg[4:]

    last_name, first_initial = _split_author(author_full)
    return ParsedCR(
        raw=raw,
        author_full=author_full,
        last_name=last_name,
        first_initial=first_initial,
        year=year,
        source=source,
        source_title=source_title,
        title_short=_title_short(source_title),
        volume=volume,
        page=page,
        doi=doi,
    )


def import_files(files: list[str], config: ImportConfig = ImportConfig()):
    """Build a Dataset from the contents of one or more export files.

    Files that fail to parse are reported as warnings and skipped; if every
    file fails, WosImportError is raised.  References outside the configured
    year bounds are dropped, and no further occurrences are accepted once
    ``max_crs`` have been (0 disables the cap).
    """
    from .dataset import build_dataset

    if not files:
        raise ValueError("at least one file is required")

    publications: list[PublicationRecord] = []
    errors: list[str] = []
    for index, content in enumerate(files):
        try:
            publications.extend(parse_wos_file(content))
        except WosParseError as exc:
            errors.append(f"file {index + 1}: {exc}")
    if not publications:
        raise WosImportError(errors or ["no records found"])
    for message in errors:
        warnings.warn(f"skipped unparseable {message}", stacklevel=2)

    bounds_active = config.min_cry > 0 or config.max_cry > 0
    parsed_cache: dict[str, ParsedCR] = {}
    accepted = 0
    kept_records: list[PublicationRecord] = []
    counts: dict[str, int] = {}
    for record in publications:
        kept_refs: list[str] = []
        for raw in record.cited_refs:
            if config.max_crs and accepted >= config.max_crs:
                break
            parsed = parsed_cache.get(raw)
            if parsed is None:
                parsed = parse_cited_reference(raw)
                parsed_cache[raw] = parsed
            year = parsed.year
            if bounds_active and year is None:
                continue
            if config.min_cry and year < config.min_cry:
                continue
            if config.max_cry and year > config.max_cry:
                continue
            kept_refs.append(raw)
            counts[raw] = counts.get(raw, 0) + 1
            accepted += 1
        kept_records.append(
            PublicationRecord(
                publication_year=record.publication_year,
                authors=record.authors,
                title=record.title,
                source=record.source,
                cited_refs=kept_refs,
            )
        )
    return build_dataset(
        kept_records, [(parsed_cache[raw], n) for raw, n in counts.items()]
    )


def render_wos_export(records: list[PublicationRecord]) -> str:
    """Serialize records back to tagged-export text.

    Inverse of parse_wos_file for the record/CR structure; used to build
    synthetic fixtures.
    """
    lines = ["FN Reference export", "VR 1.0"]
    for record in records:
        lines.append("PT J")
        for i, author in enumerate(record.authors):
            lines.append(("AU " if i == 0 else "   ") + author)
        if record.title is not None:
            lines.append("TI " + record.title)
        if record.source is not None:
            lines.append("SO " + record.source)
        if record.publication_year is not None:
            lines.append(f"PY {record.publication_year}")
        for i, ref in enumerate(record.cited_refs):
            lines.append(("CR " if i == 0 else "   ") + ref)
        lines.append("ER")
        lines.append("")
    lines.append("EF")
    return "\n".join(lines) + "\n"
