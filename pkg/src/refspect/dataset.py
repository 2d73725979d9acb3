"""Working set of cited references: statistics, filtering, CSV persistence.

A Dataset is treated as a value: every operation returns a new Dataset with
its statistics recomputed, the inputs are never mutated.  References without
a recognizable year are carried in a separate "no year" bucket (totals key
``None``); they stay out of the chart but keep the percentage invariants.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from fractions import Fraction

from .wos import ParsedCR, PublicationRecord

__all__ = [
    "CitedReference",
    "Dataset",
    "DatasetInfo",
    "UnknownReferenceError",
    "InvalidRangeError",
    "CsvSchemaError",
    "CSV_COLUMNS",
    "build_dataset",
    "recompute_statistics",
    "dataset_info",
    "remove_selected",
    "remove_by_year",
    "retain_by_year",
    "remove_below_count",
    "remove_below_pct_in_year",
    "save_csv",
    "open_csv",
]


class UnknownReferenceError(Exception):
    """An operation named a reference id that is not in the dataset."""

    def __init__(self, ref_id: int):
        super().__init__(f"unknown reference id {ref_id}")
        self.ref_id = ref_id


class InvalidRangeError(Exception):
    """A year range with from > to."""


class CsvSchemaError(Exception):
    """A CSV file whose header is missing required columns."""

    def __init__(self, missing: list[str]):
        super().__init__("missing CSV columns: " + ", ".join(missing))
        self.missing = missing


@dataclass(frozen=True)
class CitedReference:
    """One distinct cited-reference string with counts and cluster state.

    ``pct_in_year`` is this reference's share of all occurrences in its
    publication year, ``pct_all_years`` its share of the whole dataset; both
    are kept as exact fractions.  ``(cluster_main, cluster_sub)`` is the
    two-part cluster identifier rendered as "main/sub".
    """

    id: int
    parsed: ParsedCR
    n_cr: int
    pct_in_year: Fraction
    pct_all_years: Fraction
    cluster_main: int
    cluster_sub: int
    cluster_size: int

    @property
    def raw(self) -> str:
        return self.parsed.raw

    @property
    def year(self) -> int | None:
        return self.parsed.year


@dataclass
class Dataset:
    publications: list[PublicationRecord]
    references: list[CitedReference]
    totals: dict[int | None, int]

    @property
    def total_occurrences(self) -> int:
        return sum(r.n_cr for r in self.references)


@dataclass(frozen=True)
class DatasetInfo:
    """The status-bar summary: counts, cluster count and year range."""

    n_publications: int
    n_references_distinct: int
    n_cr_total: int
    n_clusters: int
    min_rpy: int | None
    max_rpy: int | None


def build_dataset(
    publications: list[PublicationRecord],
    parsed_counts: list[tuple[ParsedCR, int]],
) -> Dataset:
    """Assemble a Dataset from parsed references with occurrence counts.

    Ids are assigned 1..n in list order; every reference starts as its own
    singleton cluster (main = sub = id).
    """
    references = [
        CitedReference(
            id=i,
            parsed=parsed,
            n_cr=n,
            pct_in_year=Fraction(0),
            pct_all_years=Fraction(0),
            cluster_main=i,
            cluster_sub=i,
            cluster_size=1,
        )
        for i, (parsed, n) in enumerate(parsed_counts, start=1)
    ]
    return recompute_statistics(Dataset(publications, references, {}))


def recompute_statistics(ds: Dataset) -> Dataset:
    """Rebuild totals, both percentage columns and cluster sizes."""
    totals: dict[int | None, int] = {}
    for ref in ds.references:
        totals[ref.year] = totals.get(ref.year, 0) + ref.n_cr
    total_all = sum(totals.values())
    sizes: dict[tuple[int, int], int] = {}
    for ref in ds.references:
        key = (ref.cluster_main, ref.cluster_sub)
        sizes[key] = sizes.get(key, 0) + 1
    references = [
        replace(
            ref,
            pct_in_year=Fraction(ref.n_cr, totals[ref.year]),
            pct_all_years=Fraction(ref.n_cr, total_all),
            cluster_size=sizes[(ref.cluster_main, ref.cluster_sub)],
        )
        for ref in ds.references
    ]
    return Dataset(ds.publications, references, totals)


def dataset_info(ds: Dataset) -> DatasetInfo:
    years = [y for y in ds.totals if y is not None]
    clusters = {(r.cluster_main, r.cluster_sub) for r in ds.references}
    return DatasetInfo(
        n_publications=len(ds.publications),
        n_references_distinct=len(ds.references),
        n_cr_total=ds.total_occurrences,
        n_clusters=len(clusters),
        min_rpy=min(years) if years else None,
        max_rpy=max(years) if years else None,
    )


def _keep(ds: Dataset, survivors: list[CitedReference]) -> Dataset:
    return recompute_statistics(Dataset(ds.publications, survivors, {}))


def remove_selected(ds: Dataset, ids: list[int]) -> Dataset:
    """Drop the named references; unknown ids abort before any change."""
    known = {r.id for r in ds.references}
    for ref_id in ids:
        if ref_id not in known:
            raise UnknownReferenceError(ref_id)
    doomed = set(ids)
    return _keep(ds, [r for r in ds.references if r.id not in doomed])


def remove_by_year(ds: Dataset, ranges: list[tuple[int, int]]) -> Dataset:
    """Drop references whose year falls inside any of the given ranges."""
    for lo, hi in ranges:
        if lo > hi:
            raise InvalidRangeError(f"inverted year range {lo}-{hi}")

    def hit(year: int | None) -> bool:
        return year is not None and any(lo <= year <= hi for lo, hi in ranges)

    return _keep(ds, [r for r in ds.references if not hit(r.year)])


def retain_by_year(ds: Dataset, year_from: int, year_to: int) -> Dataset:
    """Keep only references inside [year_from, year_to].

    Complement of remove_by_year; references without a year are untouched,
    exactly as they would be by removing the complementary ranges.
    """
    if year_from > year_to:
        raise InvalidRangeError(f"inverted year range {year_from}-{year_to}")
    return _keep(
        ds,
        [r for r in ds.references if r.year is None or year_from <= r.year <= year_to],
    )


def remove_below_count(ds: Dataset, min_n: int) -> Dataset:
    """Drop references cited fewer than min_n times."""
    if min_n < 1:
        raise ValueError("min_n must be at least 1")
    return _keep(ds, [r for r in ds.references if r.n_cr >= min_n])


def remove_below_pct_in_year(ds: Dataset, min_pct: Fraction | float) -> Dataset:
    """Drop references whose share of their year is below min_pct.

    Single pass: the threshold is evaluated against the percentages as they
    stand now, survivors' percentages are then recomputed.
    """
    if not 0 <= min_pct <= 1:
        raise ValueError("min_pct must lie in [0, 1]")
    return _keep(ds, [r for r in ds.references if r.pct_in_year >= min_pct])


CSV_COLUMNS = [
    "ID",
    "Cited Reference",
    "Cited Reference Year",
    "Number of Cited References",
    "Percent in Year",
    "Percent over all Years",
    "Author",
    "Last Name",
    "First Initial",
    "Source",
    "Source Title",
    "Title Short",
    "Volume",
    "Page",
    "DOI",
    "ClusterID",
    "Cluster Size",
]


def _fmt_pct(value: Fraction) -> str:
    return f"{float(value) * 100:.2f}"


def save_csv(ds: Dataset) -> str:
    """Render the reference table as CSV (RFC-4180 quoting, LF line ends)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in ds.references:
        p = r.parsed
        writer.writerow(
            [
                r.id,
                p.raw,
                "" if p.year is None else p.year,
                r.n_cr,
                _fmt_pct(r.pct_in_year),
                _fmt_pct(r.pct_all_years),
                p.author_full,
                p.last_name,
                p.first_initial,
                p.source,
                p.source_title,
                p.title_short,
                p.volume or "",
                p.page or "",
                p.doi or "",
                f"{r.cluster_main}/{r.cluster_sub}",
                r.cluster_size,
            ]
        )
    return out.getvalue()


def open_csv(content: str) -> Dataset:
    """Rebuild a Dataset from a table written by save_csv.

    The round trip save -> open -> save is byte-identical.  Derived columns
    (percentages, cluster size) are recomputed rather than trusted.
    """
    reader = csv.reader(io.StringIO(content))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvSchemaError(list(CSV_COLUMNS)) from None
    missing = [c for c in CSV_COLUMNS if c not in header]
    if missing:
        raise CsvSchemaError(missing)
    col = {name: header.index(name) for name in CSV_COLUMNS}

    references = []
    seen_ids: set[int] = set()
    seen_raw: set[str] = set()
    for row in reader:
        if not row:
            continue
        ref_id = int(row[col["ID"]])
        raw = row[col["Cited Reference"]]
        if ref_id in seen_ids:
            raise ValueError(f"duplicate reference id {ref_id}")
        if raw in seen_raw:
            raise ValueError(f"duplicate cited reference string: {raw!r}")
        seen_ids.add(ref_id)
        seen_raw.add(raw)
        year_cell = row[col["Cited Reference Year"]]
        source_title = row[col["Source Title"]]
        parsed = ParsedCR(
            raw=raw,
            author_full=row[col["Author"]],
            last_name=row[col["Last Name"]],
            first_initial=row[col["First Initial"]],
            year=int(year_cell) if year_cell else None,
            source=row[col["Source"]],
            source_title=source_title,
            title_short=row[col["Title Short"]],
            volume=row[col["Volume"]] or None,
            page=row[col["Page"]] or None,
            doi=row[col["DOI"]] or None,
        )
        main, _, sub = row[col["ClusterID"]].partition("/")
        references.append(
            CitedReference(
                id=ref_id,
                parsed=parsed,
                n_cr=int(row[col["Number of Cited References"]]),
                pct_in_year=Fraction(0),
                pct_all_years=Fraction(0),
                cluster_main=int(main),
                cluster_sub=int(sub),
                cluster_size=1,
            )
        )
    return recompute_statistics(Dataset([], references, {}))
