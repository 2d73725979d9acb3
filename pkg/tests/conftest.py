"""Shared fixture data and independent oracles.

The table fixtures are cited-reference strings with occurrence counts; WoS
export text is synthesized from them through the package's own renderer so
tests exercise the real import path.
"""

from __future__ import annotations

import random

import pytest

from refspect.dataset import Dataset, build_dataset
from refspect.wos import PublicationRecord, parse_cited_reference, render_wos_export

# Hirsch (2005) variants: six single occurrences around one 171-fold variant.
HIRSCH_VARIANTS = [
    ("HIRSCH J, 2005, P NATL ACAD SCI USA, P16569", 1),
    ("Hirsch J., 2005, P NATL ACAD SCI USA, V102, P165", 1),
    ("Hirsch J. E, 2005, P NATL ACAD SCI USA, V102, P16569", 1),
    ("Hirsch J. E., 2005, P NATL ACAD SCI, V102, P16569", 1),
    ("Hirsch J. E., 2005, P NATL ACAD SCI USA, V102, P16569", 1),
    ("Hirsch JE, 2005, P NATL ACAD SCI USA, V102, P16569, DOI 10.1073/pnas.0507655102", 171),
    ("Hirsch JE, 2005, P NATL ACAD SCI USA, V102, P16572, DOI DOI 10.1073/PNAS.0507655102", 1),
]

# Five distinct Jacso papers in the same journal and year; they cluster at
# the default threshold although they are different publications.
JACSO_OIR_ROWS = [
    ("Jacso P, 2008, ONLINE INFORM REV, V32, P266, DOI 10.1108/14684520810879872", 4),
    ("Jacso P, 2008, ONLINE INFORM REV, V32, P437, DOI 10.1108/14684520810889718", 4),
    ("Jacso P, 2008, ONLINE INFORM REV, V32, P102, DOI 10.1108/14684520810866010", 3),
    ("Jacso P, 2008, ONLINE INFORM REV, V32, P524, DOI 10.1108/14684520810897403", 2),
    ("Jacso P, 2008, ONLINE INFORM REV, V32, P673, DOI 10.1108/14684520810914043", 2),
]

# Three more 2008 rows that join the cluster only at threshold 0.5.
JACSO_2008_EXTRA = [
    ("Jacso P, 2008, LIBR TRENDS, V56, P784", 5),
    ("Jacso P., 2008, GOOGLE SCHOLAR SCI", 2),
    ("Jackson MO, 2008, SOCIAL AND ECONOMIC NETWORKS, P1", 1),
]

JACSO_2008_ROWS = JACSO_OIR_ROWS + JACSO_2008_EXTRA

# Two different Schreiber (2012) papers that cluster automatically.
SCHREIBER_ROWS = [
    ("Schreiber M, 2012, J AM SOC INF SCI TEC, V63, P2062, DOI 10.1002/asi.22703", 2),
    ("Schreiber M, 2012, J INFORMETR, V6, P347, DOI 10.1016/j.joi.2012.02.001", 2),
]

# Six Leydesdorff (2008) rows; only the two P1810 variants (ids 2 and 6)
# refer to the same paper.
LEYDESDORFF_ROWS = [
    ("Leydesdorff L, 2008, J AM SOC INF SCI TEC, V59, P1582, DOI 10.1002/asi.20814", 1),
    ("Leydesdorff L, 2008, J AM SOC INF SCI TEC, V59, P1810, DOI 10.1002/asi.20891", 6),
    ("Leydesdorff L, 2008, J AM SOC INF SCI TEC, V59, P278, DOI 10.1002/asi.20743", 10),
    ("Leydesdorff L, 2008, J AM SOC INF SCI TEC, V59, P77, DOI 10.1002/asi.20732", 2),
    ("Leydesdorff L, 2008, J INFORMETR, V2, P317, DOI 10.1016/j.joi.2008.07.003", 6),
    ("Leydesdorff L., 2008, J AM SOC INFORM SCI, V591, P1810", 1),
]


def wos_text(counts: list[tuple[str, int]], publication_year: int = 2015) -> str:
    """Tagged export text of one record citing each string n times."""
    refs = [raw for raw, n in counts for _ in range(n)]
    record = PublicationRecord(
        publication_year=publication_year,
        authors=["Doe J"],
        title="Synthetic citing paper",
        source="SYNTHETIC JOURNAL",
        cited_refs=refs,
    )
    return render_wos_export([record])


def dataset_from_counts(counts: list[tuple[str, int]]) -> Dataset:
    """Dataset with the given (raw, n_cr) rows, ids in list order."""
    return build_dataset([], [(parse_cited_reference(raw), n) for raw, n in counts])


SURNAME_POOL = [
    "garfield", "lotka", "bradford", "price", "merton", "small", "egghe",
    "rousseau", "braun", "schubert", "glanzel", "moed", "narin", "martin",
    "callon", "cronin", "white", "vinkler", "kessler", "zipf",
]

TITLE_POOL = [
    "scientometrics", "j informetr", "j am soc inform sci", "science",
    "res policy", "soc stud sci", "j doc", "inform process manag",
    "little sci big sci", "citation indexing", "p natl acad sci usa",
    "qual quant", "am j sociol", "libr trends", "online inform rev",
]


def random_counts(
    rng: random.Random,
    n_refs: int,
    years: tuple[int, int] = (1990, 1999),
    with_attributes: bool = True,
) -> list[tuple[str, int]]:
    """Random distinct cited-reference strings with occurrence counts."""
    counts: list[tuple[str, int]] = []
    seen: set[str] = set()
    while len(counts) < n_refs:
        surname = rng.choice(SURNAME_POOL)
        initial = rng.choice("abcdefgj")
        title = rng.choice(TITLE_POOL)
        year = rng.randint(*years)
        parts = [f"{surname} {initial}.", str(year), title]
        if with_attributes and rng.random() < 0.7:
            parts.append(f"v{rng.randint(1, 99)}")
        if with_attributes and rng.random() < 0.7:
            parts.append(f"p{rng.randint(1, 999)}")
        raw = ", ".join(parts)
        if raw in seen:
            continue
        seen.add(raw)
        counts.append((raw, rng.randint(1, 9)))
    return counts


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20150545)


# --- independent oracles -------------------------------------------------


def oracle_levenshtein(s1: str, s2: str) -> int:
    """Textbook full-matrix dynamic program."""
    rows, cols = len(s1) + 1, len(s2) + 1
    d = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        d[i][0] = i
    for j in range(cols):
        d[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            d[i][j] = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (s1[i - 1] != s2[j - 1]),
            )
    return d[-1][-1]


def oracle_deviation(counts: dict[int, int], year: int, half_window: int) -> float:
    """Median deviation by direct enumeration of the window."""
    window = sorted(
        counts.get(y, 0) for y in range(year - half_window, year + half_window + 1)
    )
    n = len(window)
    if n % 2:
        median = window[n // 2]
    else:
        median = (window[n // 2 - 1] + window[n // 2]) / 2
    return counts.get(year, 0) - median


def oracle_components(refs, cfg) -> set[frozenset[int]]:
    """Clusters as BFS connected components of the pairwise match relation,
    restricted to same-year pairs."""
    from refspect.disambiguation import matches

    ids = [r.id for r in refs]
    by_id = {r.id: r for r in refs}
    adjacency: dict[int, set[int]] = {i: set() for i in ids}
    for i, a in enumerate(refs):
        for b in refs[i + 1 :]:
            if a.year != b.year:
                continue
            if matches(a.parsed, b.parsed, cfg):
                adjacency[a.id].add(b.id)
                adjacency[b.id].add(a.id)
    components: set[frozenset[int]] = set()
    seen: set[int] = set()
    for start in ids:
        if start in seen:
            continue
        queue, group = [start], set()
        while queue:
            node = queue.pop()
            if node in group:
                continue
            group.add(node)
            seen.add(node)
            queue.extend(adjacency[node] - group)
        components.add(frozenset(group))
    return components
