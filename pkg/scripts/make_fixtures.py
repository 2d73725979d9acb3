#!/usr/bin/env python3
"""Write the bundled demo datasets as WoS tagged-export files.

    python3 scripts/make_fixtures.py [outdir]

Produces small exports built from well-known cited-reference variant
groups (Hirsch h-index variants, the Jacso Online Information Review rows,
Schreiber and Leydesdorff correction examples) plus a mixed file spanning
1781-2015 for chart experiments.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from conftest import HIRSCH_VARIANTS, JACSO_OIR_ROWS, JACSO_2008_ROWS, SCHREIBER_ROWS, LEYDESDORFF_ROWS, wos_text  # noqa: E402

MIXED = [
    ("Early A, 1781, OLD TRACT", 2),
    ("Lotka AJ, 1926, J WASHINGTON ACAD SC, V16, P317", 5),
    ("lotka a.j., 1926, j washington acad sc, v16, p317", 1),
    ("Bradford S, 1934, ENGINEERING, V137, P85", 4),
    ("Garfield E, 1955, SCIENCE, V122, P108", 25),
    ("Other B, 1955, SOMEWHERE ELSE", 9),
    ("Price DJD, 1963, LITTLE SCI BIG SCI", 4),
    ("[anonymous], 1963, little sci big sci", 1),
    ("Pinski G, 1976, INFORM PROCESS MANAG, V12, P297", 10),
    ("Egghe L, 2006, SCIENTOMETRICS, V69, P131", 171),
    ("Late C, 2015, NEW J", 1),
]


def main() -> None:
    outdir = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    os.makedirs(outdir, exist_ok=True)
    fixtures = {
        "hirsch_variants.txt": HIRSCH_VARIANTS,
        "jacso_online_inform_rev.txt": JACSO_OIR_ROWS,
        "jacso_jackson_2008.txt": JACSO_2008_ROWS,
        "schreiber_pair.txt": SCHREIBER_ROWS,
        "leydesdorff_2008.txt": LEYDESDORFF_ROWS,
        "mixed_span.txt": MIXED,
    }
    for name, counts in fixtures.items():
        path = os.path.join(outdir, name)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(wos_text(counts))
        print(f"wrote {path} ({sum(n for _, n in counts)} cited references)")


if __name__ == "__main__":
    main()
