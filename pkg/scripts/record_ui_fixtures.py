#!/usr/bin/env python3
"""Record live API responses as JSON fixtures for the frontend tests.

    python3 scripts/record_ui_fixtures.py [frontend/tests/fixtures]

Replays the variant-table workflows against the real HTTP app (via the
test client) and captures every payload the UI consumes, so the frontend
suite can assert its rendering against genuine server output without a
running backend.
"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from fastapi.testclient import TestClient  # noqa: E402

from conftest import HIRSCH_VARIANTS, JACSO_2008_ROWS, LEYDESDORFF_ROWS, wos_text  # noqa: E402
from refspect.service import create_app  # noqa: E402

GARFIELD = [
    ("Garfield E, 1955, SCIENCE, V122, P108", 25),
    ("Other A, 1955, ELSEWHERE A", 3),
    ("Other B, 1955, ELSEWHERE B", 3),
    ("Other C, 1955, ELSEWHERE C", 3),
    ("Lotka AJ, 1926, J WASHINGTON ACAD SC, V16, P317", 5),
]


def import_counts(client, sid, counts):
    files = [("files", ("fixture.txt", wos_text(counts).encode(), "text/plain"))]
    response = client.post(f"/sessions/{sid}/import", files=files)
    response.raise_for_status()
    return response.json()


def main() -> None:
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "frontend", "tests", "fixtures"
    )
    os.makedirs(outdir, exist_ok=True)
    fixtures: dict[str, object] = {}

    with TestClient(create_app()) as client:
        # Hirsch variants: cluster at defaults, table sorted the way a chart click asks
        sid = client.post("/sessions").json()["id"]
        fixtures["hirsch_import"] = import_counts(client, sid, HIRSCH_VARIANTS)
        fixtures["hirsch_cluster"] = client.post(
            f"/sessions/{sid}/cluster", json={"threshold": 0.75}
        ).json()
        fixtures["hirsch_references_clicksort"] = client.get(
            f"/sessions/{sid}/references",
            params={"sort": "year:desc,pct_in_year:desc"},
        ).json()

        # Garfield/Lotka spectrum for hover and click behavior
        sid = client.post("/sessions").json()["id"]
        import_counts(client, sid, GARFIELD)
        fixtures["garfield_spectrum"] = client.get(f"/sessions/{sid}/spectrum").json()
        fixtures["garfield_references_clicksort"] = client.get(
            f"/sessions/{sid}/references",
            params={"sort": "year:desc,pct_in_year:desc"},
        ).json()

        # Jacso/Jackson 2008 rows: slider at 50 (threshold 0.5) groups all eight rows
        sid = client.post("/sessions").json()["id"]
        import_counts(client, sid, JACSO_2008_ROWS)
        fixtures["jacso_cluster50"] = client.post(
            f"/sessions/{sid}/cluster", json={"threshold": 0.5}
        ).json()
        fixtures["jacso_references_after"] = client.get(
            f"/sessions/{sid}/references"
        ).json()

        # Leydesdorff rows: manual correction round trip with undo
        sid = client.post("/sessions").json()["id"]
        import_counts(client, sid, LEYDESDORFF_ROWS)
        steps = []
        response = client.post(f"/sessions/{sid}/cluster", json={"threshold": 0.75})
        steps.append({"request": {"kind": "cluster", "threshold": 0.75}, "response": response.json()})
        for kind, ids in (("different", [1, 2, 3, 4, 5, 6]), ("same", [2, 6]), ("extract", [3, 4])):
            response = client.post(
                f"/sessions/{sid}/manual", json={"action": kind, "ids": ids}
            )
            steps.append({"request": {"kind": kind, "ids": ids}, "response": response.json()})
        for _ in range(3):
            response = client.post(f"/sessions/{sid}/undo", json={})
            steps.append({"request": {"kind": "undo"}, "response": response.json()})
        steps.append(
            {
                "request": {"kind": "references"},
                "response": client.get(f"/sessions/{sid}/references").json(),
            }
        )
        fixtures["leydesdorff_manual_steps"] = steps

    for name, payload in fixtures.items():
        path = os.path.join(outdir, f"{name}.json")
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=1, sort_keys=True)
            handle.write("\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
