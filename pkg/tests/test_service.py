import time

import pytest
from fastapi.testclient import TestClient

from conftest import HIRSCH_VARIANTS, JACSO_OIR_ROWS, JACSO_2008_ROWS, LEYDESDORFF_ROWS, wos_text
from refspect.cli import main as cli_main
from refspect.service import create_app


@pytest.fixture
def client():
    with TestClient(create_app()) as c:
        yield c


def new_session(client):
    response = client.post("/sessions")
    assert response.status_code == 200
    body = response.json()
    assert body["revision"] == 0
    return body["id"]


def import_counts(client, sid, counts, **form):
    files = [("files", ("data.txt", wos_text(counts).encode("utf-8"), "text/plain"))]
    response = client.post(f"/sessions/{sid}/import", files=files, data=form)
    assert response.status_code == 200, response.text
    return response.json()


class TestSessions:
    def test_unknown_session_is_404(self, client):
        assert client.get("/sessions/deadbeef/info").status_code == 404

    def test_import_reports_info(self, client):
        sid = new_session(client)
        body = import_counts(client, sid, HIRSCH_VARIANTS)
        assert body["revision"] == 1
        assert body["info"]["n_publications"] == 1
        assert body["info"]["n_cr_total"] == 177
        assert body["info"]["n_references_distinct"] == 7
        assert body["info"]["min_rpy"] == 2005

    def test_import_respects_settings(self, client):
        sid = new_session(client)
        counts = [("Early A, 1850, OLD", 1), ("Garfield E, 1955, SCIENCE", 2)]
        body = import_counts(client, sid, counts, min_cry=1900)
        assert body["info"]["n_cr_total"] == 2

    def test_expired_session_vanishes(self):
        with TestClient(create_app(session_ttl=0.05)) as client:
            sid = new_session(client)
            time.sleep(0.1)
            assert client.get(f"/sessions/{sid}/info").status_code == 404

    def test_reads_do_not_change_revision(self, client):
        sid = new_session(client)
        import_counts(client, sid, JACSO_OIR_ROWS)
        before = client.get(f"/sessions/{sid}/info").json()["revision"]
        client.get(f"/sessions/{sid}/references")
        client.get(f"/sessions/{sid}/spectrum")
        client.get(f"/sessions/{sid}/export/table.csv")
        assert client.get(f"/sessions/{sid}/info").json()["revision"] == before


class TestSpectrum:
    def test_empty_session_yields_empty_series(self, client):
        sid = new_session(client)
        response = client.get(f"/sessions/{sid}/spectrum")
        assert response.status_code == 200
        assert response.json()["points"] == []

    def test_slice_and_window(self, client):
        sid = new_session(client)
        import_counts(
            client, sid,
            [("A B, 1990, X", 4), ("C D, 1995, Y", 2), ("E F, 2000, Z", 1)],
        )
        body = client.get(f"/sessions/{sid}/spectrum?from=1994&to=1996").json()
        assert [p["year"] for p in body["points"]] == [1994, 1995, 1996]
        assert body["points"][1]["n_cr"] == 2
        assert body["half_window"] == 2


class TestReferencesTable:
    def test_multi_column_sort(self, client):
        sid = new_session(client)
        import_counts(
            client, sid,
            [
                ("A B, 1990, X", 1),
                ("C D, 1990, Y", 5),
                ("E F, 1989, Z", 3),
                ("G H, 1989, W", 3),
            ],
        )
        body = client.get(
            f"/sessions/{sid}/references",
            params={"sort": "year:desc,pct_in_year:desc,id:asc"},
        ).json()
        rows = body["rows"]
        assert [r["raw"][0] for r in rows] == ["C", "A", "E", "G"]
        assert body["total"] == 4

    def test_offset_and_limit(self, client):
        sid = new_session(client)
        import_counts(client, sid, [(f"A B, 1990, X{i}", 1) for i in range(10)])
        body = client.get(f"/sessions/{sid}/references?offset=3&limit=2").json()
        assert [r["id"] for r in body["rows"]] == [4, 5]

    def test_unknown_sort_column_is_422(self, client):
        sid = new_session(client)
        import_counts(client, sid, JACSO_OIR_ROWS)
        assert (
            client.get(f"/sessions/{sid}/references?sort=bogus:desc").status_code == 422
        )


class TestFilter:
    def test_each_filter_kind(self, client):
        sid = new_session(client)
        counts = [
            ("Early A, 1850, OLD", 3),
            ("Garfield E, 1955, SCIENCE", 25),
            ("Other B, 1955, ELSEWHERE", 2),
            ("Late C, 1990, NEW J", 1),
        ]
        import_counts(client, sid, counts)
        r = client.post(f"/sessions/{sid}/filter", json={"retain": [1900, 1995]})
        assert r.json()["info"]["n_references_distinct"] == 3
        r = client.post(f"/sessions/{sid}/filter", json={"min_count": 2})
        assert r.json()["info"]["n_references_distinct"] == 2
        r = client.post(f"/sessions/{sid}/filter", json={"min_pct": 0.5})
        assert r.json()["info"]["n_references_distinct"] == 1

    def test_selected_ids_and_year_ranges(self, client):
        sid = new_session(client)
        import_counts(client, sid, JACSO_2008_ROWS)
        r = client.post(f"/sessions/{sid}/filter", json={"selected_ids": [1, 2]})
        assert r.json()["info"]["n_references_distinct"] == 6
        r = client.post(f"/sessions/{sid}/filter", json={"year_ranges": [[2008, 2008]]})
        assert r.json()["info"]["n_references_distinct"] == 0

    def test_exactly_one_kind_required(self, client):
        sid = new_session(client)
        import_counts(client, sid, JACSO_OIR_ROWS)
        assert client.post(f"/sessions/{sid}/filter", json={}).status_code == 422
        assert (
            client.post(
                f"/sessions/{sid}/filter", json={"min_count": 1, "min_pct": 0.1}
            ).status_code
            == 422
        )

    def test_domain_errors_are_422(self, client):
        sid = new_session(client)
        import_counts(client, sid, JACSO_OIR_ROWS)
        assert (
            client.post(f"/sessions/{sid}/filter", json={"selected_ids": [99]}).status_code
            == 422
        )
        assert (
            client.post(
                f"/sessions/{sid}/filter", json={"year_ranges": [[2010, 2000]]}
            ).status_code
            == 422
        )


class TestClusterWorkflow:
    def test_cluster_refine_on_jacso_fixture(self, client):
        sid = new_session(client)
        import_counts(client, sid, JACSO_OIR_ROWS)
        body = client.post(f"/sessions/{sid}/cluster", json={"threshold": 0.75}).json()
        rows = body["affected_rows"]
        assert body["info"]["n_clusters"] == 1
        assert len({(r["cluster_main"], r["cluster_sub"]) for r in rows}) == 1
        assert all(r["cluster_size"] == 5 for r in rows)

        body = client.post(f"/sessions/{sid}/refine", json={"page": True}).json()
        rows = {r["id"]: r for r in body["affected_rows"]}
        table = client.get(f"/sessions/{sid}/references").json()["rows"]
        assert len({r["cluster_sub"] for r in table}) == 5
        assert len({r["cluster_main"] for r in table}) == 1
        # the lowest id kept its sub id, the others were reassigned
        assert set(rows) == {2, 3, 4, 5}

    def test_manual_undo_roundtrip(self, client):
        sid = new_session(client)
        import_counts(client, sid, LEYDESDORFF_ROWS)
        client.post(f"/sessions/{sid}/cluster", json={"threshold": 0.75})
        before = {
            r["id"]: (r["cluster_main"], r["cluster_sub"])
            for r in client.get(f"/sessions/{sid}/references").json()["rows"]
        }
        body = client.post(
            f"/sessions/{sid}/manual", json={"action": "different", "ids": [1, 2, 3, 4, 5, 6]}
        ).json()
        assert body["undo_depth"] == 1
        body = client.post(
            f"/sessions/{sid}/manual", json={"action": "same", "ids": [2, 6]}
        ).json()
        assert body["undo_depth"] == 2
        rows = {r["id"]: r for r in client.get(f"/sessions/{sid}/references").json()["rows"]}
        assert rows[2]["cluster_sub"] == rows[6]["cluster_sub"]

        for expected_depth in (1, 0):
            body = client.post(f"/sessions/{sid}/undo", json={}).json()
            assert body["undone"] is True
            assert body["undo_depth"] == expected_depth
        after = {
            r["id"]: (r["cluster_main"], r["cluster_sub"])
            for r in client.get(f"/sessions/{sid}/references").json()["rows"]
        }
        assert after == before

        body = client.post(f"/sessions/{sid}/undo", json={}).json()
        assert body["undone"] is False

    def test_undo_noop_keeps_revision(self, client):
        sid = new_session(client)
        import_counts(client, sid, LEYDESDORFF_ROWS)
        client.post(f"/sessions/{sid}/cluster", json={})
        revision = client.get(f"/sessions/{sid}/info").json()["revision"]
        body = client.post(f"/sessions/{sid}/undo", json={}).json()
        assert body["undone"] is False and body["revision"] == revision

    def test_merge_conserves_totals(self, client):
        sid = new_session(client)
        import_counts(client, sid, HIRSCH_VARIANTS)
        client.post(f"/sessions/{sid}/cluster", json={})
        body = client.post(f"/sessions/{sid}/merge", json={}).json()
        assert body["info"]["n_references_distinct"] == 1
        assert body["info"]["n_cr_total"] == 177
        (row,) = body["affected_rows"]
        assert row["raw"] == HIRSCH_VARIANTS[5][0]

    def test_manual_unknown_id_is_422(self, client):
        sid = new_session(client)
        import_counts(client, sid, LEYDESDORFF_ROWS)
        client.post(f"/sessions/{sid}/cluster", json={})
        response = client.post(
            f"/sessions/{sid}/manual", json={"action": "same", "ids": [1, 999]}
        )
        assert response.status_code == 422

    def test_invalid_threshold_is_422(self, client):
        sid = new_session(client)
        import_counts(client, sid, JACSO_OIR_ROWS)
        assert (
            client.post(f"/sessions/{sid}/cluster", json={"threshold": 0.2}).status_code
            == 422
        )


class TestRevisionConflicts:
    def test_exactly_one_of_two_racing_mutations_wins(self, client):
        sid = new_session(client)
        import_counts(client, sid, JACSO_OIR_ROWS)
        revision = client.get(f"/sessions/{sid}/info").json()["revision"]
        first = client.post(
            f"/sessions/{sid}/cluster", json={"threshold": 0.75, "revision": revision}
        )
        second = client.post(
            f"/sessions/{sid}/cluster", json={"threshold": 0.5, "revision": revision}
        )
        assert sorted([first.status_code, second.status_code]) == [200, 409]

    def test_mutation_without_revision_always_applies(self, client):
        sid = new_session(client)
        import_counts(client, sid, JACSO_OIR_ROWS)
        assert client.post(f"/sessions/{sid}/cluster", json={}).status_code == 200
        assert client.post(f"/sessions/{sid}/cluster", json={}).status_code == 200


class TestExports:
    def test_exports_match_cli_bytes(self, client, tmp_path):
        data = tmp_path / "jacso2008.txt"
        data.write_text(wos_text(JACSO_2008_ROWS), encoding="utf-8")
        table = tmp_path / "out.csv"
        chart = tmp_path / "chart.csv"
        svg = tmp_path / "chart.svg"
        assert (
            cli_main(
                [
                    "import", str(data),
                    "cluster", "--threshold", "0.5",
                    "refine", "--page",
                    "merge",
                    "export", "--table", str(table), "--chart", str(chart), "--svg", str(svg),
                ]
            )
            == 0
        )

        sid = new_session(client)
        import_counts(client, sid, JACSO_2008_ROWS)
        client.post(f"/sessions/{sid}/cluster", json={"threshold": 0.5})
        client.post(f"/sessions/{sid}/refine", json={"page": True})
        client.post(f"/sessions/{sid}/merge", json={})
        assert client.get(f"/sessions/{sid}/export/table.csv").text == table.read_text(
            encoding="utf-8"
        )
        assert client.get(f"/sessions/{sid}/export/chart.csv").text == chart.read_text(
            encoding="utf-8"
        )
        assert client.get(f"/sessions/{sid}/export/chart.svg").text == svg.read_text(
            encoding="utf-8"
        )

    def test_svg_options(self, client):
        sid = new_session(client)
        import_counts(client, sid, HIRSCH_VARIANTS)
        response = client.get(f"/sessions/{sid}/export/chart.svg?curves=deviation")
        assert response.headers["content-type"].startswith("image/svg+xml")
        assert response.text.count("<polyline") == 1


def test_recluster_after_manual_edit_reports_warning(client):
    sid = new_session(client)
    import_counts(client, sid, LEYDESDORFF_ROWS)
    client.post(f"/sessions/{sid}/cluster", json={})
    client.post(f"/sessions/{sid}/manual", json={"action": "different", "ids": [1, 2]})
    body = client.post(f"/sessions/{sid}/cluster", json={"threshold": 0.5}).json()
    assert "manual corrections" in body["warning"]
    assert body["undo_depth"] == 0
