"""Session-scoped HTTP facade for the browser UI.

Sessions live in memory with an idle TTL; every mutation bumps the session
revision, and mutation requests may carry the revision they expect so that
two racing tabs cannot silently overwrite each other (the loser gets 409).
Export endpoints reuse the library renderers, so their bytes are identical
to the command line's.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Literal

from fastapi import FastAPI, File, Form, HTTPException, Query, UploadFile
from fastapi.responses import PlainTextResponse, Response
from pydantic import BaseModel

from . import disambiguation, spectroscopy, wos
from .dataset import (
    CitedReference,
    Dataset,
    InvalidRangeError,
    UnknownReferenceError,
    dataset_info,
    remove_below_count,
    remove_below_pct_in_year,
    remove_by_year,
    remove_selected,
    retain_by_year,
    save_csv,
)

__all__ = ["create_app"]

ROW_FIELDS = (
    "id",
    "raw",
    "year",
    "n_cr",
    "pct_in_year",
    "pct_all_years",
    "author",
    "last_name",
    "first_initial",
    "source",
    "source_title",
    "title_short",
    "volume",
    "page",
    "doi",
    "cluster_main",
    "cluster_sub",
    "cluster_size",
)


@dataclass
class _Session:
    dataset: Dataset = field(default_factory=lambda: Dataset([], [], {}))
    partition: disambiguation.Partition | None = None
    config: disambiguation.SimilarityConfig = field(
        default_factory=disambiguation.SimilarityConfig
    )
    revision: int = 0
    last_access: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)


class ImportSettings(BaseModel):
    max_crs: int = 100_000
    min_cry: int = 0
    max_cry: int = 0


class FilterRequest(BaseModel):
    revision: int | None = None
    year_ranges: list[tuple[int, int]] | None = None
    retain: tuple[int, int] | None = None
    min_count: int | None = None
    min_pct: float | None = None
    selected_ids: list[int] | None = None


class ClusterRequest(BaseModel):
    revision: int | None = None
    threshold: float = 0.75
    require_volume: bool = False
    require_page: bool = False
    require_doi: bool = False


class RefineRequest(BaseModel):
    revision: int | None = None
    volume: bool = False
    page: bool = False
    doi: bool = False


class ManualRequest(BaseModel):
    revision: int | None = None
    action: Literal["same", "different", "extract"]
    ids: list[int]


class RevisionOnly(BaseModel):
    revision: int | None = None


def _row(ref: CitedReference) -> dict:
    p = ref.parsed
    return {
        "id": ref.id,
        "raw": p.raw,
        "year": p.year,
        "n_cr": ref.n_cr,
        "pct_in_year": float(ref.pct_in_year),
        "pct_all_years": float(ref.pct_all_years),
        "author": p.author_full,
        "last_name": p.last_name,
        "first_initial": p.first_initial,
        "source": p.source,
        "source_title": p.source_title,
        "title_short": p.title_short,
        "volume": p.volume,
        "page": p.page,
        "doi": p.doi,
        "cluster_main": ref.cluster_main,
        "cluster_sub": ref.cluster_sub,
        "cluster_size": ref.cluster_size,
    }


def _info(ds: Dataset) -> dict:
    info = dataset_info(ds)
    return {
        "n_publications": info.n_publications,
        "n_references_distinct": info.n_references_distinct,
        "n_cr_total": info.n_cr_total,
        "n_clusters": info.n_clusters,
        "min_rpy": info.min_rpy,
        "max_rpy": info.max_rpy,
    }


def _parse_sort(spec: str) -> list[tuple[str, bool]]:
    columns = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, direction = part.partition(":")
        if name not in ROW_FIELDS:
            raise HTTPException(422, f"unknown sort column {name!r}")
        if direction not in ("", "asc", "desc"):
            raise HTTPException(422, f"unknown sort direction {direction!r}")
        columns.append((name, direction == "desc"))
    return columns


def _sorted_rows(rows: list[dict], sort_spec: list[tuple[str, bool]]) -> list[dict]:
    # stable multi-column sort: apply the last column first; missing values
    # sort as smallest
    for name, descending in reversed(sort_spec):
        rows.sort(
            key=lambda row: (0,) if row[name] is None else (1, row[name]),
            reverse=descending,
        )
    return rows


def create_app(static_dir: str | None = None, session_ttl: float = 3600.0) -> FastAPI:
    app = FastAPI(title="refspect")
    sessions: dict[str, _Session] = {}

    def get_session(session_id: str) -> _Session:
        now = time.monotonic()
        for sid in [s for s, sess in sessions.items() if now - sess.last_access > session_ttl]:
            del sessions[sid]
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, "unknown session")
        session.last_access = now
        return session

    def check_revision(session: _Session, expected: int | None) -> None:
        if expected is not None and expected != session.revision:
            raise HTTPException(
                409,
                f"revision conflict: expected {expected}, session is at {session.revision}",
            )

    def mutation_response(session: _Session, before: dict[int, tuple[int, int, int]]) -> dict:
        affected = [
            _row(ref)
            for ref in session.dataset.references
            if before.get(ref.id) != (ref.cluster_main, ref.cluster_sub, ref.n_cr)
        ]
        return {
            "revision": session.revision,
            "info": _info(session.dataset),
            "affected_rows": affected,
            "undo_depth": len(session.partition.undo_stack) if session.partition else 0,
        }

    def snapshot(session: _Session) -> dict[int, tuple[int, int, int]]:
        return {
            ref.id: (ref.cluster_main, ref.cluster_sub, ref.n_cr)
            for ref in session.dataset.references
        }

    @app.post("/sessions")
    def create_session() -> dict:
        session_id = secrets.token_hex(16)
        sessions[session_id] = _Session()
        return {"id": session_id, "revision": 0}

    @app.post("/sessions/{session_id}/import")
    def import_wos(
        session_id: str,
        files: list[UploadFile] = File(...),
        max_crs: int = Form(100_000),
        min_cry: int = Form(0),
        max_cry: int = Form(0),
    ) -> dict:
        session = get_session(session_id)
        contents = []
        for upload in files:
            try:
                contents.append(upload.file.read().decode("utf-8"))
            except UnicodeDecodeError as exc:
                raise HTTPException(422, f"{upload.filename}: not UTF-8 ({exc})") from None
        with session.lock:
            try:
                config = wos.ImportConfig(max_crs=max_crs, min_cry=min_cry, max_cry=max_cry)
                dataset = wos.import_files(contents, config)
            except (ValueError, wos.WosImportError) as exc:
                raise HTTPException(422, str(exc)) from None
            session.dataset = dataset
            session.partition = disambiguation.identity_partition(dataset)
            session.config = disambiguation.SimilarityConfig()
            session.revision += 1
        return {"revision": session.revision, "info": _info(session.dataset)}

    @app.get("/sessions/{session_id}/info")
    def info(session_id: str) -> dict:
        session = get_session(session_id)
        return {"revision": session.revision, "info": _info(session.dataset)}

    @app.get("/sessions/{session_id}/spectrum")
    def spectrum(
        session_id: str,
        year_from: int | None = Query(None, alias="from"),
        year_to: int | None = Query(None, alias="to"),
        half_window: int = 2,
    ) -> dict:
        session = get_session(session_id)
        try:
            series = spectroscopy.year_series(session.dataset, half_window)
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None
        points = [
            {"year": p.year, "n_cr": p.n_cr, "deviation": float(p.deviation)}
            for p in series.points
            if (year_from is None or p.year >= year_from)
            and (year_to is None or p.year <= year_to)
        ]
        return {"revision": session.revision, "half_window": half_window, "points": points}

    @app.get("/sessions/{session_id}/references")
    def references(
        session_id: str,
        sort: str = "",
        offset: int = 0,
        limit: int = 1000,
    ) -> dict:
        session = get_session(session_id)
        rows = [_row(ref) for ref in session.dataset.references]
        rows = _sorted_rows(rows, _parse_sort(sort))
        page = rows[offset : offset + limit if limit >= 0 else None]
        return {
            "revision": session.revision,
            "total": len(rows),
            "offset": offset,
            "rows": page,
            "undo_depth": len(session.partition.undo_stack) if session.partition else 0,
        }

    @app.post("/sessions/{session_id}/filter")
    def filter_dataset(session_id: str, request: FilterRequest) -> dict:
        session = get_session(session_id)
        chosen = [
            name
            for name in ("year_ranges", "retain", "min_count", "min_pct", "selected_ids")
            if getattr(request, name) is not None
        ]
        if len(chosen) != 1:
            raise HTTPException(422, "exactly one filter kind per request")
        with session.lock:
            check_revision(session, request.revision)
            ds = session.dataset
            try:
                if request.year_ranges is not None:
                    ds = remove_by_year(ds, request.year_ranges)
                elif request.retain is not None:
                    ds = retain_by_year(ds, *request.retain)
                elif request.min_count is not None:
                    ds = remove_below_count(ds, request.min_count)
                elif request.min_pct is not None:
                    ds = remove_below_pct_in_year(ds, request.min_pct)
                else:
                    ds = remove_selected(ds, request.selected_ids)
            except (ValueError, UnknownReferenceError, InvalidRangeError) as exc:
                raise HTTPException(422, str(exc)) from None
            session.dataset = ds
            session.partition = disambiguation.identity_partition(
                ds,
                next_sub_id=session.partition.next_sub_id if session.partition else None,
            )
            session.revision += 1
        return {"revision": session.revision, "info": _info(session.dataset)}

    @app.post("/sessions/{session_id}/cluster")
    def cluster_endpoint(session_id: str, request: ClusterRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            check_revision(session, request.revision)
            before = snapshot(session)
            discards_edits = session.partition is not None and bool(
                session.partition.undo_stack
            )
            try:
                config = disambiguation.SimilarityConfig(
                    threshold=request.threshold,
                    require_volume=request.require_volume,
                    require_page=request.require_page,
                    require_doi=request.require_doi,
                )
            except ValueError as exc:
                raise HTTPException(422, str(exc)) from None
            session.config = config
            session.partition = disambiguation.cluster(session.dataset, config)
            session.dataset = disambiguation.apply_partition(session.dataset, session.partition)
            session.revision += 1
            response = mutation_response(session, before)
            if discards_edits:
                response["warning"] = "re-clustering discarded the manual corrections"
            return response

    @app.post("/sessions/{session_id}/refine")
    def refine_endpoint(session_id: str, request: RefineRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            check_revision(session, request.revision)
            if session.partition is None:
                raise HTTPException(422, "no dataset imported")
            before = snapshot(session)
            config = disambiguation.SimilarityConfig(
                threshold=session.config.threshold,
                require_volume=request.volume,
                require_page=request.page,
                require_doi=request.doi,
            )
            session.config = config
            session.partition = disambiguation.refine_by_attributes(
                session.dataset, session.partition, config
            )
            session.dataset = disambiguation.apply_partition(session.dataset, session.partition)
            session.revision += 1
            return mutation_response(session, before)

    @app.post("/sessions/{session_id}/manual")
    def manual_endpoint(session_id: str, request: ManualRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            check_revision(session, request.revision)
            if session.partition is None:
                raise HTTPException(422, "no dataset imported")
            before = snapshot(session)
            try:
                getattr(session.partition, request.action)(request.ids)
            except (ValueError, UnknownReferenceError) as exc:
                raise HTTPException(422, str(exc)) from None
            session.dataset = disambiguation.apply_partition(session.dataset, session.partition)
            session.revision += 1
            return mutation_response(session, before)

    @app.post("/sessions/{session_id}/undo")
    def undo_endpoint(session_id: str, request: RevisionOnly | None = None) -> dict:
        session = get_session(session_id)
        with session.lock:
            check_revision(session, request.revision if request else None)
            if session.partition is None:
                raise HTTPException(422, "no dataset imported")
            before = snapshot(session)
            undone = session.partition.undo()
            if undone:
                session.dataset = disambiguation.apply_partition(
                    session.dataset, session.partition
                )
                session.revision += 1
            response = mutation_response(session, before)
            response["undone"] = undone
            return response

    @app.post("/sessions/{session_id}/merge")
    def merge_endpoint(session_id: str, request: RevisionOnly | None = None) -> dict:
        session = get_session(session_id)
        with session.lock:
            check_revision(session, request.revision if request else None)
            if session.partition is None:
                raise HTTPException(422, "no dataset imported")
            before = snapshot(session)
            session.dataset = disambiguation.merge(session.dataset, session.partition)
            session.partition = disambiguation.identity_partition(
                session.dataset, next_sub_id=session.partition.next_sub_id
            )
            session.revision += 1
            return mutation_response(session, before)

    @app.get("/sessions/{session_id}/export/table.csv")
    def export_table(session_id: str) -> Response:
        session = get_session(session_id)
        return PlainTextResponse(save_csv(session.dataset), media_type="text/csv")

    @app.get("/sessions/{session_id}/export/chart.csv")
    def export_chart(session_id: str, half_window: int = 2) -> Response:
        session = get_session(session_id)
        series = spectroscopy.year_series(session.dataset, half_window)
        return PlainTextResponse(
            spectroscopy.export_chart_csv(series), media_type="text/csv"
        )

    @app.get("/sessions/{session_id}/export/chart.svg")
    def export_svg(
        session_id: str,
        half_window: int = 2,
        curves: str = "both",
        year_from: int | None = Query(None, alias="from"),
        year_to: int | None = Query(None, alias="to"),
        title: str = "Cited references per publication year",
        line_width: float = 1.5,
    ) -> Response:
        session = get_session(session_id)
        series = spectroscopy.year_series(session.dataset, half_window)
        try:
            options = spectroscopy.ChartOptions(
                curves=curves,
                line_width=line_width,
                title=title,
                year_from=year_from,
                year_to=year_to,
            )
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None
        return Response(
            spectroscopy.render_chart_svg(series, options), media_type="image/svg+xml"
        )

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
