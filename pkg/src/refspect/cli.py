"""Pipeline-style command line: chained stages against one working dataset.

Stages are executed left to right in a single invocation, e.g.::

    refspect import a.txt b.txt --max-crs 100000 info
    refspect import data.txt cluster --threshold 0.75 refine --page \\
        merge export --table out.csv --chart chart.csv --svg chart.svg

Manual cluster corrections replay from a script file (``manual --script``):
one action per line, the action word followed by tab-separated reference
ids, e.g. ``same<TAB>12<TAB>98``; ``undo`` takes no ids.  Exit status is 0
on success, 2 for usage errors, 1 for data errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass, field
from typing import Callable

from . import disambiguation, spectroscopy, wos
from .dataset import (
    CsvSchemaError,
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

STAGES = ("import", "info", "filter", "cluster", "refine", "manual", "merge", "export")


class UsageError(Exception):
    pass


@dataclass
class PipelineSpec:
    """The parsed pipeline: ordered stages with their argparse namespaces."""

    stages: list[tuple[str, argparse.Namespace]] = field(default_factory=list)

    def validate(self) -> None:
        names = [name for name, _ in self.stages]
        if not names:
            raise UsageError(
                "no stage given; expected a pipeline like 'import FILE ... info'"
            )
        if names[0] != "import":
            raise UsageError(f"'{names[0]}' requires an imported dataset; start with 'import'")
        mutates = any(name in ("filter", "merge") for name in names)
        produces = any(
            name == "export" and (ns.table or ns.chart or ns.svg)
            for name, ns in self.stages
        )
        if mutates and not produces:
            raise UsageError(
                "filter/merge stages need an export output (--table/--chart/--svg)"
            )


def _threshold(text: str) -> float:
    value = float(text)
    if not 0.5 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold {text} outside [0.5, 1.0]")
    return value


def _year_ranges(text: str) -> list[tuple[int, int]]:
    ranges = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected FROM:TO, got {part!r}")
        try:
            ranges.append((int(lo), int(hi)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected FROM:TO, got {part!r}") from None
    return ranges


def _id_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ids, got {text!r}") from None


def _stage_parsers() -> dict[str, argparse.ArgumentParser]:
    parsers: dict[str, argparse.ArgumentParser] = {}

    def make(name: str) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog=f"refspect {name}", add_help=False)
        parsers[name] = parser
        return parser

    p = make("import")
    p.add_argument("paths", nargs="+")
    p.add_argument("--max-crs", type=int, default=100_000)
    p.add_argument("--min-cry", type=int, default=0)
    p.add_argument("--max-cry", type=int, default=0)

    make("info")

    p = make("filter")
    p.add_argument("--remove-ids", type=_id_list)
    p.add_argument("--remove-years", type=_year_ranges, metavar="FROM:TO[,FROM:TO...]")
    p.add_argument("--retain-years", type=_year_ranges, metavar="FROM:TO")
    p.add_argument("--min-count", type=int)
    p.add_argument("--min-pct", type=float, metavar="PERCENT")

    p = make("cluster")
    p.add_argument("--threshold", type=_threshold, default=0.75)

    p = make("refine")
    p.add_argument("--volume", action="store_true")
    p.add_argument("--page", action="store_true")
    p.add_argument("--doi", action="store_true")

    p = make("manual")
    p.add_argument("--script", required=True)

    make("merge")

    p = make("export")
    p.add_argument("--table")
    p.add_argument("--chart")
    p.add_argument("--svg")
    p.add_argument("--half-window", type=int, default=2)
    p.add_argument("--curves", choices=("both", "counts", "deviation"), default="both")
    p.add_argument("--from-year", type=int)
    p.add_argument("--to-year", type=int)
    p.add_argument("--title", default="Cited references per publication year")
    p.add_argument("--line-width", type=float, default=1.5)
    return parsers


def parse_pipeline(argv: list[str]) -> PipelineSpec:
    parsers = _stage_parsers()
    spec = PipelineSpec()
    group: list[str] | None = None
    name = ""
    for token in argv:
        if token in STAGES:
            if group is not None:
                spec.stages.append((name, parsers[name].parse_args(group)))
            name, group = token, []
        elif group is None:
            raise UsageError(f"expected a stage name, got {token!r}")
        else:
            group.append(token)
    if group is not None:
        spec.stages.append((name, parsers[name].parse_args(group)))
    spec.validate()
    return spec


def _write_atomic(path: str, content: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".refspect-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _report(stage: str, ds: Dataset, out: Callable[[str], None]) -> None:
    info = dataset_info(ds)
    rpy = (
        f"{info.min_rpy}-{info.max_rpy}"
        if info.min_rpy is not None
        else "-"
    )
    out(
        f"{stage}: {info.n_publications} publications, "
        f"{info.n_cr_total} cited references ({info.n_references_distinct} distinct), "
        f"{info.n_clusters} clusters, RPY {rpy}"
    )


def _parse_action_script(text: str) -> list[tuple[str, list[int]]]:
    actions = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, *id_tokens = line.split()
        if word not in ("same", "different", "extract", "undo"):
            raise ValueError(f"line {lineno}: unknown action {word!r}")
        if word == "undo" and id_tokens:
            raise ValueError(f"line {lineno}: undo takes no ids")
        try:
            ids = [int(token) for token in id_tokens]
        except ValueError:
            raise ValueError(f"line {lineno}: ids must be integers") from None
        if word != "undo" and not ids:
            raise ValueError(f"line {lineno}: {word} needs at least one id")
        actions.append((word, ids))
    return actions


def run(spec: PipelineSpec, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    echo = lambda line: print(line, file=stdout)

    ds: Dataset | None = None
    partition: disambiguation.Partition | None = None
    config = disambiguation.SimilarityConfig()

    for name, ns in spec.stages:
        if name == "import":
            contents = []
            for path in ns.paths:
                with open(path, "r", encoding="utf-8") as handle:
                    contents.append(handle.read())
            import_config = wos.ImportConfig(
                max_crs=ns.max_crs, min_cry=ns.min_cry, max_cry=ns.max_cry
            )
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                ds = wos.import_files(contents, import_config)
            for warning in caught:
                print(f"warning: {warning.message}", file=stderr)
            partition = disambiguation.identity_partition(ds)
        elif name == "info":
            pass
        elif name == "filter":
            if ns.remove_ids is not None:
                ds = remove_selected(ds, ns.remove_ids)
            if ns.remove_years is not None:
                ds = remove_by_year(ds, ns.remove_years)
            if ns.retain_years is not None:
                for lo, hi in ns.retain_years:
                    ds = retain_by_year(ds, lo, hi)
            if ns.min_count is not None:
                ds = remove_below_count(ds, ns.min_count)
            if ns.min_pct is not None:
                ds = remove_below_pct_in_year(ds, ns.min_pct / 100.0)
            partition = disambiguation.identity_partition(
                ds, next_sub_id=partition.next_sub_id if partition else None
            )
        elif name == "cluster":
            if partition is not None and partition.undo_stack:
                print(
                    "warning: re-clustering discards the manual corrections made so far",
                    file=stderr,
                )
            config = disambiguation.SimilarityConfig(
                threshold=ns.threshold,
                require_volume=config.require_volume,
                require_page=config.require_page,
                require_doi=config.require_doi,
            )
            partition = disambiguation.cluster(ds, config)
            ds = disambiguation.apply_partition(ds, partition)
        elif name == "refine":
            config = disambiguation.SimilarityConfig(
                threshold=config.threshold,
                require_volume=config.require_volume or ns.volume,
                require_page=config.require_page or ns.page,
                require_doi=config.require_doi or ns.doi,
            )
            partition = disambiguation.refine_by_attributes(ds, partition, config)
            ds = disambiguation.apply_partition(ds, partition)
        elif name == "manual":
            with open(ns.script, "r", encoding="utf-8") as handle:
                actions = _parse_action_script(handle.read())
            for word, ids in actions:
                if word == "same":
                    partition.same(ids)
                elif word == "different":
                    partition.different(ids)
                elif word == "extract":
                    partition.extract(ids)
                elif not partition.undo():
                    print("nothing to undo", file=stderr)
            ds = disambiguation.apply_partition(ds, partition)
        elif name == "merge":
            ds = disambiguation.merge(ds, partition)
            partition = disambiguation.identity_partition(
                ds, next_sub_id=partition.next_sub_id
            )
        elif name == "export":
            if ns.table:
                _write_atomic(ns.table, save_csv(ds))
            if ns.chart or ns.svg:
                series = spectroscopy.year_series(ds, ns.half_window)
                if ns.chart:
                    _write_atomic(ns.chart, spectroscopy.export_chart_csv(series))
                if ns.svg:
                    options = spectroscopy.ChartOptions(
                        curves=ns.curves,
                        line_width=ns.line_width,
                        title=ns.title,
                        year_from=ns.from_year,
                        year_to=ns.to_year,
                    )
                    _write_atomic(ns.svg, spectroscopy.render_chart_svg(series, options))
        _report(name, ds, echo)
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        spec = parse_pipeline(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse reports its own message
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return run(spec)
    except (
        OSError,
        ValueError,
        wos.WosParseError,
        wos.WosImportError,
        UnknownReferenceError,
        InvalidRangeError,
        CsvSchemaError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
