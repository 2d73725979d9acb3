"""Reference publication year spectroscopy with cited-reference cleanup.

Ingests Web of Science tagged exports, computes the per-year reference
spectrum, clusters variant spellings of the same cited reference, and
exports cleaned tables and chart data.
"""

from .dataset import (
    CitedReference,
    CsvSchemaError,
    Dataset,
    DatasetInfo,
    InvalidRangeError,
    UnknownReferenceError,
    dataset_info,
    open_csv,
    recompute_statistics,
    remove_below_count,
    remove_below_pct_in_year,
    remove_by_year,
    remove_selected,
    retain_by_year,
    save_csv,
)
from .disambiguation import (
    Partition,
    SimilarityConfig,
    apply_partition,
    cluster,
    identity_partition,
    levenshtein_distance,
    matches,
    merge,
    pair_score,
    refine_by_attributes,
    similarity,
)
from .spectroscopy import (
    ChartOptions,
    YearPoint,
    YearSeries,
    export_chart_csv,
    render_chart_svg,
    year_series,
)
from .wos import (
    ImportConfig,
    ParsedCR,
    PublicationRecord,
    WosImportError,
    WosParseError,
    import_files,
    parse_cited_reference,
    parse_wos_file,
    render_wos_export,
)

__version__ = "0.1.0"
