from symaudio.bench.analysis import ErrorEntry, ErrorReport, analyze_errors, is_temporal_order
from symaudio.bench.loaders import FORMATS, QASample, load_benchmark
from symaudio.bench.runner import RUN_STYLES, EvalResult, load_results, run_eval
from symaudio.bench.scoring import CategoryScore, ScoreReport, render_markdown, score, score_from_counts

__all__ = [
    "FORMATS",
    "RUN_STYLES",
    "CategoryScore",
    "ErrorEntry",
    "ErrorReport",
    "EvalResult",
    "QASample",
    "ScoreReport",
    "analyze_errors",
    "is_temporal_order",
    "load_benchmark",
    "load_results",
    "render_markdown",
    "run_eval",
    "score",
    "score_from_counts",
]
