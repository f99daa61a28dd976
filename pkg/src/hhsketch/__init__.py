"""Streaming heavy-hitter detection sketches and benchmark harness."""

__version__ = "0.1.0"

from .core import (
    EMPTY_KEY,
    REMAP_KEY,
    HashFamily,
    Trace,
    TraceLoadError,
    generate_zipf,
    load_trace,
    write_trace,
)
from .elastic_hh import ElasticHH, bucket_footprint
from .elastic_std import ElasticStd
from .baselines import CMHeap, CountHeap, SpaceSaving
from .metrics import (
    MetricsBundle,
    Oracle,
    ThroughputResult,
    cdf,
    compute_accuracy,
    measure_throughput,
    true_heavy_hitters,
)
from .bench import (
    ALGOS,
    ExperimentConfig,
    ResultRow,
    emit,
    run_lambda_sweep,
    run_memory_sweep,
    run_single,
)

__all__ = [
    "EMPTY_KEY",
    "REMAP_KEY",
    "HashFamily",
    "Trace",
    "TraceLoadError",
    "generate_zipf",
    "load_trace",
    "write_trace",
    "ElasticHH",
    "ElasticStd",
    "bucket_footprint",
    "CMHeap",
    "CountHeap",
    "SpaceSaving",
    "MetricsBundle",
    "Oracle",
    "ThroughputResult",
    "cdf",
    "compute_accuracy",
    "measure_throughput",
    "true_heavy_hitters",
    "ALGOS",
    "ExperimentConfig",
    "ResultRow",
    "emit",
    "run_lambda_sweep",
    "run_memory_sweep",
    "run_single",
]
