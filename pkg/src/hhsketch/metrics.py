"""Exact-count oracle and the evaluation metrics.

Accuracy metrics (AAE, ARE, PR, RR, F1, AE/RE samples) compare a sketch's
heavy-hitter report against exact ground truth. Throughput is measured as an
insertion-only pass in million packets per second, with a no-op calibration
run so trace-iteration overhead is visible.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .core import Trace, threshold_for


class Oracle:
    """Exact per-flow packet counts for one trace."""

    def __init__(self, counts: dict[int, int], n: int):
        self.counts = counts
        self.n = n

    @classmethod
    def from_trace(cls, trace: Trace) -> "Oracle":
        if len(trace) == 0:
            return cls({}, 0)
        keys, counts = np.unique(trace.keys, return_counts=True)
        return cls(dict(zip(keys.tolist(), counts.tolist())), len(trace))

    def true_count(self, f: int) -> int:
        return self.counts.get(f, 0)

    def threshold(self, frac: float) -> int:
        return threshold_for(frac, self.n)


def true_heavy_hitters(oracle: Oracle, threshold: int) -> set[int]:
    """Flows whose exact count reaches the threshold (same >= comparator as
    the sketches' report)."""
    return {f for f, c in oracle.counts.items() if c >= threshold}


@dataclass
class MetricsBundle:
    """Accuracy fields for one report; no_heavy_hitters marks the undefined case."""

    aae: float | None
    are: float | None
    pr: float | None
    rr: float | None
    f1: float | None
    ae_samples: list[int] = field(default_factory=list)
    re_samples: list[float] = field(default_factory=list)
    no_heavy_hitters: bool = False
    throughput_mpps: list[float] | None = None


def compute_accuracy(oracle: Oracle, report: list[tuple[int, int]], threshold: int,
                     phi_mode: str = "true",
                     cdf_all_reported: bool = False) -> MetricsBundle:
    """Score a report against ground truth.

    phi_mode "true" averages AAE/ARE over the full true heavy-hitter set with
    estimate 0 for unreported flows (penalizes false negatives);
    "intersection" averages over correctly reported flows only.
    AE/RE samples cover correctly reported flows unless cdf_all_reported is
    set, in which case every reported flow with a nonzero true count counts.
    """
    phi = true_heavy_hitters(oracle, threshold)
    if not phi:
        return MetricsBundle(None, None, None, None, None, no_heavy_hitters=True)
    est = dict(report)
    if phi_mode == "true":
        query_set = phi
    elif phi_mode == "intersection":
        query_set = phi & est.keys()
    else:
        raise ValueError(f"unknown phi_mode {phi_mode!r}")
    if query_set:
        abs_errs = [abs(oracle.true_count(f) - est.get(f, 0)) for f in query_set]
        rel_errs = [abs(oracle.true_count(f) - est.get(f, 0)) / oracle.true_count(f)
                    for f in query_set]
        aae = sum(abs_errs) / len(query_set)
        are = sum(rel_errs) / len(query_set)
    else:
        aae = 0.0
        are = 0.0
    correct = [f for f in est if f in phi]
    pr = len(correct) / len(est) if est else 0.0
    rr = len(correct) / len(phi)
    f1 = 2 * pr * rr / (pr + rr) if pr + rr > 0 else 0.0
    if cdf_all_reported:
        sample_flows = [f for f in est if oracle.true_count(f) > 0]
    else:
        sample_flows = correct
    ae_samples = [abs(oracle.true_count(f) - est[f]) for f in sample_flows]
    re_samples = [abs(oracle.true_count(f) - est[f]) / oracle.true_count(f)
                  for f in sample_flows]
    return MetricsBundle(aae, are, pr, rr, f1, ae_samples, re_samples)


def cdf(samples: list) -> list[tuple[float, float]]:
    """Empirical CDF as ascending (value, cumulative fraction) step points."""
    if not samples:
        return []
    xs = sorted(samples)
    n = len(xs)
    out = []
    for i, v in enumerate(xs):
        if i + 1 == n or xs[i + 1] != v:
            out.append((v, (i + 1) / n))
    return out


class NoopSketch:
    """Iterates the trace without sketching; calibrates timing overhead."""

    def insert_trace(self, keys: np.ndarray) -> None:
        for _ in keys.tolist():
            pass


@dataclass
class ThroughputResult:
    samples: list[float]          # Mpps per repeat
    noop_samples: list[float]     # Mpps of the no-op calibration runs

    @property
    def mean(self) -> float:
        return statistics.fmean(self.samples)

    @property
    def std(self) -> float:
        return statistics.stdev(self.samples) if len(self.samples) > 1 else 0.0

    @property
    def noop_mean(self) -> float:
        return statistics.fmean(self.noop_samples)


def measure_throughput(factory, trace: Trace, repeats: int = 100) -> ThroughputResult:
    """Time full insert passes over the trace with fresh sketches.

    factory is a zero-argument callable returning a new sketch each repeat.
    """
    if len(trace) == 0:
        raise ValueError("cannot measure throughput on an empty trace")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    n = len(trace)
    keys = trace.keys

    def timed(sketch) -> float:
        t0 = time.perf_counter()
        sketch.insert_trace(keys)
        elapsed = time.perf_counter() - t0
        return n / max(elapsed, 1e-9) / 1e6

    samples = [timed(factory()) for _ in range(repeats)]
    noop_samples = [timed(NoopSketch()) for _ in range(repeats)]
    return ThroughputResult(samples, noop_samples)
