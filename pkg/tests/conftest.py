import numpy as np
import pytest

from hhsketch import Oracle, generate_zipf
from hhsketch.core import EMPTY_KEY


@pytest.fixture(scope="session")
def default_trace():
    """The harness's default synthetic workload: 1M packets, 100k flows, skew 1."""
    return generate_zipf(1_000_000, 100_000, 1.0, 1)


@pytest.fixture(scope="session")
def default_oracle(default_trace):
    return Oracle.from_trace(default_trace)


def fill_bucket(sketch, bucket, cells, vote_minus):
    """Force one bucket of an Elastic-style sketch into a known state.

    cells is a list of (flow_id, vote) pairs, at most cells_per_bucket long;
    remaining cells stay empty.
    """
    c = sketch.cells_per_bucket
    assert len(cells) <= c
    base = bucket * c
    for off in range(c):
        if off < len(cells):
            fid, vote = cells[off]
            sketch.ids[base + off] = fid
            sketch.votes[base + off] = vote
        else:
            sketch.ids[base + off] = EMPTY_KEY
            sketch.votes[base + off] = 0
    sketch.vote_minus[bucket] = vote_minus


def bucket_state(sketch, bucket):
    """(list of (id, vote) for occupied cells, vote_minus) of one bucket."""
    c = sketch.cells_per_bucket
    base = bucket * c
    cells = [(sketch.ids[base + i], sketch.votes[base + i])
             for i in range(c) if sketch.ids[base + i] != EMPTY_KEY]
    return cells, sketch.vote_minus[bucket]


def random_trace(rng, max_packets=100_000, max_distinct=None):
    """Log-uniform sized random trace with a random key universe."""
    n = int(np.exp(rng.uniform(0, np.log(max_packets))))
    n = max(1, n)
    if max_distinct is None:
        max_distinct = max(2, n)
    distinct = int(rng.integers(1, max_distinct + 1))
    keys = rng.integers(1, distinct + 1, size=n).astype(np.uint32)
    from hhsketch import Trace
    return Trace(keys)
