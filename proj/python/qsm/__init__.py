"""Fidelity, Bures and trace distances, and reconstruction of state-space isometries."""

import json

from ._core import (
    QsmError,
    are_orthogonal,
    bures_distance,
    check_isometry,
    eigh,
    fidelity,
    random_density,
    random_unitary,
    reconstruct,
    sqrtm,
    suite_ids,
    trace_distance,
)
from ._core import run_verification as _run_verification

__all__ = [
    "QsmError",
    "are_orthogonal",
    "bures_distance",
    "check_isometry",
    "eigh",
    "fidelity",
    "random_density",
    "random_unitary",
    "reconstruct",
    "run_verification",
    "sqrtm",
    "suite_ids",
    "trace_distance",
]


def run_verification(suite, dims, seed=1, samples=200, budget=10000):
    """Run a verification suite and return the parsed report."""
    return json.loads(_run_verification(suite, list(dims), seed, samples, budget))
