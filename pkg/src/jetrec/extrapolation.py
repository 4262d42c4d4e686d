"""Richardson extrapolation for limits along a geometric mesh."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class LimitEstimate:
    value: float
    error: float
    level: int
    row: int
    samples: int


def richardson_limit(values: Sequence[float], ratios: Sequence[float],
                     noise: Sequence[float] | None = None) -> LimitEstimate:
    """Extrapolate ``lim values[i]`` assuming ``values[i] = L + sum_k c_k ratios[k]**i``.

    Builds the usual triangular tableau (one geometric error term removed per
    column) and returns the entry whose local error estimate is smallest.  The
    error estimate of an entry is the larger of its distance to the entry
    above it and to the entry on its left, floored at a rounding estimate for
    the samples it depends on.  ``noise`` gives each sample's absolute
    rounding level when it is not ``eps * |value|`` (e.g. after cancellation
    in a difference that is then divided by a small number).  Coarse rows carry truncation error and fine
    rows carry amplified rounding, so the minimum usually sits in between.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise ValueError("need at least two samples")
    levels = min(len(ratios), v.size - 1)
    if noise is None:
        noise = 4 * EPS * np.abs(v)
    noise = np.asarray(noise, dtype=float)
    table = np.full((v.size, levels + 1), np.nan)
    table[:, 0] = v
    best = LimitEstimate(float(v[-1]), float("inf"), 0, v.size - 1, v.size)
    for k in range(1, levels + 1):
        r = ratios[k - 1]
        table[k:, k] = (table[k:, k - 1] - r * table[k - 1:-1, k - 1]) / (1 - r)
    for k in range(levels + 1):
        amp = 1.0
        for kk in range(k):
            amp *= (1 + abs(ratios[kk])) / abs(1 - ratios[kk])
        for i in range(k + 1, v.size):
            here = table[i, k]
            err = abs(here - table[i - 1, k])
            if k > 0:
                err = max(err, abs(here - table[i, k - 1]))
            err = max(err, amp * float(np.max(noise[max(i - k - 1, 0): i + 1])))
            if err < best.error:
                best = LimitEstimate(float(here), float(err), k, i, v.size)
    return best


def geometric_mesh(u0: float, rho: float, depth: int) -> np.ndarray:
    """``u0 * rho**i`` for ``i = 0..depth``."""
    return u0 * rho ** np.arange(depth + 1, dtype=float)
