import cmath
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import moeblox as mx  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_cycle(rng, lo=-5.0, hi=5.0):
    while True:
        comps = rng.uniform(lo, hi, 4)
        if np.max(np.abs(comps)) > 1e-3:
            return mx.Cycle(*comps)


def random_real_cycle(rng):
    """Circle or line with a real locus (positive discriminant)."""
    if rng.uniform() < 0.3:
        phi = rng.uniform(0, 2 * math.pi)
        anchor = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        return mx.from_line(anchor, anchor + cmath.exp(1j * phi))
    center = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
    return mx.from_circle(center, rng.uniform(0.2, 3.0))


def random_sl2(rng, lo=-5.0, hi=5.0):
    """Determinant-1 map whose raw entries were drawn uniformly."""
    while True:
        entries = [complex(rng.uniform(lo, hi), rng.uniform(lo, hi)) for _ in range(4)]
        det = entries[0] * entries[3] - entries[1] * entries[2]
        if abs(det) > 0.1:
            root = cmath.sqrt(det)
            return mx.MoebiusMap(*(e / root for e in entries))


def random_moebius(rng, lo=-2.0, hi=2.0, min_det=0.5):
    """Well-conditioned random map for chained-transform suites."""
    while True:
        entries = [complex(rng.uniform(lo, hi), rng.uniform(lo, hi)) for _ in range(4)]
        det = entries[0] * entries[3] - entries[1] * entries[2]
        if abs(det) >= min_det:
            return mx.MoebiusMap(*entries)


def projective_residual(a: mx.Cycle, b: mx.Cycle) -> float:
    ca, cb = mx.canonicalize(a), mx.canonicalize(b)
    num = max(
        abs(ca.k - cb.k), abs(ca.l - cb.l), abs(ca.n - cb.n), abs(ca.m - cb.m)
    )
    return num / max(1.0, ca.scale(), cb.scale())


def assert_projectively_equal(a: mx.Cycle, b: mx.Cycle, tol=1e-9):
    res = projective_residual(a, b)
    assert res <= tol, f"{a} !~ {b} (residual {res})"


def on_curve_point(rng, lambda_value, M, t_range=(-2.0, 2.0)):
    """A point of the image under M of the model curve with the given
    parameter, plus its grid parameter and branch."""
    t = rng.uniform(*t_range)
    branch = 1.0 if rng.uniform() < 0.5 else -1.0
    w = branch * cmath.exp((lambda_value + 2j * math.pi) * t)
    return mx.apply_to_point(M, mx.ExtendedPoint.from_complex(w)), t, branch
