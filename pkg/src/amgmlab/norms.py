"""Unitarily invariant norms as symmetric gauge functions of singular values.

Families: operator, trace, frobenius, schatten(p) for real p >= 1 or inf,
kyfan(k).  schatten(1) == trace, schatten(2) == frobenius, and
schatten(inf) == operator == kyfan(1).
"""

import math
from dataclasses import dataclass

import numpy as np

from .densecore import as_matrix, fast_singular_values

FAMILIES = ("operator", "trace", "frobenius", "schatten", "kyfan")


@dataclass(frozen=True)
class NormSpec:
    family: str
    p: float | None = None
    k: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown norm family {self.family!r}")
        if self.family == "schatten":
            if self.p is None or (math.isfinite(self.p) and self.p < 1):
                raise ValueError("schatten exponent must be >= 1 or inf")
        if self.family == "kyfan":
            if self.k is None or self.k < 1:
                raise ValueError("kyfan order must be a positive integer")

    def label(self) -> str:
        if self.family == "operator":
            return "op"
        if self.family == "trace":
            return "trace"
        if self.family == "frobenius":
            return "fro"
        if self.family == "schatten":
            p = "inf" if math.isinf(self.p) else format(self.p, "g")
            return f"schatten:{p}"
        return f"kyfan:{self.k}"


OPERATOR = NormSpec("operator")
TRACE = NormSpec("trace")
FROBENIUS = NormSpec("frobenius")


def schatten(p: float) -> NormSpec:
    return NormSpec("schatten", p=float(p))


def kyfan(k: int) -> NormSpec:
    return NormSpec("kyfan", k=int(k))


# Default sweep catalog: the named families plus one smooth and one
# non-smooth extra gauge.
CATALOG = (OPERATOR, TRACE, FROBENIUS, schatten(3.0), kyfan(2))


def parse_norm(text: str) -> NormSpec:
    """Parse `op`, `trace`, `fro`, `schatten:<p>`, `kyfan:<k>` (case-insensitive)."""
    t = text.strip().lower()
    if t == "op":
        return OPERATOR
    if t == "trace":
        return TRACE
    if t == "fro":
        return FROBENIUS
    if t.startswith("schatten:"):
        arg = t.split(":", 1)[1]
        p = math.inf if arg == "inf" else float(arg)
        return schatten(p)
    if t.startswith("kyfan:"):
        return kyfan(int(t.split(":", 1)[1]))
    raise ValueError(f"cannot parse norm spec {text!r}")


def gauge_eval(spec: NormSpec, sv) -> float:
    """Evaluate the gauge on a non-increasing, nonnegative value list."""
    sv = np.asarray(sv, dtype=float)
    if sv.ndim != 1 or sv.size == 0:
        raise ValueError("singular value list must be a nonempty vector")
    if sv.min() < 0:
        raise ValueError("singular values must be nonnegative")
    if np.any(sv[:-1] < sv[1:]):
        raise ValueError("singular values must be non-increasing")
    if spec.family == "operator":
        return float(sv[0])
    if spec.family == "trace":
        return float(sv.sum())
    if spec.family == "frobenius":
        return float(np.sqrt((sv * sv).sum()))
    if spec.family == "schatten":
        if math.isinf(spec.p):
            return float(sv[0])
        return float((sv ** spec.p).sum() ** (1.0 / spec.p))
    # kyfan
    if spec.k > sv.size:
        raise ValueError(f"kyfan order {spec.k} exceeds dimension {sv.size}")
    return float(sv[: spec.k].sum())


def ui_norm(spec: NormSpec, X) -> float:
    return gauge_eval(spec, fast_singular_values(as_matrix(X)))
