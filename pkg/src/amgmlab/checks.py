"""Two-sided inequality checkers.

Each checker evaluates the claimed-larger side as lhs and the smaller side
as rhs, so a correct implementation on valid input always yields
gap = lhs - rhs >= -eps * max(1, |lhs|, |rhs|).
"""

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .densecore import is_psd, matrix_abs, psd_power, sym_eigen
from .norms import NormSpec, gauge_eval, kyfan, ui_norm

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-8

# Asymmetry level in a nominally symmetric product that is worth reporting.
SYM_WARN = 1e-6


@dataclass
class GapReport:
    check: str
    lhs: float
    rhs: float
    gap: float
    rel_gap: float
    passed: bool
    context: str = ""
    seed: int | None = None
    params: dict = field(default_factory=dict)

    CSV_FIELDS = ("check", "context", "lhs", "rhs", "gap", "rel_gap", "pass",
                  "seed", "params")

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "context": self.context,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "rel_gap": self.rel_gap,
            "pass": self.passed,
            "seed": self.seed,
            "params": self.params,
        }

    def csv_row(self) -> list[str]:
        d = self.to_dict()
        out = []
        for name in self.CSV_FIELDS:
            v = d[name]
            if isinstance(v, float):
                out.append(format(v, ".17g"))
            elif name == "params":
                out.append(json.dumps(v, sort_keys=True))
            else:
                out.append("" if v is None else str(v))
        return out


def gap_report(check: str, lhs: float, rhs: float, eps: float = DEFAULT_EPS,
               context: str = "", seed: int | None = None,
               params: dict | None = None) -> GapReport:
    gap = lhs - rhs
    scale = max(1.0, abs(lhs), abs(rhs))
    rel = gap / scale
    return GapReport(check, lhs, rhs, gap, rel, rel >= -eps,
                     context=context, seed=seed, params=params or {})


def _sym(M: np.ndarray, context: str = "") -> np.ndarray:
    """Symmetrize a product, logging if roundoff asymmetry is suspicious."""
    dev = float(np.abs(M - M.T).max())
    scale = max(1.0, float(np.abs(M).max()))
    if dev > SYM_WARN * scale:
        log.warning("asymmetry %.3e beyond %.0e in %s", dev, SYM_WARN,
                    context or "symmetrized product")
    return 0.5 * (M + M.T)


def _require_psd(name: str, A: np.ndarray) -> None:
    if not is_psd(A):
        raise ValueError(f"{name} must be positive-semidefinite")


def pair_check(A, B, spec: NormSpec, eps: float = DEFAULT_EPS, **kw) -> GapReport:
    """|||A^2||| + |||B^2||| >= |||AB||| + |||BA||| for PSD A, B."""
    A = np.asarray(A, float)
    B = np.asarray(B, float)
    _require_psd("A", A)
    _require_psd("B", B)
    lhs = ui_norm(spec, A @ A) + ui_norm(spec, B @ B)
    rhs = ui_norm(spec, A @ B) + ui_norm(spec, B @ A)
    return gap_report("pair_check", lhs, rhs, eps, **kw)


def holder_triple_check(X1, X2, X3, spec: NormSpec, eps: float = DEFAULT_EPS,
                        **kw) -> GapReport:
    """(1/3) sum_i ||| |X_i|^3 ||| >= |||X1 X2 X3||| for arbitrary squares."""
    X1, X2, X3 = (np.asarray(X, float) for X in (X1, X2, X3))
    if not X1.shape == X2.shape == X3.shape:
        raise ValueError("factors must share a common dimension")
    lhs = sum(ui_norm(spec, psd_power(matrix_abs(X), 3.0))
              for X in (X1, X2, X3)) / 3.0
    rhs = ui_norm(spec, X1 @ X2 @ X3)
    return gap_report("holder_triple_check", lhs, rhs, eps, **kw)


def sandwich_check(X1, X2, X3, spec: NormSpec, eps: float = DEFAULT_EPS,
                   **kw) -> GapReport:
    """(1/2)|||X1 X2 X1^T||| + (1/2)|||X3^T X2 X3||| >= |||X1 X2 X3|||.

    Requires the middle factor PSD.  The inner transposes make the bound
    valid for arbitrary outer factors; for symmetric outer factors (the only
    case the three-matrix mean argument needs) they are no-ops.
    """
    X1, X2, X3 = (np.asarray(X, float) for X in (X1, X2, X3))
    _require_psd("X2", X2)
    lhs = 0.5 * ui_norm(spec, X1 @ X2 @ X1.T) + 0.5 * ui_norm(spec, X3.T @ X2 @ X3)
    rhs = ui_norm(spec, X1 @ X2 @ X3)
    return gap_report("sandwich_check", lhs, rhs, eps, **kw)


def _alt_args(A, B, r: float, q: float):
    A = np.asarray(A, float)
    B = np.asarray(B, float)
    if r < 1:
        raise ValueError("exponent r must be >= 1")
    if q <= 0:
        raise ValueError("inner exponent must be positive")
    _require_psd("A", A)
    _require_psd("B", B)
    return A, B


# Eigenvalues below _RES_REL of the spectral radius of a triple product
# cannot be resolved accurately enough (after fractional powering, which
# inflates their weight for small exponents) to support comparisons at
# DEFAULT_EPS, so both sides of a powered comparison are clipped at the
# coarser side's resolution floor.  max(., floor) is entrywise
# nondecreasing and convex on logs, hence preserves the weak
# (log-)majorization relations under test and cannot fabricate a
# violation; it only regularizes both spectra the same way.
_RES_REL = 1e-6


def _coupled_powered_spectra(A, B, r: float, s: float,
                             want_frames: bool = False):
    """Spectra of (B^r A^r B^r)^s and (BAB)^{rs}, non-increasing, clipped
    from below at a shared resolution floor (see _RES_REL note)."""
    Ar = psd_power(A, r)
    Br = psd_power(B, r)
    w1, Q1 = sym_eigen(_sym(Br @ Ar @ Br, "B^rA^rB^r"))
    w2, Q2 = sym_eigen(_sym(B @ A @ B, "BAB"))
    w1 = np.maximum(w1, 0.0)
    w2 = np.maximum(w2, 0.0)
    p1 = w1 ** s
    p2 = w2 ** (r * s)
    thr = max((_RES_REL * float(w1[0])) ** s,
              (_RES_REL * float(w2[0])) ** (r * s))
    p1 = np.maximum(p1, thr)
    p2 = np.maximum(p2, thr)
    if want_frames:
        return p1, p2, Q1, Q2
    return p1, p2


def alt_trace_check(A, B, r: float, q: float, eps: float = DEFAULT_EPS,
                    **kw) -> GapReport:
    """Tr[(B^r A^r B^r)^q] >= Tr[(BAB)^{rq}]."""
    A, B = _alt_args(A, B, r, q)
    p1, p2 = _coupled_powered_spectra(A, B, r, q)
    lhs = float(p1.sum())
    rhs = float(p2.sum())
    return gap_report("alt_trace_check", lhs, rhs, eps, **kw)


def alt_norm_check(A, B, r: float, s: float, spec: NormSpec,
                   eps: float = DEFAULT_EPS, **kw) -> GapReport:
    """|||(B^r A^r B^r)^s||| >= |||(BAB)^{rs}||| for any UI norm.

    Raising the factors before multiplying dominates raising the product,
    in every UI norm; this is the limit form of the trace comparison in
    alt_trace_check and the k-fold product comparison in eig_product_check.
    """
    A, B = _alt_args(A, B, r, s)
    p1, p2 = _coupled_powered_spectra(A, B, r, s)
    lhs = gauge_eval(spec, p1)
    rhs = gauge_eval(spec, p2)
    return gap_report("alt_norm_check", lhs, rhs, eps, **kw)


def alt4_check(A, B, spec: NormSpec, eps: float = DEFAULT_EPS, **kw) -> GapReport:
    """|||B^2 A||| >= |||BAB||| for PSD A, B."""
    A = np.asarray(A, float)
    B = np.asarray(B, float)
    _require_psd("A", A)
    _require_psd("B", B)
    lhs = ui_norm(spec, B @ B @ A)
    rhs = ui_norm(spec, B @ A @ B)
    return gap_report("alt4_check", lhs, rhs, eps, **kw)


# Floor below which eigenvalue products are compared in the log domain.
PRODUCT_FLOOR = 1e-30


def eig_product_check(A, B, r: float, s: float, eps: float = DEFAULT_EPS,
                      **kw) -> list[GapReport]:
    """Top-k eigenvalue products of (B^rA^rB^r)^s dominate those of
    (BAB)^{rs}, for every k (with equality at k = d: determinants match).

    Returns one report per k = 1..d.  Near-underflow products are compared
    in the log domain with both sides floored at PRODUCT_FLOOR.
    """
    A, B = _alt_args(A, B, r, s)
    big, small = _coupled_powered_spectra(A, B, r, s)
    d = big.size
    base_params = kw.pop("params", {})
    reports = []
    for k in range(1, d + 1):
        lhs = float(np.prod(big[:k]))
        rhs = float(np.prod(small[:k]))
        params = dict(base_params, k=k, r=r, s=s)
        if lhs < PRODUCT_FLOOR or rhs < PRODUCT_FLOOR:
            ll = math.log(max(lhs, PRODUCT_FLOOR))
            lr = math.log(max(rhs, PRODUCT_FLOOR))
            rep = gap_report("eig_product_check", ll, lr, eps,
                             params=dict(params, log_domain=True), **kw)
            rep.lhs, rep.rhs = lhs, rhs
        else:
            rep = gap_report("eig_product_check", lhs, rhs, eps,
                             params=params, **kw)
        reports.append(rep)
    return reports


def weakly_majorizes(y, x, eps: float = DEFAULT_EPS) -> bool:
    """True iff every top-k partial sum of x is <= that of y (plus slack)."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be equal-length vectors")
    for v in (x, y):
        if np.any(v[:-1] < v[1:] - 1e-12 * max(1.0, float(np.abs(v).max()))):
            raise ValueError("inputs must be sorted non-increasing")
    cx = np.cumsum(x)
    cy = np.cumsum(y)
    slack = eps * np.maximum(1.0, np.maximum(np.abs(cx), np.abs(cy)))
    return bool(np.all(cx <= cy + slack))


def majorization_bridge_check(A, B, r: float, s: float,
                              eps: float = DEFAULT_EPS, **kw) -> GapReport:
    """The (BAB)^{rs} spectrum is weakly majorized by the (B^rA^rB^r)^s
    spectrum, and every Ky Fan norm agrees with the corresponding
    partial-sum ordering (the dominance step that lifts the eigenvalue
    product comparison to all UI norms).

    The report carries the worst top-k partial-sum margin.
    """
    A, B = _alt_args(A, B, r, s)
    big, small, Q1, Q2 = _coupled_powered_spectra(A, B, r, s,
                                                  want_frames=True)
    # Rebuild the powered matrices so the Ky Fan comparison genuinely
    # exercises the singular-value pipeline rather than the spectra above.
    Mrs = (Q1 * big) @ Q1.T
    Ns = (Q2 * small) @ Q2.T
    d = big.size
    majorized = weakly_majorizes(big, small, eps)
    worst_k, worst_lhs, worst_rhs = 1, float(big[0]), float(small[0])
    fan_consistent = True
    for k in range(1, d + 1):
        lhs = float(big[:k].sum())
        rhs = float(small[:k].sum())
        if lhs - rhs < worst_lhs - worst_rhs:
            worst_k, worst_lhs, worst_rhs = k, lhs, rhs
        # Ky Fan norms of the matrices themselves must order the same way
        # as the eigenvalue partial sums (the dominance step).
        fan_gap = ui_norm(kyfan(k), Mrs) - ui_norm(kyfan(k), Ns)
        if fan_gap < -eps * max(1.0, ui_norm(kyfan(k), Mrs),
                                ui_norm(kyfan(k), Ns)):
            fan_consistent = False
    rep = gap_report("majorization_bridge_check", worst_lhs, worst_rhs, eps,
                     params=dict(kw.pop("params", {}), worst_k=worst_k, r=r,
                                 s=s, fan_consistent=fan_consistent), **kw)
    rep.passed = rep.passed and majorized and fan_consistent
    return rep


def psd_order_check(A, B) -> float:
    """Min eigenvalue of ((A+B)/2)^2 - (AB+BA)/2; >= -tol certifies the
    positive-order comparison of squared arithmetic vs symmetrized
    geometric mean for this pair."""
    A = np.asarray(A, float)
    B = np.asarray(B, float)
    _require_psd("A", A)
    _require_psd("B", B)
    M = 0.5 * (A + B)
    D = _sym(M @ M - 0.5 * (A @ B + B @ A), "psd_order difference")
    w, _ = sym_eigen(D)
    return float(w[-1])
