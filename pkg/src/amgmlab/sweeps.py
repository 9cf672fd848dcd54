"""Randomized verification sweeps over the proved inequalities.

Each trial draws a seeded instance (dimension, generator kind, norm, and
exponents) and runs every checker whose hypotheses it satisfies.  All of
these are theorems, so any failure beyond tolerance is an implementation
bug, which is exactly what the sweep is for.
"""

from . import checks
from .checks import DEFAULT_EPS, gap_report
from .densecore import GENERATOR_KINDS, random_psd
from .norms import CATALOG
from .rng import Rng, derive


def draw_psd(rng: Rng, d: int, kind: str | None = None):
    if kind is None:
        kind = GENERATOR_KINDS[rng.randint(len(GENERATOR_KINDS))]
    return random_psd(rng, d, kind)


def run_verify_sweep(trials: int, seed: int, eps: float = DEFAULT_EPS,
                     norms=None) -> list:
    """One pass of every inequality checker on ``trials`` seeded instances.

    ``norms`` restricts the norm catalog cycled through by the trials.
    """
    norms = list(CATALOG) if norms is None else list(norms)
    if not norms:
        raise ValueError("norm list must not be empty")
    reports = []
    for t in range(trials):
        rng = derive(seed, t)
        d = 2 + rng.randint(5)  # 2..6
        spec = norms[t % len(norms)]
        A = draw_psd(rng, d)
        B = draw_psd(rng, d)
        C = draw_psd(rng, d)
        r = rng.uniform(1.0, 4.0)
        s = rng.uniform(0.05, 3.0)
        q = rng.uniform(0.05, 3.0)
        common = dict(seed=t, context=f"d={d} norm={spec.label()}")

        reports.append(checks.pair_check(A, B, spec, eps, **common))
        X1 = rng.gaussian_matrix(d, d)
        X2 = rng.gaussian_matrix(d, d)
        X3 = rng.gaussian_matrix(d, d)
        reports.append(checks.holder_triple_check(X1, X2, X3, spec, eps, **common))
        reports.append(checks.sandwich_check(A, B, C, spec, eps, **common))
        reports.append(checks.alt_trace_check(A, B, r, q, eps, **common))
        reports.append(checks.alt_norm_check(A, B, r, s, spec, eps, **common))
        reports.append(checks.alt4_check(A, B, spec, eps, **common))
        reports.extend(checks.eig_product_check(A, B, r, s, eps, **common))
        reports.append(checks.majorization_bridge_check(A, B, r, s, eps, **common))
        min_eig = checks.psd_order_check(A, B)
        reports.append(gap_report("psd_order_check", min_eig, 0.0, eps, **common))
    return reports
