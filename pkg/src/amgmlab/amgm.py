"""Exact with/without-replacement norm means over matrix product tuples.

The two means are the sides of the noncommutative AM-GM comparison: the
average of |||A_{j1} ... A_{jm}||| over all index m-tuples (with
replacement) versus over pairwise-distinct tuples (without replacement).
Enumeration is exact and lexicographic, with prefix products cached along
the tuple tree; sums use compensated accumulation throughout.
"""

import math
from dataclasses import dataclass

import numpy as np

from .checks import DEFAULT_EPS, GapReport, gap_report
from .densecore import as_matrix, fast_singular_values, is_psd
from .norms import OPERATOR, NormSpec, gauge_eval

ENUM_GUARD = 10 ** 7


@dataclass
class MatrixFamily:
    """A list of same-dimension PSD matrices A_1..A_n."""

    members: list

    def __post_init__(self):
        self.members = [as_matrix(M) for M in self.members]
        if not self.members:
            raise ValueError("family must contain at least one matrix")
        d = self.members[0].shape[0]
        if any(M.shape[0] != d for M in self.members):
            raise ValueError("family members must share one dimension")

    @property
    def n(self) -> int:
        return len(self.members)

    @property
    def d(self) -> int:
        return self.members[0].shape[0]

    def validate_psd(self) -> None:
        for i, M in enumerate(self.members):
            if not is_psd(M):
                raise ValueError(f"family member {i} is not PSD")


def _members(F):
    return F.members if isinstance(F, MatrixFamily) else [as_matrix(M) for M in F]


def _falling(n: int, m: int) -> int:
    return math.perm(n, m)


def _guard(n: int, m: int, distinct: bool) -> None:
    count = _falling(n, m) if distinct else n ** m
    if count > ENUM_GUARD:
        raise ValueError(f"enumeration of {count} tuples exceeds guard {ENUM_GUARD}")


def enumerate_tuples(n: int, m: int, distinct: bool):
    """All index m-tuples over range(n) in lexicographic order.

    distinct=True restricts to pairwise-distinct entries (m <= n required).
    """
    if m < 1:
        raise ValueError("tuple length must be at least 1")
    if distinct and m > n:
        raise ValueError(f"cannot draw {m} distinct indices from {n}")
    _guard(n, m, distinct)

    def rec(prefix):
        if len(prefix) == m:
            yield tuple(prefix)
            return
        for j in range(n):
            if distinct and j in prefix:
                continue
            prefix.append(j)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def _norm_terms(members, m: int, spec: NormSpec, distinct: bool):
    """Yield |||A_{j1} ... A_{jm}||| over tuples in lexicographic order.

    Products are accumulated left to right; the partial product for each
    tuple prefix is computed once and shared by the whole subtree.
    """
    n = len(members)
    used = [False] * n

    def rec(depth, prefix):
        last = depth == m - 1
        for j in range(n):
            if distinct and used[j]:
                continue
            P = members[j] if prefix is None else prefix @ members[j]
            if last:
                yield gauge_eval(spec, fast_singular_values(P))
            else:
                used[j] = True
                yield from rec(depth + 1, P)
                used[j] = False

    yield from rec(0, None)


def wr_mean(F, m: int, spec: NormSpec) -> float:
    """With-replacement mean: average over all n^m tuples."""
    members = _members(F)
    n = len(members)
    if m < 1:
        raise ValueError("tuple length must be at least 1")
    _guard(n, m, False)
    return math.fsum(_norm_terms(members, m, spec, False)) / n ** m


def wor_mean(F, m: int, spec: NormSpec) -> float:
    """Without-replacement mean: average over pairwise-distinct tuples."""
    members = _members(F)
    n = len(members)
    if m < 1:
        raise ValueError("tuple length must be at least 1")
    if m > n:
        raise ValueError(f"without-replacement needs m <= n, got m={m}, n={n}")
    _guard(n, m, True)
    return math.fsum(_norm_terms(members, m, spec, True)) / _falling(n, m)


def amgm_gap(F, m: int, spec: NormSpec, eps: float = DEFAULT_EPS,
             seed: int | None = None) -> GapReport:
    """wr_mean - wor_mean.

    Nonnegative is a theorem for m <= 3; for m >= 4 a negative gap is a
    candidate counterexample, not an implementation bug, and the report's
    params say which regime applies.
    """
    members = _members(F)
    n, d = len(members), members[0].shape[0]
    lhs = wr_mean(members, m, spec)
    rhs = wor_mean(members, m, spec)
    regime = "proved" if m <= 3 else "conjecture"
    return gap_report("amgm_gap", lhs, rhs, eps, seed=seed,
                      params={"n": n, "d": d, "m": m, "norm": spec.label(),
                              "regime": regime})


def equiv_form_check(F, spec: NormSpec, eps: float = DEFAULT_EPS,
                     seed: int | None = None):
    """The m=3 mean comparison and its rearranged same-sign form.

    The rearranged form compares (n-2)(n-1) * [sum over not-all-distinct
    triples] against (3n-2) * [sum over all-distinct triples]; its gap is
    exactly n^3 (n-1)(n-2) times the mean-form gap.  Returns both reports;
    the factor and the cross-form deviation are recorded in params.
    """
    members = _members(F)
    n, d = len(members), members[0].shape[0]
    if n < 3:
        raise ValueError("rearranged form needs n >= 3")
    s_all = math.fsum(_norm_terms(members, 3, spec, False))
    s_dist = math.fsum(_norm_terms(members, 3, spec, True))
    s_nad = s_all - s_dist

    main = gap_report("equiv_form_main", s_all / n ** 3,
                      s_dist / _falling(n, 3), eps, seed=seed,
                      params={"n": n, "d": d, "norm": spec.label()})
    factor = n ** 3 * (n - 1) * (n - 2)
    lhs = (n - 2) * (n - 1) * s_nad
    rhs = (3 * n - 2) * s_dist
    dev = abs((lhs - rhs) - factor * main.gap)
    dev_rel = dev / max(1.0, abs(lhs), abs(rhs))
    rearranged = gap_report("equiv_form_rearranged", lhs, rhs, eps, seed=seed,
                            params={"n": n, "d": d, "norm": spec.label(),
                                    "factor": factor, "cross_dev": dev_rel})
    rearranged.passed = rearranged.passed and dev_rel <= eps and (
        (main.gap >= -eps * max(1.0, abs(main.lhs), abs(main.rhs)))
        == (rearranged.gap >= -eps * max(1.0, abs(lhs), abs(rhs))))
    return main, rearranged


def _matrix_sum_mean(members, m: int, distinct: bool) -> np.ndarray:
    n = len(members)
    d = members[0].shape[0]
    total = np.zeros((d, d))
    used = [False] * n

    def rec(depth, prefix):
        nonlocal total
        last = depth == m - 1
        for j in range(n):
            if distinct and used[j]:
                continue
            P = members[j] if prefix is None else prefix @ members[j]
            if last:
                total = total + P
            else:
                used[j] = True
                rec(depth + 1, P)
                used[j] = False

    rec(0, None)
    return total / (_falling(n, m) if distinct else n ** m)


def recht_gap(F, m: int, eps: float = DEFAULT_EPS,
              seed: int | None = None) -> GapReport:
    """Operator norm of the with-replacement mean matrix vs the
    without-replacement mean matrix (norm outside the sums).

    Proved for m in {1, 2}; for m >= 3 the report is observational only.
    """
    members = _members(F)
    n, d = len(members), members[0].shape[0]
    if m > n:
        raise ValueError(f"without-replacement needs m <= n, got m={m}, n={n}")
    _guard(n, m, False)
    lhs = gauge_eval(OPERATOR, fast_singular_values(_matrix_sum_mean(members, m, False)))
    rhs = gauge_eval(OPERATOR, fast_singular_values(_matrix_sum_mean(members, m, True)))
    regime = "proved" if m <= 2 else "conjecture"
    return gap_report("recht_gap", lhs, rhs, eps, seed=seed,
                      params={"n": n, "d": d, "m": m, "regime": regime})


def maclaurin_gap(xs, m: int, eps: float = DEFAULT_EPS,
                  seed: int | None = None) -> GapReport:
    """Scalar tuple-mean comparison: mean over all m-tuple products vs the
    average product over unordered m-subsets."""
    xs = [float(x) for x in xs]
    n = len(xs)
    if any(x <= 0 for x in xs):
        raise ValueError("scalars must be positive")
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    _guard(n, m, False)
    lhs = (math.fsum(xs) / n) ** m
    from itertools import combinations

    rhs = math.fsum(math.prod(c) for c in combinations(xs, m)) / math.comb(n, m)
    return gap_report("maclaurin_gap", lhs, rhs, eps, seed=seed,
                      params={"n": n, "m": m})
