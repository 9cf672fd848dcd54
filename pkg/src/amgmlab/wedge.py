"""Compound matrices: order-k minors of A on the lexicographic subset basis.

The k-th compound of a d x d matrix is the C(d,k) x C(d,k) matrix of k x k
minors det(A[I, J]); its spectrum is the k-fold eigenvalue products of A.
``verify_wedge_properties`` exercises the six standard identities
(multiplicativity, transpose, inverse, orthogonality/PSD preservation,
eigenvalue products, commuting with PSD powers).
"""

import json
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .densecore import as_matrix, fast_singular_values, psd_power, sym_eigen

COMPOUND_GUARD = 10 ** 4


def subset_index(d: int, k: int) -> list[tuple]:
    """All k-subsets of range(d) in lexicographic order (the wedge basis)."""
    if not 1 <= k <= d:
        raise ValueError(f"order k must satisfy 1 <= k <= {d}")
    return list(combinations(range(d), k))


def det_lu(M) -> float:
    """Determinant by LU with partial pivoting (plain Python, sized for
    small minors)."""
    a = [list(map(float, row)) for row in M]
    n = len(a)
    det = 1.0
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[piv][col] == 0.0:
            return 0.0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1.0 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f != 0.0:
                row_r = a[r]
                row_c = a[col]
                for c in range(col + 1, n):
                    row_r[c] -= f * row_c[c]
    return det


def compound(A, k: int) -> np.ndarray:
    """k-th compound matrix of A, entries det(A[I, J]) over lexicographic
    row/column subsets."""
    A = as_matrix(A)
    d = A.shape[0]
    subsets = subset_index(d, k)
    size = len(subsets)
    if size > COMPOUND_GUARD:
        raise ValueError(f"compound dimension {size} exceeds guard {COMPOUND_GUARD}")
    out = np.empty((size, size))
    for i, I in enumerate(subsets):
        rows = A[np.ix_(I, range(d))]
        for j, J in enumerate(subsets):
            out[i, j] = det_lu(rows[:, J])
    return out


@dataclass
class PropertyReport:
    """Per-property pass/fail/skipped outcome with max deviation."""

    entries: list = field(default_factory=list)

    def add(self, name: str, status: str, max_deviation: float) -> None:
        self.entries.append({"name": name, "status": status,
                             "max_deviation": max_deviation})

    @property
    def all_ok(self) -> bool:
        return all(e["status"] in ("pass", "skipped") for e in self.entries)

    @property
    def max_deviation(self) -> float:
        devs = [e["max_deviation"] for e in self.entries
                if not math.isnan(e["max_deviation"])]
        return max(devs) if devs else 0.0

    def to_json(self) -> str:
        return json.dumps(self.entries, indent=2)


def _dev(X, Y) -> float:
    return float(np.abs(np.asarray(X) - np.asarray(Y)).max())


def verify_wedge_properties(A, B, k: int, tol: float = 1e-8) -> PropertyReport:
    """Check the six compound-matrix identities on the pair (A, B).

    A must be PSD for the PSD-preservation and power-commutation checks.
    The inverse identity is skipped (not failed) when A is numerically
    singular.
    """
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise ValueError("A and B must share a dimension")
    d = A.shape[0]
    rep = PropertyReport()
    cA = compound(A, k)
    cB = compound(B, k)

    # 1: multiplicativity
    dev = _dev(compound(A @ B, k), cA @ cB)
    rep.add("multiplicativity", "pass" if dev <= tol else "fail", dev)

    # 2: transpose
    dev = _dev(compound(A.T, k), cA.T)
    rep.add("transpose", "pass" if dev <= tol else "fail", dev)

    # 3: inverse (skip when singular)
    detA = det_lu(A)
    if abs(detA) <= tol:
        rep.add("inverse", "skipped", math.nan)
    else:
        dev = _dev(compound(np.linalg.inv(A), k), np.linalg.inv(cA))
        rep.add("inverse", "pass" if dev <= tol else "fail", dev)

    # 4: orthogonal stays orthogonal, PSD stays PSD.  The orthogonal test
    # matrix is the eigenvector frame of A.
    wA, Q = sym_eigen(A)
    cQ = compound(Q, k)
    dev_orth = _dev(cQ.T @ cQ, np.eye(cQ.shape[0]))
    w_cA, _ = sym_eigen(0.5 * (cA + cA.T))
    scale = max(1.0, abs(float(w_cA[0])))
    dev_psd = max(0.0, -float(w_cA[-1]) / scale)
    dev = max(dev_orth, dev_psd)
    rep.add("orthogonal_and_psd", "pass" if dev <= tol else "fail", dev)

    # 5: spectrum of compound = k-fold eigenvalue products (multisets)
    prods = sorted((math.prod(wA[list(c)]) for c in combinations(range(d), k)),
                   reverse=True)
    dev = _dev(np.sort(w_cA)[::-1], np.array(prods))
    rep.add("eigenvalue_products", "pass" if dev <= tol else "fail", dev)

    # 6: compound commutes with PSD powers
    dev = 0.0
    for s in (0.5, 2.0, 3.0):
        left = psd_power(0.5 * (cA + cA.T), s)
        right = compound(psd_power(A, s), k)
        dev = max(dev, _dev(left, right))
    rep.add("psd_power_commutes", "pass" if dev <= tol else "fail", dev)
    return rep


def top_singular_value_product(A, k: int) -> float:
    """Product of the k largest singular values; equals the operator norm of
    the k-th compound."""
    sv = fast_singular_values(as_matrix(A))
    return float(np.prod(sv[:k]))
