"""Dense real matrix substrate.

Symmetric eigendecomposition by cyclic Jacobi sweeps, singular values and
matrix absolute value through the Gram matrix, PSD fractional powers, and
seeded random matrix generation.  Everything downstream (norms, inequality
checkers, enumeration) is built on these few operations.

All matrices are plain float64 numpy arrays; functions validate shape and
symmetry at the boundary and otherwise treat arrays as immutable values.
"""

import numpy as np
from numba import njit

from .rng import Rng

# Convergence tolerance of the eigensolver (relative off-diagonal mass).
EIG_TOL = 1e-12
# Relative spectral noise floor: eigenvalues within CLAMP_TOL of zero
# (relative to the largest eigenvalue) snap to exactly zero before square
# roots or fractional powers.
CLAMP_TOL = 1e-10
# Singular values come from eigenvalues of a Gram matrix, so their noise
# floor is the square root of the eigenvalue noise floor; values below
# SV_CLAMP_TOL * sigma_max snap to zero.
SV_CLAMP_TOL = 1e-7
MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    """Jacobi iteration failed to reach tolerance within the sweep cap."""


def as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {X.shape}")
    if X.shape[0] < 1:
        raise ValueError("matrix dimension must be at least 1")
    if not np.isfinite(X).all():
        raise ValueError("matrix entries must be finite")
    return X


@njit(cache=True)
def _jacobi(S, tol, max_sweeps, want_vectors):
    """Cyclic-by-rows Jacobi on a symmetric matrix.

    Returns (eigenvalues, vectors, converged).  Convergence is declared when
    the off-diagonal Frobenius mass drops below tol * ||S||_F.
    """
    d = S.shape[0]
    A = S.copy()
    V = np.eye(d)
    norm = np.sqrt((S * S).sum())
    if norm == 0.0:
        return np.zeros(d), V, True
    converged = False
    for _sweep in range(max_sweeps):
        off = 0.0
        for i in range(d):
            for j in range(i + 1, d):
                off += 2.0 * A[i, j] * A[i, j]
        if np.sqrt(off) <= tol * norm:
            converged = True
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                app = A[p, p]
                aqq = A[q, q]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                for i in range(d):
                    if i != p and i != q:
                        aip = A[i, p]
                        aiq = A[i, q]
                        A[i, p] = c * aip - s * aiq
                        A[p, i] = A[i, p]
                        A[i, q] = s * aip + c * aiq
                        A[q, i] = A[i, q]
                if want_vectors:
                    for i in range(d):
                        vip = V[i, p]
                        viq = V[i, q]
                        V[i, p] = c * vip - s * viq
                        V[i, q] = s * vip + c * viq
    w = np.empty(d)
    for i in range(d):
        w[i] = A[i, i]
    return w, V, converged


def sym_eigen(S, tol: float = EIG_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigendecomposition S = Q diag(w) Q^T of a symmetric matrix.

    Eigenvalues are returned in non-increasing order with the matching
    orthogonal eigenvector columns.  The input must be symmetric within
    tol * max(1, max|S_ij|); it is symmetrized before iterating.
    """
    S = as_matrix(S)
    scale = max(1.0, float(np.abs(S).max()))
    asym = float(np.abs(S - S.T).max())
    if asym > tol * scale:
        raise ValueError(f"matrix is asymmetric beyond tolerance ({asym:.3e})")
    M = 0.5 * (S + S.T)
    w, V, ok = _jacobi(M, tol, max_sweeps, True)
    if not ok:
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (d={S.shape[0]})"
        )
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def _clamped_gram_eigs(X: np.ndarray, tol: float):
    """Eigenvalues of X^T X, descending, spectral noise snapped to zero."""
    M = X.T @ X
    M = 0.5 * (M + M.T)
    w, _, ok = _jacobi(M, EIG_TOL, MAX_SWEEPS, False)
    if not ok:
        raise ConvergenceError("Jacobi did not converge on the Gram matrix")
    w = -np.sort(-w)
    wmax = max(float(w[0]), 0.0)
    if w[-1] < -tol * max(1.0, wmax):
        raise ValueError("Gram matrix has a significantly negative eigenvalue")
    # The zeroing threshold lives on the singular-value scale: a Gram
    # eigenvalue tol_sv^2 * wmax corresponds to sigma = tol_sv * sigma_max.
    w[np.abs(w) <= (SV_CLAMP_TOL * SV_CLAMP_TOL) * wmax] = 0.0
    w[w < 0.0] = 0.0
    return w


def singular_values(X, tol: float = CLAMP_TOL) -> np.ndarray:
    """Non-increasing singular values of a square matrix."""
    X = as_matrix(X)
    return np.sqrt(_clamped_gram_eigs(X, tol))


def fast_singular_values(X: np.ndarray) -> np.ndarray:
    """singular_values without input validation; hot-loop use only.

    Bitwise identical to singular_values on valid input.
    """
    return np.sqrt(_clamped_gram_eigs(X, CLAMP_TOL))


def matrix_abs(X, tol: float = CLAMP_TOL) -> np.ndarray:
    """|X| = (X^T X)^{1/2}: symmetric PSD, spectrum = singular values of X."""
    X = as_matrix(X)
    M = X.T @ X
    w, Q = sym_eigen(0.5 * (M + M.T))
    wmax = max(float(w[0]), 0.0)
    if w[-1] < -tol * max(1.0, wmax):
        raise ValueError("Gram matrix has a significantly negative eigenvalue")
    w = np.where(np.abs(w) <= (SV_CLAMP_TOL * SV_CLAMP_TOL) * wmax, 0.0,
                 np.maximum(w, 0.0))
    R = (Q * np.sqrt(w)) @ Q.T
    return 0.5 * (R + R.T)


def psd_power(A, s: float, tol: float = CLAMP_TOL) -> np.ndarray:
    """A^s for symmetric PSD A and s > 0, by powering the eigenvalues.

    Eigenvalues within tol (relative to the largest) of zero snap to zero
    first; an eigenvalue below that band means the input is genuinely
    indefinite and is an error.
    """
    if s <= 0:
        raise ValueError("exponent must be positive")
    A = as_matrix(A)
    w, Q = sym_eigen(A)
    wmax = max(float(w[0]), 0.0)
    thr = tol * max(1.0, wmax) if wmax <= 0.0 else tol * wmax
    if w[-1] < -thr:
        raise ValueError(
            f"matrix is not PSD: min eigenvalue {w[-1]:.3e} below -{thr:.3e}"
        )
    w = np.where(np.abs(w) <= thr, 0.0, np.maximum(w, 0.0))
    R = (Q * w ** s) @ Q.T
    return 0.5 * (R + R.T)


def is_psd(A, tol: float = CLAMP_TOL) -> bool:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    scale = max(1.0, float(np.abs(A).max()))
    if float(np.abs(A - A.T).max()) > 1e-8 * scale:
        return False
    w, _ = sym_eigen(0.5 * (A + A.T))
    wmax = max(float(w[0]), 0.0)
    return w[-1] >= -tol * max(1.0, wmax)


def random_orthogonal(rng: Rng, d: int, attempts: int = 16) -> np.ndarray:
    """Haar-ish random orthogonal matrix by modified Gram-Schmidt.

    Redraws the Gaussian seed matrix if a pivot falls below 1e-8 (near
    singular), up to ``attempts`` times.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    for _ in range(attempts):
        G = rng.gaussian_matrix(d, d)
        Q = np.empty((d, d))
        ok = True
        for j in range(d):
            v = G[:, j].copy()
            for _pass in range(2):  # second pass kills MGS orthogonality loss
                for i in range(j):
                    v -= (Q[:, i] @ v) * Q[:, i]
            nv = float(np.sqrt(v @ v))
            if nv < 1e-8:
                ok = False
                break
            Q[:, j] = v / nv
        if ok:
            return Q
    raise RuntimeError("random_orthogonal exhausted redraw attempts")


def random_psd(rng: Rng, d: int, kind: str = "wishart", *, p: int | None = None,
               rank: int | None = None, cond: float | None = None) -> np.ndarray:
    """Random symmetric PSD matrix.

    kind:
      wishart          G^T G / p with G a p-by-d Gaussian draw (p default d+2)
      projector        orthogonal projector of the given rank (default d-1)
      diagonal         diag of |Gaussian| draws
      rotated-diagonal Q^T diag Q; with ``cond`` set, the spectrum is
                       log-uniform in [1/cond, 1]
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if kind == "wishart":
        if p is None:
            p = d + 2
        if p < 1:
            raise ValueError("wishart degrees of freedom must be >= 1")
        G = rng.gaussian_matrix(p, d)
        M = G.T @ G / p
        return 0.5 * (M + M.T)
    if kind == "projector":
        if rank is None:
            rank = d - 1
        if not 0 <= rank <= d:
            raise ValueError(f"projector rank must be in [0, {d}]")
        Q = random_orthogonal(rng, d)
        if rank == 0:
            return np.zeros((d, d))
        M = Q[:, :rank] @ Q[:, :rank].T
        return 0.5 * (M + M.T)
    if kind == "diagonal":
        return np.diag([abs(rng.gaussian()) for _ in range(d)])
    if kind == "rotated-diagonal":
        Q = random_orthogonal(rng, d)
        if cond is not None:
            if cond < 1:
                raise ValueError("condition number must be >= 1")
            vals = np.array([cond ** (-rng.uniform()) for _ in range(d)])
        else:
            vals = np.array([abs(rng.gaussian()) for _ in range(d)])
        M = (Q * vals) @ Q.T
        return 0.5 * (M + M.T)
    raise ValueError(f"unknown generator kind {kind!r}")


GENERATOR_KINDS = ("wishart", "projector", "diagonal", "rotated-diagonal")


def matrix_to_text(X) -> str:
    """Fixture/report text format: dimension line, then rows at 17 digits."""
    X = as_matrix(X)
    lines = [str(X.shape[0])]
    for row in X:
        lines.append(" ".join(format(v, ".17g") for v in row))
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> np.ndarray:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    d = int(lines[0])
    if len(lines) != d + 1:
        raise ValueError(f"expected {d} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = [float(tok) for tok in ln.split()]
        if len(row) != d:
            raise ValueError("row length does not match dimension")
        rows.append(row)
    return as_matrix(np.array(rows))
