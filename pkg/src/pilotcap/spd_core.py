"""Dense real symmetric (semi)definite matrix algebra.

Everything here works on small dense matrices (a few hundred rows at most).
Factorizations run in the kernel backend chosen by :mod:`pilotcap._backend`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import (
    AsymmetryTooLarge,
    ConvergenceFailure,
    DimensionMismatch,
    NotPositiveDefinite,
    NotSquare,
)

ASYMMETRY_RTOL = 1e-9
PD_RTOL = 1e-10
JACOBI_MAX_SWEEPS = 100
JACOBI_RTOL = 1e-15


class SymMatrix:
    """Immutable real symmetric matrix.

    Construction accepts any square array.  Entries whose asymmetry is below
    ``1e-9`` relative to the largest entry are symmetrized as ``(A + Aᵀ)/2``;
    anything larger raises :class:`AsymmetryTooLarge`.
    """

    __slots__ = ("_a",)

    def __init__(self, entries, asym_rtol=ASYMMETRY_RTOL):
        if isinstance(entries, SymMatrix):
            self._a = entries._a
            return
        a = np.array(entries, dtype=np.float64)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotSquare(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise NotSquare("matrix must have at least one row")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        scale = np.max(np.abs(a))
        asym = np.max(np.abs(a - a.T))
        if asym > asym_rtol * scale:
            raise AsymmetryTooLarge(
                f"max |A - Aᵀ| = {asym:.3g} exceeds {asym_rtol:g} x max|A| = {scale:.3g}"
            )
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        self._a = a

    @classmethod
    def identity(cls, m):
        return cls(np.eye(m))

    @classmethod
    def zeros(cls, m):
        return cls(np.zeros((m, m)))

    @classmethod
    def diag(cls, values):
        return cls(np.diag(np.asarray(values, dtype=np.float64)))

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def values(self) -> np.ndarray:
        """Read-only view of the entries."""
        return self._a

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._a.copy() if copy else self._a
        return self._a.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash(self._a.tobytes())

    def __repr__(self):
        return f"SymMatrix({self._a.tolist()!r})"


def as_sym(a) -> SymMatrix:
    return a if isinstance(a, SymMatrix) else SymMatrix(a)


@dataclass(frozen=True)
class SpdCheckReport:
    is_psd: bool
    is_pd: bool
    min_eigenvalue: float
    tolerance: float


def default_pd_tolerance(a) -> float:
    """``1e-10`` times the largest diagonal entry (zero for non-positive diagonals)."""
    d = np.diag(as_sym(a).values)
    return PD_RTOL * max(float(np.max(d)), 0.0)


def cholesky(a, pd_tolerance=None) -> np.ndarray:
    """Lower-triangular ``L`` with ``L @ L.T == a``.

    Raises
    ------
    NotPositiveDefinite
        If a pivot is ``<= pd_tolerance``; the exception carries the pivot
        index.
    """
    a = as_sym(a)
    tol = default_pd_tolerance(a) if pd_tolerance is None else float(pd_tolerance)
    L, fail, pivot = _backend.kernels.cholesky_lower(a.values, tol)
    if fail >= 0:
        raise NotPositiveDefinite(int(fail), float(pivot))
    return L


def log_det(a) -> float:
    """Natural log of the determinant of an SPD matrix, via Cholesky."""
    L = cholesky(a)
    return 2.0 * float(np.sum(np.log(np.diag(L))))


def solve_spd(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` for SPD ``a``; ``b`` may be a vector or a matrix."""
    a = as_sym(a)
    b = np.asarray(b, dtype=np.float64)
    if b.ndim not in (1, 2) or b.shape[0] != a.dim:
        raise DimensionMismatch(f"right-hand side shape {b.shape} does not match dim {a.dim}")
    L = cholesky(a)
    return _backend.kernels.cho_solve(L, b)


def sym_eigen(a, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns
    -------
    eigenvalues : ndarray
        Sorted in descending order.
    eigenvectors : ndarray
        Orthonormal columns, ``eigenvectors[:, i]`` pairs with
        ``eigenvalues[i]``.
    """
    a = as_sym(a)
    w, V, sweeps, converged = _backend.kernels.jacobi_eigh(a.values, int(max_sweeps), JACOBI_RTOL)
    if not converged:
        raise ConvergenceFailure(int(sweeps))
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def eigenvalues(a) -> np.ndarray:
    return sym_eigen(a)[0]


def check_spd(a, pd_tolerance=None) -> SpdCheckReport:
    """Classify ``a`` as PSD / PD by its smallest eigenvalue. Never raises."""
    a = as_sym(a)
    tol = default_pd_tolerance(a) if pd_tolerance is None else float(pd_tolerance)
    lam_min = float(sym_eigen(a)[0][-1])
    return SpdCheckReport(
        is_psd=lam_min >= -tol,
        is_pd=lam_min > tol,
        min_eigenvalue=lam_min,
        tolerance=tol,
    )


def symmetrize(a) -> SymMatrix:
    """Force exact symmetry on a result that is symmetric up to rounding."""
    a = np.asarray(a, dtype=np.float64)
    return SymMatrix(0.5 * (a + a.T))
