"""Dense symmetric linear algebra for frame-sized matrices.

The eigensolver is a cyclic Jacobi iteration. At the sizes this package deals
with (n up to a few dozen) it is accurate to a few ulps and needs no LAPACK.
Everything else (square roots, inverses) is a spectral function built on top
of ``eigen``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, NotPSD, NotSymmetric, Singular

MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12
_EPS = np.finfo(float).eps


def _scale(a: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Real symmetric ``n x n`` matrix, stored symmetrized as ``(M + M^t)/2``."""

    entries: np.ndarray

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise NotSymmetric(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NotSymmetric("matrix has non-finite entries")
        defect = float(np.max(np.abs(a - a.T)))
        if defect > SYMMETRY_TOL * _scale(a):
            raise NotSymmetric(f"asymmetry {defect:.3e} exceeds tolerance")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __matmul__(self, other):
        return self.entries @ np.asarray(other, dtype=float)

    def __rmatmul__(self, other):
        return np.asarray(other, dtype=float) @ self.entries

    def trace(self) -> float:
        return float(np.trace(self.entries))

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.entries)))

    def __repr__(self):
        return f"SymMatrix({self.entries.tolist()!r})"


@dataclass(frozen=True)
class EigenDecomp:
    """Ascending eigenvalues with orthonormal eigenvectors stored as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T

    def apply(self, func) -> SymMatrix:
        """Spectral calculus: ``Q f(Lambda) Q^t``."""
        q = self.eigenvectors
        return SymMatrix((q * func(self.eigenvalues)) @ q.T)


def as_sym(m) -> SymMatrix:
    return m if isinstance(m, SymMatrix) else SymMatrix(m)


def eigen(m) -> EigenDecomp:
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    A rotation is skipped when the off-diagonal entry is negligible next to
    the geometric mean of the two diagonal entries; the iteration stops after
    the first sweep that performs no rotation.
    """
    m = as_sym(m)
    a = np.array(m.entries, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    floor = 1e-300 + _EPS * 1e-3 * _scale(a)
    for _ in range(MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= floor or abs(apq) <= _EPS * np.sqrt(abs(a[p, p] * a[q, q])) * 0.5:
                    a[p, q] = a[q, p] = 0.0
                    continue
                rotated = True
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        if not rotated:
            break
    else:
        raise NonConvergence(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")
    lam = np.diag(a).copy()
    order = np.argsort(lam, kind="stable")
    return EigenDecomp(lam[order], v[:, order])


def psd_sqrt(m, tol: float = 1e-9) -> SymMatrix:
    """Principal square root of a positive semi-definite matrix.

    Eigenvalues in ``[-tol, 0)`` are treated as zero; anything more negative
    raises ``NotPSD``.
    """
    ed = eigen(m)
    lam_min = ed.eigenvalues[0]
    if lam_min < -tol:
        raise NotPSD(f"smallest eigenvalue {lam_min:.3e} is below -{tol:g}")
    return ed.apply(lambda lam: np.sqrt(np.clip(lam, 0.0, None)))


def inverse(m, tol: float = 1e-10) -> SymMatrix:
    ed = eigen(m)
    if ed.eigenvalues[0] <= tol:
        raise Singular(f"smallest eigenvalue {ed.eigenvalues[0]:.3e} is not above {tol:g}")
    return ed.apply(lambda lam: 1.0 / lam)


def inverse_sqrt(m, tol: float = 1e-10) -> SymMatrix:
    ed = eigen(m)
    if ed.eigenvalues[0] <= tol:
        raise Singular(f"smallest eigenvalue {ed.eigenvalues[0]:.3e} is not above {tol:g}")
    return ed.apply(lambda lam: 1.0 / np.sqrt(lam))


def trace(m) -> float:
    return as_sym(m).trace()


def is_orthogonal(u, tol: float = 1e-9) -> bool:
    u = np.asarray(u, dtype=float)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.T @ u - np.eye(u.shape[0]))) <= tol)
