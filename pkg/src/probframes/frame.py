"""Frame diagnostics and constructions for discrete measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import EtaNotTight, KTooSmall, NotAFrame, NotPSD
from .linalg import SymMatrix
from .measure import AtomMap, DiscreteMeasure, mixture, pushforward, second_moment

FRAME_TOL = 1e-10
TIGHT_TOL = 1e-9


@dataclass(frozen=True)
class FrameBounds:
    """Optimal frame bounds ``A = lambda_min(S_mu)``, ``B = lambda_max(S_mu)``."""

    lower: float
    upper: float
    tight: bool
    parseval: bool

    @property
    def is_frame(self) -> bool:
        return self.lower > FRAME_TOL


def frame_operator(mu: DiscreteMeasure) -> SymMatrix:
    """``S_mu = sum_i w_i x_i x_i^t``."""
    x = mu.atoms
    return SymMatrix((x * mu.weights[:, None]).T @ x)


def _bounds_from_eigs(lam: np.ndarray) -> FrameBounds:
    a = max(0.0, float(lam[0]))
    b = max(a, float(lam[-1]))
    tight = (b - a) / max(b, 1e-300) <= TIGHT_TOL
    return FrameBounds(a, b, tight, tight and abs(a - 1.0) <= TIGHT_TOL)


def frame_bounds(mu: DiscreteMeasure) -> FrameBounds:
    return _bounds_from_eigs(linalg.eigen(frame_operator(mu)).eigenvalues)


def is_frame(mu: DiscreteMeasure) -> bool:
    return bool(linalg.eigen(frame_operator(mu)).eigenvalues[0] > FRAME_TOL)


def require_frame(mu: DiscreteMeasure) -> linalg.EigenDecomp:
    """Eigendecomposition of ``S_mu``; raises ``NotAFrame`` if it is singular."""
    ed = linalg.eigen(frame_operator(mu))
    if ed.eigenvalues[0] <= FRAME_TOL:
        raise NotAFrame(
            f"frame operator has smallest eigenvalue {ed.eigenvalues[0]:.3e}; "
            "the support does not span R^n"
        )
    return ed


def frame_operator_inverse(mu: DiscreteMeasure) -> SymMatrix:
    return require_frame(mu).apply(lambda lam: 1.0 / lam)


def canonical_dual(mu: DiscreteMeasure) -> tuple[AtomMap, DiscreteMeasure]:
    """The map ``x -> S_mu^{-1} x`` on supp(mu) and its pushforward of mu."""
    s_inv = frame_operator_inverse(mu)
    fmap = AtomMap.from_linear(s_inv.entries, mu.support())
    return fmap, pushforward(mu, fmap)


def default_eta(dim: int, k: float) -> DiscreteMeasure:
    """Uniform measure on ``{+-sqrt(2 k n) e_i}``, tight with bound ``2k``.

    Any tight measure with that bound works for ``bessel_to_tight``; this one
    is simply the smallest symmetric choice.
    """
    r = np.sqrt(2.0 * k * dim)
    basis = np.eye(dim) * r
    return DiscreteMeasure(np.vstack([basis, -basis]))


def bessel_to_tight(
    mu: DiscreteMeasure,
    k: float,
    eta_k: DiscreteMeasure | None = None,
    bound: float | None = None,
) -> DiscreteMeasure:
    """Complete a Bessel measure to a tight frame with bound ``k * B``.

    Returns ``(mu + nu_k) / 2`` with
    ``nu_k = ((B Id - S_mu / (2k))^{1/2})_# eta_k``.

    Parameters
    ----------
    mu : DiscreteMeasure
        Any measure (every finitely supported measure is Bessel).
    k : float
        Target scale, at least 1/2.
    eta_k : DiscreteMeasure, optional
        Tight frame with bound ``2k``; defaults to ``default_eta(n, k)``.
    bound : float, optional
        Bessel bound ``B``. Defaults to the optimal ``lambda_max(S_mu)``;
        an override must not be smaller than that.
    """
    if k < 0.5:
        raise KTooSmall(f"k must be at least 1/2, got {k}")
    n = mu.dim
    s = frame_operator(mu)
    lam_max = float(linalg.eigen(s).eigenvalues[-1])
    if bound is None:
        bound = lam_max
    elif bound < lam_max * (1.0 - 1e-12):
        raise NotPSD(f"bound {bound} is below lambda_max(S_mu) = {lam_max}")
    if bound <= 0.0:
        raise NotPSD("Bessel bound must be positive (mu is the point mass at the origin)")
    if eta_k is None:
        eta_k = default_eta(n, k)
    if eta_k.dim != n:
        raise EtaNotTight(f"eta lives in R^{eta_k.dim}, expected R^{n}")
    s_eta = frame_operator(eta_k).entries
    if np.max(np.abs(s_eta - 2.0 * k * np.eye(n))) > TIGHT_TOL * max(1.0, 2.0 * k):
        raise EtaNotTight(f"eta must be tight with bound 2k = {2.0 * k}")
    gap = SymMatrix(bound * np.eye(n) - s.entries / (2.0 * k))
    root = linalg.psd_sqrt(gap)
    nu_k = pushforward(eta_k, AtomMap.from_linear(root.entries, eta_k.support()))
    return mixture(mu, nu_k, 0.5)


def tight_via_scaled_dual(mu: DiscreteMeasure, k: float) -> bool:
    """Whether ``(k Id)_# mu`` is a pushforward dual of mu, i.e. ``k S_mu = Id``."""
    require_frame(mu)
    m = k * frame_operator(mu).entries
    return bool(np.max(np.abs(m - np.eye(mu.dim))) <= TIGHT_TOL)


def finite_frame_potential(mu: DiscreteMeasure) -> float:
    """``PFP(mu) = sum_ij w_i w_j <x_i, x_j>^2``."""
    g = mu.atoms @ mu.atoms.T
    return float(mu.weights @ (g * g) @ mu.weights)


def frame_potential_lower_bound(mu: DiscreteMeasure) -> float:
    """``M_2(mu)^2 / n``."""
    return second_moment(mu) ** 2 / mu.dim
