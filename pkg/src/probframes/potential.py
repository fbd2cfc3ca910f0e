"""Dual frame potentials and their sharp lower bounds.

For a frame mu and a dual nu the potential is the double sum
``sum_ij w_i v_j |<x_i, y_j>|^2`` taken against the product of the
marginals. Its lower bounds are ``n A / B`` for general duals and ``n`` for
pushforward duals ``T_# mu``; both are attained only by the canonical dual
(the general bound additionally needs mu tight). The ``2p`` variants raise
the integrand to the power ``p`` and are never attained once ``n >= 2`` or
mu has three or more support points.

Every report carries two views of attainment: ``gap_attained`` compares the
value to the bound numerically, ``equality_case`` evaluates the structural
characterization. Callers (and the tests) expect them to agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .duality import DUAL_TOL, check_dual
from .errors import BadExponent, NotADual, NotOrthogonal
from .frame import canonical_dual, frame_bounds, frame_operator_inverse, require_frame
from .linalg import is_orthogonal
from .measure import AtomMap, Coupling, DiscreteMeasure, graph_coupling, pushforward

CANONICAL_TOL = 1e-7
EQUALITY_TOL = 1e-8


@dataclass(frozen=True)
class PotentialReport:
    value: float
    lower_bound: float
    equality_case: bool
    dim: int
    support_size: int

    @property
    def gap(self) -> float:
        return self.value - self.lower_bound

    @property
    def gap_attained(self) -> bool:
        return self.gap <= EQUALITY_TOL * max(1.0, self.lower_bound)

    @property
    def bound_holds(self) -> bool:
        return self.gap >= -EQUALITY_TOL * max(1.0, self.lower_bound)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "lower_bound": self.lower_bound,
            "gap": self.gap,
            "equality_case": self.equality_case,
            "gap_attained": self.gap_attained,
            "dim": self.dim,
            "support_size": self.support_size,
        }


def _abs_power(t: np.ndarray, q: float) -> np.ndarray:
    a = np.abs(t)
    return np.where(a <= 1e-300, 0.0, np.power(np.where(a <= 1e-300, 1.0, a), q))


def _cross_gram(mu: DiscreteMeasure, other) -> tuple[np.ndarray, np.ndarray]:
    """Inner products ``<x_i, y_j>`` over support atoms, and the product weights."""
    x, w = mu.support(), mu.support_weights()
    if isinstance(other, AtomMap):
        y, v = other(x), w
    else:
        y, v = other.support(), other.support_weights()
    return x @ y.T, np.outer(w, v)


def _require_pushforward_dual(mu: DiscreteMeasure, fmap: AtomMap) -> None:
    cert = check_dual(graph_coupling(mu, fmap))
    if cert.residual > DUAL_TOL:
        raise NotADual(f"(Id, T)_# mu has dual residual {cert.residual:.3e}")


def matches_canonical_map(mu: DiscreteMeasure, fmap: AtomMap, tol: float = CANONICAL_TOL) -> bool:
    """Whether ``T(x) = S_mu^{-1} x`` on every support atom (within ``tol``)."""
    x = mu.support()
    target = x @ frame_operator_inverse(mu).entries
    return bool(np.max(np.linalg.norm(fmap(x) - target, axis=1)) <= tol)


def is_canonical_dual(mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float = CANONICAL_TOL) -> bool:
    return canonical_dual(mu)[1].isclose(nu, tol)


def pdfp(mu: DiscreteMeasure, nu: DiscreteMeasure) -> PotentialReport:
    """Dual frame potential of a general dual; bound ``n A / B``.

    Duality of ``nu`` is the caller's responsibility (see
    ``find_dual_coupling``); the value is computed either way.
    """
    require_frame(mu)
    bounds = frame_bounds(mu)
    g, weights = _cross_gram(mu, nu)
    value = float(np.sum(weights * g * g))
    equality = bounds.tight and is_canonical_dual(mu, nu)
    return PotentialReport(
        value, mu.dim * bounds.lower / bounds.upper, equality, mu.dim, mu.support_size()
    )


def pdfp_pushforward(mu: DiscreteMeasure, fmap: AtomMap) -> PotentialReport:
    """Dual frame potential of ``T_# mu``; bound ``n``, attained iff ``T = S^{-1}`` on supp(mu)."""
    require_frame(mu)
    _require_pushforward_dual(mu, fmap)
    g, weights = _cross_gram(mu, fmap)
    value = float(np.sum(weights * g * g))
    return PotentialReport(
        value, float(mu.dim), matches_canonical_map(mu, fmap), mu.dim, mu.support_size()
    )


def pdfp_2p(mu: DiscreteMeasure, nu_or_map, p: float) -> PotentialReport:
    """``sum |<x, y>|^{2p}`` against ``mu (x) nu`` (or ``mu (x) mu`` through ``T``).

    The bound is ``n^p`` for a pushforward dual and ``(n A / B)^p`` otherwise.
    Equality is impossible when ``n >= 2`` or ``|supp mu| >= 3``; in the
    remaining one-dimensional cases it needs the canonical dual and a
    constant ``|<x, y>|`` over the support pairs.
    """
    if not p > 1:
        raise BadExponent(f"exponent must exceed 1, got {p}")
    require_frame(mu)
    n = mu.dim
    if isinstance(nu_or_map, AtomMap):
        _require_pushforward_dual(mu, nu_or_map)
        lower = float(n) ** p
        canonical = matches_canonical_map(mu, nu_or_map)
    else:
        bounds = frame_bounds(mu)
        lower = (n * bounds.lower / bounds.upper) ** p
        canonical = bounds.tight and is_canonical_dual(mu, nu_or_map)
    g, weights = _cross_gram(mu, nu_or_map)
    a = _abs_power(g, 2.0 * p)
    value = float(np.sum(weights * a))
    support = mu.support_size()
    if n >= 2 or support >= 3:
        equality = False
    else:
        on_pairs = np.abs(g[weights > 1e-12])
        equality = canonical and float(on_pairs.max() - on_pairs.min()) <= EQUALITY_TOL
    return PotentialReport(value, lower, equality, n, support)


def esssup_potential(mu: DiscreteMeasure, nu_or_map, p: float) -> float:
    """Largest ``|<x, y>|^{2p}`` over support pairs of ``mu (x) nu``."""
    if not p >= 1:
        raise BadExponent(f"exponent must be at least 1, got {p}")
    require_frame(mu)
    if isinstance(nu_or_map, AtomMap):
        _require_pushforward_dual(mu, nu_or_map)
    g, weights = _cross_gram(mu, nu_or_map)
    return float(_abs_power(g[weights > 1e-12], 2.0 * p).max())


def esssup_lower_bound(mu: DiscreteMeasure, nu_or_map, p: float) -> float:
    """The bound the essential supremum exceeds: ``n^p`` or ``(n A / B)^p``."""
    n = mu.dim
    if isinstance(nu_or_map, AtomMap):
        return float(n) ** p
    b = frame_bounds(mu)
    return (n * b.lower / b.upper) ** p


def unitary_invariance_check(
    mu: DiscreteMeasure, nu: DiscreteMeasure, gamma: Coupling, u, tol: float = 1e-8
) -> bool:
    """Potential and duality both survive ``(U, U)_#``."""
    u = np.asarray(u, dtype=float)
    if not is_orthogonal(u):
        raise NotOrthogonal("U is not orthogonal within 1e-9")
    rot = AtomMap.from_linear(u)
    before = pdfp(mu, nu).value
    after = pdfp(pushforward(mu, rot), pushforward(nu, rot)).value
    moved = check_dual(gamma.transformed(u))
    return abs(before - after) <= tol and moved.valid


def dual_frame_potential(frame, dual) -> float:
    """Finite-frame potential ``sum_ij <f_i, g_j>^2`` for vector lists."""
    f = np.asarray(frame, dtype=float)
    g = np.asarray(dual, dtype=float)
    c = f @ g.T
    return float(np.sum(c * c))


def frame_potential(frame) -> float:
    """Unit-norm frame potential ``sum_ij <f_i, f_j>^2``."""
    return dual_frame_potential(frame, frame)


def finite_canonical_dual(frame) -> np.ndarray:
    """``S^{-1} f_i`` with ``S = sum_i f_i f_i^t`` (no normalization by N)."""
    f = np.asarray(frame, dtype=float)
    n_vec = f.shape[0]
    mu = DiscreteMeasure(f)
    # S_mu = S / N, so S^{-1} = S_mu^{-1} / N
    return f @ frame_operator_inverse(mu).entries / n_vec
