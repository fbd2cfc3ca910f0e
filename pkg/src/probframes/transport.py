"""Exact p-Wasserstein distances between discrete measures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import lp
from .errors import BadExponent, DimMismatch, NotSphereSupported, NotUnitVector, NumericalBreakdown
from .measure import AtomMap, Coupling, DiscreteMeasure, pushforward

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class TransportPlan:
    coupling: Coupling
    cost: float
    p: float

    @property
    def distance(self) -> float:
        """``W_p = cost^(1/p)``."""
        return self.cost ** (1.0 / self.p)


def cost_matrix(x: np.ndarray, y: np.ndarray, p: float) -> np.ndarray:
    d = np.linalg.norm(x[:, None, :] - y[None, :, :], axis=2)
    return d**p


def transport_lp(mu: DiscreteMeasure, nu: DiscreteMeasure, cost: np.ndarray) -> lp.LpProblem:
    m, l = cost.shape
    a = np.zeros((m + l, m * l))
    for i in range(m):
        a[i, i * l : (i + 1) * l] = 1.0
    for j in range(l):
        a[m + j, j::l] = 1.0
    w, v = mu.support_weights(), nu.support_weights()
    return lp.LpProblem(cost.reshape(-1), a, np.concatenate([w / w.sum(), v / v.sum()]))


def wasserstein(mu: DiscreteMeasure, nu: DiscreteMeasure, p: float = 2.0) -> TransportPlan:
    """Optimal transport plan for cost ``|x - y|^p`` (zero-weight atoms dropped)."""
    if mu.dim != nu.dim:
        raise DimMismatch(f"mu lives in R^{mu.dim}, nu in R^{nu.dim}")
    if not p >= 1:
        raise BadExponent(f"exponent must be at least 1, got {p}")
    x, y = mu.support(), nu.support()
    c = cost_matrix(x, y, p)
    sol = lp.solve(transport_lp(mu, nu, c))
    if not sol.optimal:
        # marginal constraints with equal total mass are always feasible and bounded
        raise NumericalBreakdown(f"transport LP ended with status {sol.status.value}")
    plan = sol.point.reshape(c.shape)
    plan = plan / plan.sum()
    coupling = Coupling(x, y, plan)
    return TransportPlan(coupling, float(np.sum(coupling.plan * c)), float(p))


def northwest_corner(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Coupling:
    """Feasible (generally suboptimal) plan from the north-west corner rule."""
    x, w = mu.support(), mu.support_weights().copy()
    y, v = nu.support(), nu.support_weights().copy()
    plan = np.zeros((x.shape[0], y.shape[0]))
    i = j = 0
    while i < len(w) and j < len(v):
        q = min(w[i], v[j])
        plan[i, j] = q
        w[i] -= q
        v[j] -= q
        if w[i] <= v[j]:
            i += 1
        else:
            j += 1
    return Coupling(x, y, plan / plan.sum())


class HyperplaneIdentity(NamedTuple):
    wp_p: float
    moment: float


def hyperplane_projector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    return np.eye(x.shape[0]) - np.outer(x, x)


def absolute_moment(mu: DiscreteMeasure, x, p: float) -> float:
    """``int |<x, y>|^p d mu(y)``."""
    return float(mu.weights @ np.abs(mu.atoms @ np.asarray(x, dtype=float)) ** p)


def hyperplane_projection_distance(mu: DiscreteMeasure, x, p: float = 2.0) -> HyperplaneIdentity:
    """Both sides of ``W_p^p(mu, (pi_{x-perp})_# mu) = int |<x, y>|^p d mu``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != mu.dim:
        raise DimMismatch(f"x has {x.shape[0]} coordinates, expected {mu.dim}")
    if abs(np.linalg.norm(x) - 1.0) > UNIT_TOL:
        raise NotUnitVector(f"|x| = {np.linalg.norm(x)!r}")
    projected = pushforward(mu, AtomMap.from_linear(hyperplane_projector(x)))
    return HyperplaneIdentity(wasserstein(mu, projected, p).cost, absolute_moment(mu, x, p))


def potential_as_transport(mu: DiscreteMeasure, p: float = 2.0) -> float:
    """``sum_i w_i W_p^p(mu, (pi_{x_i-perp})_# mu)`` for mu on the unit sphere."""
    x, w = mu.support(), mu.support_weights()
    norms = np.linalg.norm(x, axis=1)
    if np.max(np.abs(norms - 1.0)) > UNIT_TOL:
        raise NotSphereSupported("every support atom must have unit norm")
    return float(sum(wi * hyperplane_projection_distance(mu, xi, p).wp_p for xi, wi in zip(x, w)))


def p_frame_potential(mu: DiscreteMeasure, p: float) -> float:
    """``sum_ij w_i w_j |<x_i, x_j>|^p``."""
    g = np.abs(mu.atoms @ mu.atoms.T) ** p
    return float(mu.weights @ g @ mu.weights)
