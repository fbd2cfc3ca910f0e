"""Transport-coupling duality.

A measure nu is a dual of the frame mu when some coupling gamma of the two
satisfies ``sum_ij gamma_ij x_i y_j^t = Id``. This module checks that
identity, searches for such couplings with the simplex solver, builds the
pushforward duals ``psi_h`` and evaluates the trace and energy identities
that follow from duality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import lp
from .errors import (
    BadExponent,
    DimMismatch,
    InvalidCoupling,
    MapDomainMismatch,
    NotADual,
    NotAReconstruction,
    NumericalBreakdown,
)
from .frame import frame_operator, frame_operator_inverse, require_frame
from .linalg import inverse_sqrt
from .measure import (
    AtomMap,
    Coupling,
    DiscreteMeasure,
    graph_coupling,
    pushforward,
    second_moment,
)

DUAL_TOL = 1e-7
TRACE_TOL = 1e-6
RECONSTRUCTION_TOL = 1e-8


@dataclass(frozen=True)
class DualCertificate:
    """Outcome of checking ``int x y^t d gamma = Id``.

    ``residual`` is the max-norm of ``M - Id``; ``symmetry_defect`` the
    max-norm of ``M - M^t`` (diagnostic only).
    """

    coupling: Coupling
    moment_matrix: np.ndarray
    residual: float
    trace_value: float
    symmetry_defect: float

    @property
    def valid(self) -> bool:
        return self.residual <= DUAL_TOL


def cross_moment(gamma: Coupling) -> np.ndarray:
    """``M = sum_ij gamma_ij x_i y_j^t``."""
    return gamma.mu_atoms.T @ gamma.plan @ gamma.nu_atoms


def check_dual(gamma: Coupling) -> DualCertificate:
    m = cross_moment(gamma)
    n = gamma.dim
    residual = float(np.max(np.abs(m - np.eye(n))))
    inner = gamma.mu_atoms @ gamma.nu_atoms.T
    trace_value = float(np.sum(gamma.plan * inner))
    return DualCertificate(gamma, m, residual, trace_value, float(np.max(np.abs(m - m.T))))


def dual_lp(mu: DiscreteMeasure, nu: DiscreteMeasure, cost=None) -> lp.LpProblem:
    """Equality-form LP whose feasible set is the set of dual couplings.

    Variables are ``gamma_ij`` (row-major); constraints are the row sums,
    column sums, and the ``n^2`` entries of the cross-moment matrix.
    """
    x, w = mu.support(), mu.support_weights()
    y, v = nu.support(), nu.support_weights()
    m, l, n = x.shape[0], y.shape[0], mu.dim
    rows = np.zeros((m + l + n * n, m * l))
    for i in range(m):
        rows[i, i * l : (i + 1) * l] = 1.0
    for j in range(l):
        rows[m + j, j::l] = 1.0
    # entry (a, b) of sum_ij gamma_ij x_i y_j^t
    rows[m + l :] = np.einsum("ia,jb->abij", x, y).reshape(n * n, m * l)
    rhs = np.concatenate([w / w.sum(), v / v.sum(), np.eye(n).reshape(-1)])
    c = np.zeros(m * l) if cost is None else np.asarray(cost, dtype=float).reshape(-1)
    return lp.LpProblem(c, rows, rhs)


def find_dual_coupling(mu: DiscreteMeasure, nu: DiscreteMeasure, cost=None) -> DualCertificate | None:
    """Search Gamma(mu, nu) for a coupling certifying nu as a dual of mu.

    Returns ``None`` when the feasibility LP has no solution (phase-one
    residual above 1e-7). With ``cost`` (an ``m x l`` matrix over support
    atoms) the cheapest dual coupling is returned instead of an arbitrary
    vertex.
    """
    if mu.dim != nu.dim:
        raise DimMismatch(f"mu lives in R^{mu.dim}, nu in R^{nu.dim}")
    problem = dual_lp(mu, nu, cost)
    sol = lp.solve(problem, feasibility_tol=DUAL_TOL)
    if sol.status is lp.Status.INFEASIBLE:
        return None
    if not sol.optimal:
        raise NumericalBreakdown(f"dual-coupling LP ended with status {sol.status.value}")
    x, y = mu.support(), nu.support()
    plan = sol.point.reshape(x.shape[0], y.shape[0])
    cert = check_dual(Coupling(x, y, plan / plan.sum()))
    if not cert.valid:
        raise NumericalBreakdown(f"LP vertex has dual residual {cert.residual:.3e}")
    return cert


def dense_subset_check(gamma: Coupling, tol: float = DUAL_TOL) -> bool:
    """Polarization test for duality.

    Requires the cross-moment matrix to be symmetric and checks
    ``|f|^2 = sum gamma_ij <f, x_i><y_j, f>`` on the standard basis and on all
    pairwise sums ``e_a + e_b``; for symmetric cross moments these quadratic
    forms pin down every entry.
    """
    n = gamma.dim
    m = cross_moment(gamma)
    if np.max(np.abs(m - m.T)) > tol:
        return False
    probes = [np.eye(n)[a] for a in range(n)]
    probes += [np.eye(n)[a] + np.eye(n)[b] for a in range(n) for b in range(a + 1, n)]
    for f in probes:
        lhs = float(f @ f)
        rhs = float((gamma.mu_atoms @ f) @ gamma.plan @ (gamma.nu_atoms @ f))
        # the e_a + e_b probes carry four entries at once
        if abs(lhs - rhs) > tol * lhs:
            return False
    return True


def psi_h_dual(mu: DiscreteMeasure, h: AtomMap) -> AtomMap:
    """The pushforward dual ``psi_h(x) = S^{-1}x + h(x) - int <S^{-1}x, y> h(y) dmu(y)``.

    The correction integral is linear in ``x``: it equals ``(H^t W X) S^{-1} x``
    where rows of ``X``/``H`` are support atoms and their ``h`` values. The
    returned map carries a linear part only when ``h`` does.
    """
    s_inv = frame_operator_inverse(mu).entries
    x, w = mu.support(), mu.support_weights()
    hx = h(x)
    if hx.shape[1] != mu.dim:
        raise MapDomainMismatch(f"h maps into R^{hx.shape[1]}, expected R^{mu.dim}")
    if not np.all(np.isfinite(hx)):
        raise MapDomainMismatch("h has non-finite values on the support")
    correction = (hx.T * w) @ x @ s_inv
    images = x @ s_inv + hx - x @ correction.T
    linear = None
    if h.linear is not None:
        linear = s_inv + h.linear - correction
    return AtomMap(x, images, linear)


class TraceIdentity(NamedTuple):
    integral: float
    esssup: float


def _pair_inner(gamma: Coupling) -> tuple[np.ndarray, np.ndarray]:
    inner = gamma.mu_atoms @ gamma.nu_atoms.T
    i, j = gamma.support_pairs()
    return inner, inner[i, j]


def trace_identity(gamma: Coupling) -> TraceIdentity:
    """``int <x, y> d gamma`` and its gamma-essential supremum."""
    inner, on_support = _pair_inner(gamma)
    return TraceIdentity(float(np.sum(gamma.plan * inner)), float(on_support.max()))


def trace_p_bound(gamma: Coupling, p: float) -> TraceIdentity:
    """``int |<x, y>|^p d gamma`` and its essential supremum (``p >= 1``)."""
    if not p >= 1:
        raise BadExponent(f"exponent must be at least 1, got {p}")
    inner, on_support = _pair_inner(gamma)
    return TraceIdentity(
        float(np.sum(gamma.plan * np.abs(inner) ** p)),
        float((np.abs(on_support) ** p).max()),
    )


def trace_equality(mu: DiscreteMeasure, fmap: AtomMap) -> tuple[float, float]:
    """``(sum w <x, T x>, sum w |S^{-1/2} x|^2)``; both equal n for a pushforward dual."""
    x, w = mu.support(), mu.support_weights()
    lhs = float(w @ np.einsum("ij,ij->i", x, fmap(x)))
    r = x @ inverse_sqrt(frame_operator(mu)).entries
    return lhs, float(w @ np.einsum("ij,ij->i", r, r))


class EnergySplit(NamedTuple):
    energy: float
    canonical_energy: float
    residual_energy: float


def canonical_coefficients(mu: DiscreteMeasure, f) -> np.ndarray:
    """``<S^{-1} f, x_i>`` for every atom of mu."""
    return mu.atoms @ (frame_operator_inverse(mu).entries @ np.asarray(f, dtype=float))


def pythagorean_decomposition(mu: DiscreteMeasure, f, omega) -> EnergySplit:
    """Split the L2(mu) energy of reconstruction coefficients ``omega``.

    ``omega`` has one entry per atom of mu and must reconstruct ``f``
    (``sum w_i omega_i x_i = f`` within 1e-8). The energy splits into the
    canonical part and the squared distance from the canonical coefficients.

    The canonical coefficients are taken as the L2(mu)-orthogonal projection
    of ``omega`` onto the range of the analysis map ``u -> (<u, x_i>)_i``,
    computed by Gram-Schmidt in the weighted inner product. For an exact
    reconstruction this is ``<S^{-1} f, x_i>``;
    in floating point it keeps the two parts orthogonal to machine
    precision, whereas forming ``S^{-1} f`` directly leaves a cross term of
    size ``|S^{-1} f| * |reconstruction error|`` on ill-conditioned frames.
    """
    f = np.asarray(f, dtype=float).reshape(-1)
    omega = np.asarray(omega, dtype=float).reshape(-1)
    if f.shape[0] != mu.dim:
        raise DimMismatch(f"f has {f.shape[0]} coordinates, expected {mu.dim}")
    if omega.shape[0] != mu.size:
        raise NotAReconstruction(f"omega has {omega.shape[0]} entries for {mu.size} atoms")
    require_frame(mu)
    w = mu.weights
    recon = mu.atoms.T @ (w * omega)
    err = float(np.linalg.norm(recon - f))
    if err > RECONSTRUCTION_TOL:
        raise NotAReconstruction(f"omega reconstructs f only up to {err:.3e}")
    basis = _weighted_orthonormal_columns(mu.atoms, w)
    canonical = basis @ (basis.T @ (w * omega))
    residual = omega - canonical
    return EnergySplit(
        float(w @ omega**2), float(w @ canonical**2), float(w @ residual**2)
    )


def _weighted_orthonormal_columns(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Columns spanning range(x), orthonormal for ``<a, b> = sum w a b``.

    Modified Gram-Schmidt with one reorthogonalization pass; no square roots
    of the weights are formed, so small exact examples stay exact.
    """
    cols = []
    for j in range(x.shape[1]):
        v = x[:, j].astype(float)
        for _ in range(2):
            for q in cols:
                v = v - (w @ (q * v)) * q
        cols.append(v / np.sqrt(w @ (v * v)))
    return np.column_stack(cols)


@dataclass(frozen=True)
class PerturbationCertificate:
    """Frame bounds certified for eta from a nearby pushforward dual pair.

    ``lower_bound`` is ``None`` when ``kappa >= 1`` (no certificate).
    """

    kappa: float
    lower_bound: float | None
    upper_bound: float

    @property
    def certified(self) -> bool:
        return self.lower_bound is not None


def perturbation_certificate(
    mu: DiscreteMeasure, fmap: AtomMap, eta: DiscreteMeasure, gamma: Coupling
) -> PerturbationCertificate:
    """Certify eta as a frame when it is transport-close to mu.

    ``kappa = sum_ij gamma_ij |x_i - z_j| |T(x_i)|``; for ``kappa < 1`` eta is a
    frame with bounds ``(1 - kappa)^2 / M_2(T_# mu)`` and ``M_2(eta)``.
    """
    if gamma.dim != mu.dim or eta.dim != mu.dim:
        raise DimMismatch("mu, eta and gamma must share a dimension")
    if not gamma.has_marginals(mu, eta):
        raise InvalidCoupling("gamma does not have marginals (mu, eta)")
    cert = check_dual(graph_coupling(mu, fmap))
    if not cert.valid:
        raise NotADual(f"T_# mu is not a pushforward dual (residual {cert.residual:.3e})")
    dist = np.linalg.norm(gamma.mu_atoms[:, None, :] - gamma.nu_atoms[None, :, :], axis=2)
    rows = np.flatnonzero(gamma.plan.sum(axis=1) > 0)
    tnorm = np.zeros(gamma.mu_atoms.shape[0])
    tnorm[rows] = np.linalg.norm(fmap(gamma.mu_atoms[rows]), axis=1)
    kappa = float(np.sum(gamma.plan * dist * tnorm[:, None]))
    upper = second_moment(eta)
    if kappa >= 1.0:
        return PerturbationCertificate(kappa, None, upper)
    lower = (1.0 - kappa) ** 2 / second_moment(pushforward(mu, fmap))
    return PerturbationCertificate(kappa, lower, upper)


def perturbation_operator(fmap: AtomMap, gamma: Coupling) -> np.ndarray:
    """Matrix of ``L f = int <f, T(x)> z d gamma(x, z)``; ``|Id - L| <= kappa``."""
    rows = np.flatnonzero(gamma.plan.sum(axis=1) > 0)
    return gamma.nu_atoms.T @ gamma.plan[rows].T @ fmap(gamma.mu_atoms[rows])
