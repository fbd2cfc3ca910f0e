"""Finitely supported probability measures on R^n.

Three value types live here because they reference each other:

* ``DiscreteMeasure`` -- atoms with weights, the stand-in for mu, nu, eta.
* ``AtomMap`` -- a map known by its values on atoms (optionally linear).
* ``Coupling`` -- a joint weight matrix over two atom lists.

All three are immutable; their arrays are flagged read-only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimMismatch, InvalidCoupling, InvalidMeasure, MapDomainMismatch

WEIGHT_SUM_TOL = 1e-9
SUPPORT_TOL = 1e-12
MERGE_TOL = 1e-12
COUPLING_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _as_points(points, dim: int | None = None) -> np.ndarray:
    """Coerce to an ``(m, dim)`` float array; 1-d input is a list of scalars
    when ``dim == 1`` and a single point otherwise."""
    a = np.array(points, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a.reshape(-1, 1) if dim == 1 else a.reshape(1, -1)
    if a.ndim != 2:
        raise InvalidMeasure(f"points must be a 2-d array, got shape {a.shape}")
    if dim is not None and a.shape[1] != dim:
        raise DimMismatch(f"expected points in R^{dim}, got {a.shape[1]} coordinates")
    return a


def merge_atoms(atoms: np.ndarray, weights: np.ndarray, tol: float = MERGE_TOL):
    """Greedy merge of atoms that agree coordinatewise within ``tol``.

    The first occurrence keeps its position; later coincident atoms add their
    weight to it. Order-preserving and deterministic.
    """
    kept: list[int] = []
    out_w: list[float] = []
    for i in range(atoms.shape[0]):
        if kept:
            diff = np.max(np.abs(atoms[kept] - atoms[i]), axis=1)
            hit = np.flatnonzero(diff <= tol)
            if hit.size:
                out_w[hit[0]] += weights[i]
                continue
        kept.append(i)
        out_w.append(float(weights[i]))
    return atoms[kept].copy(), np.array(out_w)


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Probability measure ``sum_i w_i delta_{x_i}`` on ``R^dim``.

    Weights within 1e-9 of summing to one are renormalized; anything further
    off is rejected. Atoms are stored as given (no merging on construction).
    """

    dim: int
    atoms: np.ndarray
    weights: np.ndarray

    def __init__(self, atoms, weights=None, dim: int | None = None):
        if dim is not None and (int(dim) != dim or dim < 1):
            raise InvalidMeasure(f"dim must be a positive integer, got {dim!r}")
        x = _as_points(atoms, dim)
        if x.shape[0] == 0:
            raise InvalidMeasure("a measure needs at least one atom")
        if x.shape[1] == 0:
            raise InvalidMeasure("atoms need at least one coordinate")
        if not np.all(np.isfinite(x)):
            raise InvalidMeasure("atoms must be finite")
        m = x.shape[0]
        if weights is None:
            w = np.full(m, 1.0 / m)
        else:
            w = np.array(weights, dtype=float).reshape(-1)
            if w.shape[0] != m:
                raise InvalidMeasure(f"{m} atoms but {w.shape[0]} weights")
            if not np.all(np.isfinite(w)) or np.any(w < 0):
                raise InvalidMeasure("weights must be finite and nonnegative")
            total = float(w.sum())
            if abs(total - 1.0) > WEIGHT_SUM_TOL:
                raise InvalidMeasure(f"weights sum to {total!r}, not 1")
            w = w / total
        object.__setattr__(self, "dim", int(x.shape[1]))
        object.__setattr__(self, "atoms", _frozen(x))
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def dirac(cls, point) -> "DiscreteMeasure":
        p = np.atleast_1d(np.asarray(point, dtype=float))
        return cls(p.reshape(1, -1), [1.0])

    @classmethod
    def uniform(cls, points, dim: int | None = None) -> "DiscreteMeasure":
        return cls(points, None, dim=dim)

    @property
    def size(self) -> int:
        return self.atoms.shape[0]

    @property
    def support_mask(self) -> np.ndarray:
        return self.weights > SUPPORT_TOL

    def support(self) -> np.ndarray:
        """Positive-weight atoms (the discrete analogue of supp(mu))."""
        return self.atoms[self.support_mask]

    def support_weights(self) -> np.ndarray:
        return self.weights[self.support_mask]

    def support_size(self) -> int:
        return int(self.support_mask.sum())

    def canonical(self, tol: float = MERGE_TOL) -> "DiscreteMeasure":
        """Support atoms only, with coincident atoms merged."""
        x, w = merge_atoms(self.support(), self.support_weights(), tol)
        return DiscreteMeasure(x, w / w.sum())

    def isclose(self, other: "DiscreteMeasure", atol: float = 1e-8) -> bool:
        """Equality up to atom merging: same support and weights within ``atol``."""
        if self.dim != other.dim:
            return False
        xa, wa = merge_atoms(self.support(), self.support_weights(), atol)
        xb, wb = merge_atoms(other.support(), other.support_weights(), atol)
        if xa.shape[0] != xb.shape[0]:
            return False
        unused = np.ones(xb.shape[0], dtype=bool)
        for i in range(xa.shape[0]):
            diff = np.max(np.abs(xb - xa[i]), axis=1)
            cand = np.flatnonzero((diff <= atol) & unused)
            if cand.size == 0:
                return False
            j = cand[np.argmin(diff[cand])]
            if abs(wa[i] - wb[j]) > atol:
                return False
            unused[j] = False
        return True

    def to_dict(self) -> dict:
        return {"dim": self.dim, "atoms": self.atoms.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "DiscreteMeasure":
        if not isinstance(data, dict) or "atoms" not in data:
            raise InvalidMeasure("measure JSON needs an 'atoms' key")
        dim = data.get("dim")
        atoms = data["atoms"]
        if dim == 1 and atoms and not isinstance(atoms[0], list):
            atoms = [[a] for a in atoms]
        return cls(atoms, data.get("weights"), dim=dim)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __repr__(self):
        return f"DiscreteMeasure(dim={self.dim}, atoms={self.atoms.tolist()}, weights={self.weights.tolist()})"


def second_moment(mu: DiscreteMeasure) -> float:
    return float(mu.weights @ np.einsum("ij,ij->i", mu.atoms, mu.atoms))


@dataclass(frozen=True, eq=False)
class AtomMap:
    """A map recorded by its values on a finite set of domain points.

    ``linear`` (shape ``codomain_dim x domain_dim``) is kept when the map is
    known to be linear; it is used for points outside the recorded domain.
    """

    domain: np.ndarray
    images: np.ndarray
    linear: np.ndarray | None = None

    def __init__(self, domain, images, linear=None):
        d = np.array(domain, dtype=float)
        im = np.array(images, dtype=float)
        if d.ndim != 2 or im.ndim != 2 or d.shape[0] != im.shape[0]:
            raise MapDomainMismatch(
                f"domain {d.shape} and images {im.shape} must be 2-d with matching rows"
            )
        lin = None
        if linear is not None:
            lin = np.array(linear, dtype=float)
            if lin.ndim != 2:
                raise MapDomainMismatch("linear part must be a matrix")
            if d.shape[0] and (lin.shape[1] != d.shape[1] or lin.shape[0] != im.shape[1]):
                raise MapDomainMismatch("linear part does not match domain/codomain dims")
            lin = _frozen(lin)
        object.__setattr__(self, "domain", _frozen(d))
        object.__setattr__(self, "images", _frozen(im))
        object.__setattr__(self, "linear", lin)

    @classmethod
    def from_linear(cls, matrix, points=None) -> "AtomMap":
        a = np.atleast_2d(np.array(matrix, dtype=float))
        if points is None:
            return cls(np.empty((0, a.shape[1])), np.empty((0, a.shape[0])), a)
        x = _as_points(points, a.shape[1])
        return cls(x, x @ a.T, a)

    @classmethod
    def from_function(cls, func: Callable, points, codomain_dim: int | None = None) -> "AtomMap":
        x = np.array(points, dtype=float)
        images = [np.atleast_1d(np.asarray(func(p), dtype=float)) for p in x]
        im = np.array(images, dtype=float).reshape(len(images), -1)
        if codomain_dim is not None and im.shape[1] != codomain_dim:
            raise DimMismatch(f"map values have {im.shape[1]} coordinates, expected {codomain_dim}")
        return cls(x, im)

    @property
    def domain_dim(self) -> int:
        return self.linear.shape[1] if self.linear is not None else self.domain.shape[1]

    @property
    def codomain_dim(self) -> int:
        return self.linear.shape[0] if self.linear is not None else self.images.shape[1]

    def __call__(self, points) -> np.ndarray:
        """Images of ``points`` (an ``(k, domain_dim)`` array), shape ``(k, codomain_dim)``."""
        x = _as_points(points, self.domain_dim)
        out = np.empty((x.shape[0], self.codomain_dim))
        for i, p in enumerate(x):
            if self.domain.shape[0]:
                diff = np.max(np.abs(self.domain - p), axis=1)
                hit = np.flatnonzero(diff <= MERGE_TOL)
                if hit.size:
                    out[i] = self.images[hit[0]]
                    continue
            if self.linear is None:
                raise MapDomainMismatch(f"map has no value at {p.tolist()}")
            out[i] = self.linear @ p
        return out

    def restrict(self, points) -> "AtomMap":
        x = _as_points(points, self.domain_dim)
        return AtomMap(x, self(x), self.linear)

    def to_dict(self) -> dict:
        d = {
            "domain_dim": self.domain_dim,
            "codomain_dim": self.codomain_dim,
            "domain": self.domain.tolist(),
            "images": self.images.tolist(),
        }
        if self.linear is not None:
            d["linear"] = self.linear.tolist()
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "AtomMap":
        if not isinstance(data, dict):
            raise MapDomainMismatch("map JSON must be an object")
        lin = data.get("linear")
        if "domain" not in data:
            if lin is None:
                raise MapDomainMismatch("map JSON needs 'domain'/'images' or 'linear'")
            return cls.from_linear(lin)
        n = data.get("domain_dim")
        d_ = data.get("codomain_dim")
        dom = np.array(data["domain"], dtype=float)
        im = np.array(data["images"], dtype=float)
        if dom.ndim == 1:
            dom = dom.reshape(-1, n or 1)
        if im.ndim == 1:
            im = im.reshape(-1, d_ or 1)
        return cls(dom, im, lin)


def pushforward(mu: DiscreteMeasure, fmap: AtomMap) -> DiscreteMeasure:
    """``T_# mu``: images of the support atoms, coincident images merged."""
    if fmap.domain_dim != mu.dim:
        raise DimMismatch(f"map acts on R^{fmap.domain_dim}, measure lives in R^{mu.dim}")
    images = fmap(mu.support())
    x, w = merge_atoms(images, mu.support_weights())
    return DiscreteMeasure(x, w / w.sum())


def mixture(mu: DiscreteMeasure, nu: DiscreteMeasure, t: float) -> DiscreteMeasure:
    """``t mu + (1 - t) nu`` with duplicate atoms merged."""
    if mu.dim != nu.dim:
        raise DimMismatch(f"cannot mix measures on R^{mu.dim} and R^{nu.dim}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"mixture parameter must lie in [0, 1], got {t}")
    x = np.vstack([mu.atoms, nu.atoms])
    w = np.concatenate([t * mu.weights, (1.0 - t) * nu.weights])
    keep = w > 0
    x, w = merge_atoms(x[keep], w[keep])
    return DiscreteMeasure(x, w / w.sum())


@dataclass(frozen=True, eq=False)
class Coupling:
    """Joint weights ``plan[i, j]`` on pairs ``(mu_atoms[i], nu_atoms[j])``."""

    mu_atoms: np.ndarray
    nu_atoms: np.ndarray
    plan: np.ndarray

    def __init__(self, mu_atoms, nu_atoms, plan, dim: int | None = None):
        x = _as_points(mu_atoms, dim)
        y = _as_points(nu_atoms, dim if dim is not None else x.shape[1])
        g = np.array(plan, dtype=float)
        if g.ndim != 2 or g.shape != (x.shape[0], y.shape[0]):
            raise InvalidCoupling(
                f"plan shape {g.shape} does not match {x.shape[0]} x {y.shape[0]} atoms"
            )
        if not np.all(np.isfinite(g)) or np.any(g < -SUPPORT_TOL):
            raise InvalidCoupling("plan entries must be finite and nonnegative")
        total = float(g.sum())
        if abs(total - 1.0) > COUPLING_TOL:
            raise InvalidCoupling(f"plan has total mass {total!r}, not 1")
        g = np.clip(g, 0.0, None)
        object.__setattr__(self, "mu_atoms", _frozen(x))
        object.__setattr__(self, "nu_atoms", _frozen(y))
        object.__setattr__(self, "plan", _frozen(g))

    @property
    def dim(self) -> int:
        return self.mu_atoms.shape[1]

    def mu_marginal(self) -> DiscreteMeasure:
        w = self.plan.sum(axis=1)
        return DiscreteMeasure(self.mu_atoms, w / w.sum())

    def nu_marginal(self) -> DiscreteMeasure:
        w = self.plan.sum(axis=0)
        return DiscreteMeasure(self.nu_atoms, w / w.sum())

    def has_marginals(self, mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float = COUPLING_TOL) -> bool:
        return self.mu_marginal().isclose(mu, tol) and self.nu_marginal().isclose(nu, tol)

    def support_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Index arrays ``(i, j)`` of pairs carrying mass above 1e-12."""
        return np.nonzero(self.plan > SUPPORT_TOL)

    def transformed(self, u) -> "Coupling":
        """``(U, U)_# gamma``."""
        u = np.asarray(u, dtype=float)
        return Coupling(self.mu_atoms @ u.T, self.nu_atoms @ u.T, self.plan)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "mu_atoms": self.mu_atoms.tolist(),
            "nu_atoms": self.nu_atoms.tolist(),
            "plan": self.plan.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Coupling":
        if not isinstance(data, dict):
            raise InvalidCoupling("coupling JSON must be an object")
        try:
            return cls(data["mu_atoms"], data["nu_atoms"], data["plan"], dim=data.get("dim"))
        except KeyError as exc:
            raise InvalidCoupling(f"coupling JSON missing key {exc}") from None


def product(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Coupling:
    """Independent coupling ``mu (x) nu``."""
    return Coupling(mu.atoms, nu.atoms, np.outer(mu.weights, nu.weights), dim=mu.dim)


def graph_coupling(mu: DiscreteMeasure, fmap: AtomMap) -> Coupling:
    """``(Id, T)_# mu``, supported on the graph of ``T`` over supp(mu)."""
    x = mu.support()
    w = mu.support_weights()
    return Coupling(x, fmap(x), np.diag(w / w.sum()))
