"""Random generators shared by the test modules."""

import numpy as np

from probframes import DiscreteMeasure, frame_operator
from probframes.measure import AtomMap


def random_frame(rng, n=None, m=None, min_eig=1e-6, dirichlet=False):
    """Random frame with ``lambda_min(S_mu) > min_eig`` (rejection sampling)."""
    if n is not None and m is not None and m < n:
        raise ValueError("fewer atoms than dimensions never span")
    while True:
        nn = n if n is not None else int(rng.integers(1, 6))
        mm = m if m is not None else int(rng.integers(nn, 11))
        atoms = rng.standard_normal((mm, nn))
        weights = rng.dirichlet(np.ones(mm)) if dirichlet else None
        mu = DiscreteMeasure(atoms, weights)
        if np.linalg.eigvalsh(np.asarray(frame_operator(mu)))[0] > min_eig:
            return mu


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_tight(rng, n, copies=2):
    """Uniform union of rotated orthonormal bases: tight with bound 1/n."""
    atoms = np.vstack([random_orthogonal(rng, n) for _ in range(copies)])
    return DiscreteMeasure(atoms)


def random_h(rng, mu, scale=0.5):
    x = mu.support()
    return AtomMap(x, scale * rng.standard_normal(x.shape))


def random_linear_h(rng, mu, scale=0.5):
    return AtomMap.from_linear(scale * rng.standard_normal((mu.dim, mu.dim)), mu.support())


def mercedes_benz():
    angles = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    return np.column_stack([np.cos(angles), np.sin(angles)])
