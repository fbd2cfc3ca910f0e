"""Probabilistic frames on R^n as finitely supported probability measures."""

from .duality import (
    DualCertificate,
    check_dual,
    dense_subset_check,
    find_dual_coupling,
    perturbation_certificate,
    psi_h_dual,
    pythagorean_decomposition,
    trace_equality,
    trace_identity,
    trace_p_bound,
)
from .errors import ProbFrameError
from .frame import (
    FrameBounds,
    bessel_to_tight,
    canonical_dual,
    finite_frame_potential,
    frame_bounds,
    frame_operator,
    is_frame,
)
from .linalg import SymMatrix, eigen
from .measure import (
    AtomMap,
    Coupling,
    DiscreteMeasure,
    graph_coupling,
    mixture,
    product,
    pushforward,
    second_moment,
)
from .potential import (
    PotentialReport,
    esssup_potential,
    pdfp,
    pdfp_2p,
    pdfp_pushforward,
)
from .transport import TransportPlan, hyperplane_projection_distance, wasserstein

__all__ = [
    "AtomMap",
    "Coupling",
    "DiscreteMeasure",
    "DualCertificate",
    "FrameBounds",
    "PotentialReport",
    "ProbFrameError",
    "SymMatrix",
    "TransportPlan",
    "bessel_to_tight",
    "canonical_dual",
    "check_dual",
    "dense_subset_check",
    "eigen",
    "esssup_potential",
    "finite_frame_potential",
    "find_dual_coupling",
    "frame_bounds",
    "frame_operator",
    "graph_coupling",
    "hyperplane_projection_distance",
    "is_frame",
    "mixture",
    "pdfp",
    "pdfp_2p",
    "pdfp_pushforward",
    "perturbation_certificate",
    "product",
    "psi_h_dual",
    "pushforward",
    "pythagorean_decomposition",
    "second_moment",
    "trace_equality",
    "trace_identity",
    "trace_p_bound",
    "wasserstein",
]
