"""Acceptance suite: the twelve exit criteria of the library.

Each ``check_*`` function runs one criterion end to end and returns an
``Outcome``; the pytest wrappers assert on it and ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the session. Running this file
directly prints the same lines without pytest.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import null_space

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import mercedes_benz, random_frame, random_orthogonal, random_tight  # noqa: E402
from probframes.duality import (  # noqa: E402
    check_dual,
    find_dual_coupling,
    perturbation_certificate,
    psi_h_dual,
    pythagorean_decomposition,
    trace_identity,
)
from probframes.errors import KTooSmall  # noqa: E402
from probframes.frame import (  # noqa: E402
    bessel_to_tight,
    canonical_dual,
    frame_bounds,
    frame_operator,
)
from probframes.measure import AtomMap, Coupling, DiscreteMeasure, graph_coupling, pushforward  # noqa: E402
from probframes.potential import (  # noqa: E402
    finite_canonical_dual,
    frame_potential,
    is_canonical_dual,
    pdfp,
    pdfp_2p,
    pdfp_pushforward,
)
from probframes.transport import hyperplane_projection_distance  # noqa: E402

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, "Outcome"] = {}

# certificates accepted by criteria 1-3, re-examined by criterion 4
ACCEPTED: dict[int, list[tuple[int, Coupling]]] = {}


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool = True
    detail: str = ""
    failures: list[str] = field(default_factory=list)

    def require(self, ok: bool, message: str) -> None:
        if not ok:
            self.passed = False
            if len(self.failures) < 5:
                self.failures.append(message)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = self.detail if self.passed else "; ".join(self.failures) or self.detail
        return f"[{status}] criterion {self.number:2d}: {self.title} ({extra})"


def _record(outcome: Outcome) -> Outcome:
    RESULTS[outcome.number] = outcome
    return outcome


def _gaussian_frame(rng) -> DiscreteMeasure:
    """Uniform weights, n in 1..5, m in n..10, standard normal atoms, lambda_min > 1e-6."""
    return random_frame(rng, min_eig=1e-6)


def check_1() -> Outcome:
    out = Outcome(1, "canonical pushforward dual attains PDFP = n")
    rng = np.random.default_rng(101)
    certs = []
    worst = 0.0
    start = time.perf_counter()
    for trial in range(500):
        mu = _gaussian_frame(rng)
        fmap, _ = canonical_dual(mu)
        report = pdfp_pushforward(mu, fmap)
        err = abs(report.value - mu.dim)
        worst = max(worst, err)
        out.require(err <= 1e-8, f"trial {trial}: |value - n| = {err:.2e}")
        out.require(report.equality_case, f"trial {trial}: equality not flagged")
        certs.append((mu.dim, graph_coupling(mu, fmap)))
    elapsed = time.perf_counter() - start
    out.require(elapsed < 5.0, f"runtime {elapsed:.2f}s >= 5s")
    ACCEPTED[1] = certs
    out.detail = f"500 frames, max |value - n| = {worst:.1e}, {elapsed:.2f}s"
    return _record(out)


def check_2() -> Outcome:
    out = Outcome(2, "psi_h pushforward duals satisfy PDFP >= n")
    rng = np.random.default_rng(202)
    certs = []
    strict_cases = 0
    min_gap = np.inf
    start = time.perf_counter()
    for trial in range(500):
        mu = _gaussian_frame(rng)
        x = mu.support()
        h = AtomMap(x, 0.5 * rng.standard_normal(x.shape))
        psi = psi_h_dual(mu, h)
        report = pdfp_pushforward(mu, psi)
        n = mu.dim
        out.require(report.value >= n - 1e-8, f"trial {trial}: value {report.value!r} < n - 1e-8")
        s_inv = np.linalg.inv(np.asarray(frame_operator(mu)))
        dist = float(np.max(np.linalg.norm(psi(x) - x @ s_inv, axis=1)))
        if dist > 1e-3:
            strict_cases += 1
            min_gap = min(min_gap, report.value - n)
            out.require(report.value > n + 1e-6, f"trial {trial}: not strict, gap {report.value - n:.2e}")
        certs.append((n, graph_coupling(mu, psi)))
    elapsed = time.perf_counter() - start
    out.require(elapsed < 10.0, f"runtime {elapsed:.2f}s >= 10s")
    ACCEPTED[2] = certs
    out.detail = f"500 pairs, {strict_cases} strict cases, min strict gap {min_gap:.1e}, {elapsed:.2f}s"
    return _record(out)


def _perturbed_dual(rng, mu: DiscreteMeasure, kind: str) -> DiscreteMeasure:
    """Perturb the canonical dual of mu.

    ``split`` replaces each canonical atom y by y + d and y - d at half the
    weight (always a dual, never a pushforward of mu when d != 0); ``jitter``
    moves every atom independently (usually destroys duality); ``exact``
    leaves the canonical dual untouched.
    """
    _, canon = canonical_dual(mu)
    y, w = canon.support(), canon.support_weights()
    scale = float(np.max(np.linalg.norm(y, axis=1)))
    if kind == "exact":
        return canon
    if kind == "split":
        d = scale * rng.uniform(0.05, 0.5) * rng.standard_normal(y.shape)
        return DiscreteMeasure(np.vstack([y + d, y - d]), np.concatenate([w, w]) / 2)
    d = scale * 0.05 * rng.standard_normal(y.shape)
    return DiscreteMeasure(y + d, w)


def check_3() -> Outcome:
    out = Outcome(3, "general duals satisfy PDFP >= nA/B, equality only for tight + canonical")
    rng = np.random.default_rng(303)
    kinds = ["split", "split", "split", "jitter", "exact"]
    certs = []
    accepted = discarded = equalities = 0
    start = time.perf_counter()
    while accepted < 200:
        n = int(rng.integers(1, 5))
        if rng.uniform() < 0.4:
            mu = random_tight(rng, n, copies=int(rng.integers(1, 3)))
        else:
            mu = random_frame(rng, n=n, m=int(rng.integers(n, 7)))
        nu = _perturbed_dual(rng, mu, kinds[accepted % len(kinds)])
        cert = find_dual_coupling(mu, nu)
        if cert is None:
            discarded += 1
            continue
        accepted += 1
        certs.append((mu.dim, cert.coupling))
        report = pdfp(mu, nu)
        lb = report.lower_bound
        out.require(report.value >= lb - 1e-8, f"pair {accepted}: value {report.value!r} < nA/B - 1e-8")
        attained = report.value - lb <= 1e-8
        structural = frame_bounds(mu).tight and is_canonical_dual(mu, nu)
        if attained:
            equalities += 1
            out.require(structural, f"pair {accepted}: bound attained without tight + canonical")
        out.require(attained == structural, f"pair {accepted}: tight + canonical but gap {report.gap:.2e}")
    elapsed = time.perf_counter() - start
    out.require(elapsed < 60.0, f"runtime {elapsed:.2f}s >= 60s")
    ACCEPTED[3] = certs
    out.detail = (
        f"200 verified duals ({discarded} infeasible discarded), {equalities} equality cases, {elapsed:.2f}s"
    )
    return _record(out)


def check_4() -> Outcome:
    out = Outcome(4, "trace identity on every accepted certificate")
    for number in (1, 2, 3):
        if number not in ACCEPTED:
            globals()[f"check_{number}"]()
    total = 0
    worst = 0.0
    for number, certs in sorted(ACCEPTED.items()):
        for idx, (n, gamma) in enumerate(certs):
            cert = check_dual(gamma)
            ident = trace_identity(gamma)
            err = abs(cert.trace_value - n)
            worst = max(worst, err)
            out.require(err <= 1e-6, f"criterion {number} #{idx}: |trace - n| = {err:.2e}")
            out.require(ident.esssup >= n - 1e-6, f"criterion {number} #{idx}: esssup {ident.esssup!r} < n")
            total += 1
    out.detail = f"{total} certificates, max |trace - n| = {worst:.1e}"
    return _record(out)


def check_5() -> Outcome:
    out = Outcome(5, "Bessel-to-tight completion has frame operator kB Id")
    rng = np.random.default_rng(505)
    worst = 0.0
    for trial in range(200):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, 9))  # includes rank-deficient Bessel measures
        mu = DiscreteMeasure(rng.standard_normal((m, n)), rng.dirichlet(np.ones(m)))
        big_b = frame_bounds(mu).upper
        for k in (0.5, 0.75, 1.0, 2.0):
            s = np.asarray(frame_operator(bessel_to_tight(mu, k)))
            err = float(np.max(np.abs(s - k * big_b * np.eye(n))))
            worst = max(worst, err)
            out.require(err <= 1e-8, f"trial {trial}, k={k}: error {err:.2e}")
    try:
        bessel_to_tight(DiscreteMeasure([[1.0, 0.0]]), 0.4)
        out.require(False, "k = 0.4 accepted")
    except KTooSmall:
        pass
    out.detail = f"800 completions, max error {worst:.1e}, k=0.4 rejected"
    return _record(out)


def check_6() -> Outcome:
    out = Outcome(6, "psi of a psi_h dual reproduces it")
    rng = np.random.default_rng(606)
    worst = 0.0
    for trial in range(200):
        mu = _gaussian_frame(rng)
        x = mu.support()
        psi = psi_h_dual(mu, AtomMap(x, 0.5 * rng.standard_normal(x.shape)))
        again = psi_h_dual(mu, psi)
        err = float(np.max(np.abs(again(x) - psi(x))))
        worst = max(worst, err)
        out.require(err <= 1e-8, f"trial {trial}: error {err:.2e}")
    out.detail = f"200 pairs, max error {worst:.1e}"
    return _record(out)


def check_7() -> Outcome:
    out = Outcome(7, "Pythagorean energy split of reconstruction coefficients")
    rng = np.random.default_rng(707)
    worst = 0.0
    for trial in range(500):
        mu = _gaussian_frame(rng)
        f = rng.standard_normal(mu.dim)
        s_inv = np.linalg.inv(np.asarray(frame_operator(mu)))
        canonical = mu.atoms @ s_inv @ f
        # kernel of the synthesis map omega -> sum w_i omega_i x_i
        kernel = null_space((mu.atoms * mu.weights[:, None]).T)
        omega = canonical + kernel @ rng.standard_normal(kernel.shape[1]) if kernel.size else canonical
        split = pythagorean_decomposition(mu, f, omega)
        err = abs(split.energy - split.canonical_energy - split.residual_energy)
        worst = max(worst, err)
        out.require(err <= 1e-8, f"trial {trial}: error {err:.2e}")
    example = pythagorean_decomposition(DiscreteMeasure([[1.0], [-1.0]]), [1.0], [3.0, 1.0])
    out.require(tuple(example) == (5.0, 1.0, 4.0), f"worked example gave {tuple(example)}")
    out.detail = f"500 triples, max error {worst:.1e}, worked example 5 = 1 + 4 exact"
    return _record(out)


def check_8() -> Outcome:
    out = Outcome(8, "hyperplane projection identity W_p^p = moment")
    rng = np.random.default_rng(808)
    worst = 0.0
    start = time.perf_counter()
    for trial in range(200):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 9))
        mu = DiscreteMeasure(rng.standard_normal((m, n)), rng.dirichlet(np.ones(m)))
        x = rng.standard_normal(n)
        x /= np.linalg.norm(x)
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        res = hyperplane_projection_distance(mu, x, p)
        err = abs(res.wp_p - res.moment)
        worst = max(worst, err)
        out.require(err <= 1e-7, f"trial {trial}: error {err:.2e}")
    elapsed = time.perf_counter() - start
    out.require(elapsed < 60.0, f"runtime {elapsed:.2f}s >= 60s")
    out.detail = f"200 cases, max error {worst:.1e}, {elapsed:.2f}s"
    return _record(out)


def check_9() -> Outcome:
    out = Outcome(9, "perturbation certificate brackets the frame bounds of eta")
    rng = np.random.default_rng(909)
    done = declined = 0
    while done < 200:
        mu = _gaussian_frame(rng)
        x, w = mu.support(), mu.support_weights()
        fmap = psi_h_dual(mu, AtomMap(x, 0.3 * rng.standard_normal(x.shape))) if done % 2 else canonical_dual(mu)[0]
        eps = 10.0 ** rng.uniform(-4, -1)
        if done % 3 == 0:
            # split every atom of mu into two nearby atoms
            z = np.vstack([x + eps * rng.standard_normal(x.shape), x + eps * rng.standard_normal(x.shape)])
            plan = np.hstack([np.diag(w / 2), np.diag(w / 2)])
        else:
            z = x + eps * rng.standard_normal(x.shape)
            plan = np.diag(w)
        eta = DiscreteMeasure(z, plan.sum(axis=0))
        cert = perturbation_certificate(mu, fmap, eta, Coupling(x, z, plan))
        if not cert.certified:
            declined += 1
            continue
        done += 1
        lam = np.linalg.eigvalsh(np.asarray(frame_operator(eta)))
        out.require(cert.lower_bound <= lam[0] + 1e-8, f"case {done}: lower {cert.lower_bound!r} > {lam[0]!r}")
        out.require(lam[-1] <= cert.upper_bound + 1e-8, f"case {done}: upper {cert.upper_bound!r} < {lam[-1]!r}")
    out.detail = f"200 certified perturbations ({declined} with kappa >= 1 skipped)"
    return _record(out)


def check_10() -> Outcome:
    out = Outcome(10, "explicit one-dimensional examples")
    rng = np.random.default_rng(1010)
    d1 = DiscreteMeasure([[1.0]])
    half = DiscreteMeasure([[0.5], [1.5]])
    out.require(find_dual_coupling(d1, half) is not None, "half/three-halves not a dual of delta_1")
    value = pdfp(d1, half).value
    out.require(abs(value - 1.25) <= 1e-12, f"PDFP {value!r} != 5/4")
    out.require(find_dual_coupling(d1, DiscreteMeasure([[2.0]])) is None, "delta_2 accepted as dual of delta_1")
    for trial in range(20):
        z = rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 5.0)
        k = int(rng.integers(1, 6))
        y = rng.standard_normal(k) * 2
        v = rng.dirichlet(np.ones(k))
        y += 1.0 / z - v @ y  # shift to mean 1/z
        out.require(
            find_dual_coupling(DiscreteMeasure([[z]]), DiscreteMeasure(y[:, None], v)) is not None,
            f"mean-1/z measure #{trial} rejected",
        )
        offset = rng.choice([-1.0, 1.0]) * rng.uniform(0.1, 2.0)
        out.require(
            find_dual_coupling(DiscreteMeasure([[z]]), DiscreteMeasure((y + offset)[:, None], v)) is None,
            f"measure #{trial} with mean 1/z + {offset:.3f} accepted",
        )
    out.detail = "PDFP(delta_1, nu) = 5/4, 20 mean-1/z duals found, 20 other means and delta_2 infeasible"
    return _record(out)


def check_11() -> Outcome:
    out = Outcome(11, "2p potentials strictly exceed their bound for n >= 2")
    rng = np.random.default_rng(1111)
    min_gap = np.inf
    for trial in range(100):
        n = int(rng.integers(2, 6))
        if trial % 4 == 0:
            mu = random_tight(rng, n, copies=2)
        else:
            mu = random_frame(rng, n=n, m=int(rng.integers(n, 11)))
        if trial % 2:
            x = mu.support()
            fmap = psi_h_dual(mu, AtomMap(x, 0.5 * rng.standard_normal(x.shape)))
        else:
            fmap, _ = canonical_dual(mu)
        cert = check_dual(graph_coupling(mu, fmap))
        out.require(cert.valid, f"trial {trial}: dual not verified")
        nu = pushforward(mu, fmap)
        for p in (1.5, 2.0):
            report = pdfp_2p(mu, nu, p)
            b = frame_bounds(mu)
            bound = n**p * (b.lower / b.upper) ** p
            min_gap = min(min_gap, report.value - bound)
            out.require(report.value > bound + 1e-10, f"trial {trial}, p={p}: gap {report.value - bound:.2e}")
            out.require(not report.equality_case, f"trial {trial}, p={p}: equality flagged")
    for z in (0.5, -1.7, 3.0):
        for p in (1.5, 2.0):
            for mu, nu in (
                (DiscreteMeasure([[z]]), DiscreteMeasure([[1 / z]])),
                (DiscreteMeasure([[z], [-z]]), DiscreteMeasure([[1 / z], [-1 / z]])),
            ):
                report = pdfp_2p(mu, nu, p)
                out.require(abs(report.gap) <= 1e-10, f"z={z}, p={p}: exception gap {report.gap:.2e}")
                out.require(report.equality_case, f"z={z}, p={p}: exception not flagged")
    out.detail = f"200 strict checks, min gap {min_gap:.2e}; delta_z and +-z exceptions attain equality"
    return _record(out)


def _unit_rows(a: np.ndarray) -> np.ndarray:
    return a / np.linalg.norm(a, axis=1, keepdims=True)


def check_12() -> Outcome:
    out = Outcome(12, "finite-frame bridge and Benedetto-Fickus bound")
    rng = np.random.default_rng(1212)
    worst = 0.0
    for trial in range(100):
        n = int(rng.integers(1, 5))
        big_n = int(rng.integers(n, 9))
        f = rng.standard_normal((big_n, n))
        if np.linalg.eigvalsh(f.T @ f)[0] <= 1e-6:
            f = np.vstack([np.eye(n), f[n:]])
        g = finite_canonical_dual(f)
        value = big_n**2 * pdfp(DiscreteMeasure(f), DiscreteMeasure(g)).value
        worst = max(worst, abs(value - n))
        out.require(abs(value - n) <= 1e-7, f"bridge trial {trial}: N^2 PDFP = {value!r}, n = {n}")
    tight_hits = 0
    for trial in range(500):
        n = int(rng.integers(1, 5))
        if trial % 5 == 0:
            f = np.vstack([random_orthogonal(rng, n) for _ in range(int(rng.integers(1, 4)))])
        else:
            f = _unit_rows(rng.standard_normal((int(rng.integers(n, 9)), n)))
        big_n = f.shape[0]
        fp = frame_potential(f)
        bound = big_n**2 / n
        out.require(fp >= bound - 1e-9 * bound, f"BF trial {trial}: FP {fp!r} < N^2/n {bound!r}")
        attained = fp - bound <= 1e-8 * bound
        tight = frame_bounds(DiscreteMeasure(f)).tight
        tight_hits += tight
        out.require(attained == tight, f"BF trial {trial}: attained={attained}, tight={tight}")
    mb = mercedes_benz()
    fp_mb = frame_potential(mb)
    out.require(abs(fp_mb - 4.5) <= 1e-12, f"Mercedes-Benz FP {fp_mb!r}")
    pfp_mb = pdfp(DiscreteMeasure(mb), DiscreteMeasure(mb)).value
    out.require(abs(pfp_mb - 0.5) <= 1e-12, f"Mercedes-Benz PFP {pfp_mb!r}")
    out.detail = (
        f"100 bridges (max err {worst:.1e}), 500 unit-norm frames ({tight_hits} tight), "
        f"Mercedes-Benz FP = {fp_mb!r}"
    )
    return _record(out)


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10, check_11, check_12]


def _assert(outcome: Outcome) -> None:
    print(outcome.line())
    assert outcome.passed, outcome.line()


def test_criterion_01_canonical_pushforward_equality():
    _assert(check_1())


def test_criterion_02_pushforward_lower_bound():
    _assert(check_2())


def test_criterion_03_general_dual_lower_bound():
    _assert(check_3())


def test_criterion_04_trace_identity():
    _assert(check_4())


def test_criterion_05_bessel_to_tight():
    _assert(check_5())


def test_criterion_06_psi_idempotence():
    _assert(check_6())


def test_criterion_07_pythagorean_split():
    _assert(check_7())


def test_criterion_08_hyperplane_identity():
    _assert(check_8())


def test_criterion_09_perturbation_certificate():
    _assert(check_9())


def test_criterion_10_explicit_examples():
    _assert(check_10())


def test_criterion_11_2p_strictness():
    _assert(check_11())


def test_criterion_12_finite_frame_bridge():
    _assert(check_12())


if __name__ == "__main__":
    failed = 0
    for check in CHECKS:
        outcome = check()
        print(outcome.line(), flush=True)
        failed += not outcome.passed
    sys.exit(1 if failed else 0)
