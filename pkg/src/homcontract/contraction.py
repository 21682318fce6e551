"""Matrix-measure contraction certificates and loop obstructions.

A region certificate is a sampled maximum of the matrix measure of the
frame linearization; it proves nothing between samples and says so.  The
loop machinery integrates the frame-aligned linearization entry around a
periodic one-parameter subgroup orbit, where it must average to zero, so
no such loop admits a uniformly negative measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.optimize
from scipy.stats import qmc

from . import smallmat
from .fields import HorizontalField, eval_coeff, linearize, rotate_field
from .spaces import Space, rotate_basis


def matrix_measure(P) -> float:
    """Logarithmic norm: largest eigenvalue of the symmetric part of P."""
    return smallmat.sym_eig_max(P).lambda_max


@dataclass(frozen=True)
class ContractionCertificate:
    """Sampled certificate of mu(dX) <= c over a region.

    Sampling cannot prove contraction between samples; the region string
    and sample count are recorded so density can be judged.
    """

    space_id: str
    field_id: str
    region: str
    rate_c: float
    mu_max: float
    argmax_index: int
    mu_argmax: np.ndarray = field(repr=False)
    samples_evaluated: int = 0
    verdict: str = "FAIL"
    slack: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    @property
    def label(self) -> str:
        return "nonexpansive" if self.rate_c == 0.0 else "contracting"

    def to_dict(self) -> dict:
        return {
            "space": self.space_id,
            "field": self.field_id,
            "region": self.region,
            "rate_c": self.rate_c,
            "mu_max": self.mu_max,
            "argmax_index": self.argmax_index,
            "argmax_state": np.asarray(self.mu_argmax).tolist(),
            "samples_evaluated": self.samples_evaluated,
            "verdict": self.verdict,
            "slack": self.slack,
            "certificate_type": "sampled",
            "label": self.label,
        }


def certify_region(F: HorizontalField, space: Space, samples: Sequence[np.ndarray],
                   c: float, region: str = "", t: float = 0.0,
                   step: float = 1e-5, richardson: bool = False,
                   slack: float = 1e-9,
                   collect: Optional[list] = None) -> ContractionCertificate:
    """Evaluate the matrix measure at every sample and compare against c.

    Deterministic: ties at the maximum resolve to the lowest sample index.
    ``slack`` absorbs finite-difference noise when the true measure sits
    exactly on the rate (region boundaries); it is recorded on the
    certificate.  ``collect``, if given, receives the per-sample measures.
    """
    mu_max = -np.inf
    arg = None
    arg_idx = -1
    count = 0
    for idx, g in enumerate(samples):
        space.check_group(g)
        mu = matrix_measure(linearize(F, space, g, t=t, step=step, richardson=richardson))
        if collect is not None:
            collect.append(mu)
        if mu > mu_max:
            mu_max, arg, arg_idx = mu, np.asarray(g, dtype=float), idx
        count += 1
    if count == 0:
        raise ValueError("no samples supplied")
    return ContractionCertificate(
        space_id=space.name,
        field_id=F.name,
        region=region,
        rate_c=float(c),
        mu_max=float(mu_max),
        argmax_index=arg_idx,
        mu_argmax=arg,
        samples_evaluated=count,
        verdict="PASS" if mu_max <= c + slack else "FAIL",
        slack=float(slack),
    )


def generator_box_samples(space: Space, lows, highs, count: int,
                          base=None, seed: int = 0) -> list[np.ndarray]:
    """Low-discrepancy samples exp-mapped from a box in m-coordinates."""
    lows = np.atleast_1d(np.asarray(lows, dtype=float))
    highs = np.atleast_1d(np.asarray(highs, dtype=float))
    m = space.dim_m
    if lows.shape != (m,) or highs.shape != (m,):
        raise ValueError("box bounds must match the m-dimension")
    # Halton is deterministic; the seed only relabels the certificate.
    pts = qmc.Halton(d=m, scramble=False, seed=seed).random(count)
    coords = lows + pts * (highs - lows)
    base = space.identity() if base is None else np.asarray(base, dtype=float)
    return [base @ space.algebra_exp(space.algebra_from_coords(x)) for x in coords]


def sphere_cap_grid(space: Space, max_angle: float, n_theta: int,
                    n_phi: int) -> list[np.ndarray]:
    """Grid over the geodesic cap of the given angular radius about o."""
    thetas = np.linspace(0.0, max_angle, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    B = space.dec.m_basis
    out = []
    for th in thetas:
        for ph in phis:
            A = th * (np.cos(ph) * B[0] + np.sin(ph) * B[1])
            out.append(space.algebra_exp(A))
    return out


@dataclass(frozen=True)
class BasisIndependenceReport:
    measures: np.ndarray
    max_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def basis_independence_check(F: HorizontalField, space: Space, g, trials: int = 10,
                             seed: int = 0, t: float = 0.0,
                             tol: float = 1e-7) -> BasisIndependenceReport:
    """Recompute the measure in random orthonormal bases of m.

    The measure is basis independent; the reported deviation is dominated
    by finite differencing.
    """
    rng = np.random.default_rng(seed)
    m = space.dim_m
    mus = [matrix_measure(linearize(F, space, g, t=t))]
    for _ in range(trials):
        Q, _ = np.linalg.qr(rng.standard_normal((m, m)))
        mus.append(
            matrix_measure(linearize(rotate_field(F, Q), rotate_basis(space, Q), g, t=t))
        )
    mus = np.asarray(mus)
    return BasisIndependenceReport(
        measures=mus, max_deviation=float(mus.max() - mus.min()), tol=tol
    )


def find_period(space: Space, A, t_max: float = 20.0,
                tol: float = 1e-8) -> Optional[float]:
    """Smallest T in (0, t_max] with exp(T A) back at the identity.

    Coarse scan with t_max/1e4 steps, refined by bounded minimization of
    the return distance.  None if the subgroup never returns.
    """
    A = np.asarray(A, dtype=float)
    if np.max(np.abs(A)) == 0.0:
        raise ValueError("zero generator has no period")
    n = 10_000
    dt = t_max / n
    I = np.eye(A.shape[0])
    E = smallmat.expm(dt * A)
    norms = np.empty(n)
    g = I
    for k in range(n):
        g = g @ E
        norms[k] = np.max(np.abs(g - I))

    def miss(T):
        return np.max(np.abs(smallmat.expm(T * A) - I))

    def slope(T):
        # derivative of half the squared Frobenius return distance; smooth
        # through the minimum, so bisection nails the kink of the distance
        E_T = smallmat.expm(T * A)
        return float(np.sum((E_T @ A) * (E_T - I)))

    armed = False  # the orbit must first leave the identity, else T -> 0 wins
    for k in range(n):
        if not armed:
            armed = norms[k] > 0.5
            continue
        left = norms[k - 1] if k > 0 else np.inf
        right = norms[k + 1] if k + 1 < n else np.inf
        if norms[k] < 0.5 and norms[k] <= left and norms[k] <= right:
            lo, hi = dt * k, dt * (k + 2)  # norms[k] is the distance at (k+1) dt
            if slope(lo) < 0.0 < slope(hi):
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    if slope(mid) < 0.0:
                        lo = mid
                    else:
                        hi = mid
            T = 0.5 * (lo + hi)
            if miss(T) <= tol:
                return float(T)
    return None


@dataclass(frozen=True)
class LoopReport:
    """Quadrature record of the frame-aligned linearization around a loop."""

    space_id: str
    field_id: str
    generator: np.ndarray = field(repr=False)
    base: np.ndarray = field(repr=False)
    period: float = 0.0
    times: np.ndarray = field(default=None, repr=False)
    values: np.ndarray = field(default=None, repr=False)
    integral: float = 0.0
    max_value: float = 0.0
    inconsistent_rate: Optional[float] = None

    @property
    def inconsistent(self) -> bool:
        return self.inconsistent_rate is not None

    def to_dict(self) -> dict:
        return {
            "space": self.space_id,
            "field": self.field_id,
            "generator": np.asarray(self.generator).tolist(),
            "base": np.asarray(self.base).tolist(),
            "period": self.period,
            "integral": self.integral,
            "max_f": self.max_value,
            "n_quad": int(len(self.times) - 1),
            "inconsistent_rate": self.inconsistent_rate,
            "verdict": "INCONSISTENT" if self.inconsistent else "OK",
        }


def _extend_to_orthonormal(c1: np.ndarray) -> np.ndarray:
    """Orthogonal matrix whose first column is the unit vector c1."""
    m = c1.shape[0]
    # QR of [c1 | I] always has full column span, whatever direction c1 points
    M = np.concatenate([c1[:, None], np.eye(m)], axis=1)
    Q, R = np.linalg.qr(M)
    if Q[:, 0] @ c1 < 0.0:
        Q = -Q
    return Q


def loop_obstruction_check(F: HorizontalField, space: Space, generator,
                           base=None, n_quad: int = 1024, c: Optional[float] = None,
                           t_max: float = 20.0) -> LoopReport:
    """Sample f(t), the first diagonal linearization entry, around the loop.

    The generator (given as an m-coordinate vector or algebra matrix) must
    produce a periodic one-parameter subgroup; the basis is rotated so the
    normalized generator comes first.  f is the derivative of a periodic
    coefficient, so its trapezoid integral over one period must vanish and
    its maximum cannot be uniformly negative.  If a claimed rate c < 0
    nevertheless dominates max f, the report is flagged INCONSISTENT.
    """
    gen = np.asarray(generator, dtype=float)
    if gen.ndim == 1:
        c1 = gen.copy()
    else:
        c1 = space.dec.coords_m(gen)
    norm = np.linalg.norm(c1)
    if norm == 0.0:
        raise ValueError("zero generator")
    c1 = c1 / norm
    A1 = space.algebra_from_coords(c1)
    period = find_period(space, A1, t_max=t_max)
    if period is None:
        raise ValueError("generator does not produce a periodic subgroup")

    Q = _extend_to_orthonormal(c1)
    space1 = rotate_basis(space, Q)
    F1 = rotate_field(F, Q)
    base = space.identity() if base is None else np.asarray(base, dtype=float)

    ts = np.linspace(0.0, period, n_quad + 1)
    fs = np.empty(n_quad + 1)
    for i, t in enumerate(ts):
        g = base @ space.algebra_exp(t * A1)
        fs[i] = linearize(F1, space1, g)[0, 0]
    integral = float(np.trapezoid(fs, ts))
    max_f = float(np.max(fs))
    inconsistent = c if (c is not None and c < 0.0 and max_f <= c) else None
    return LoopReport(
        space_id=space.name,
        field_id=F.name,
        generator=A1,
        base=base,
        period=float(period),
        times=ts,
        values=fs,
        integral=integral,
        max_value=max_f,
        inconsistent_rate=inconsistent,
    )
