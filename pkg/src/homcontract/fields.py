"""Vector fields as horizontal-lift coefficient maps on the group.

A field is specified by a coefficient function g -> R^m giving the
components in the left-invariant frame of the m-basis.  Frame-direction
derivatives are taken by central differences along g exp(t A_j), with an
optional Richardson step, and assemble into the m x m linearization used
by the matrix-measure machinery.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .spaces import Space


@dataclass(frozen=True)
class HorizontalField:
    """Vector field given by lift coefficients in the left-invariant frame.

    ``coeff`` maps (g, t) to an R^m coefficient vector and must accept
    stacked group elements of shape (..., d, d), returning (..., m).
    ``frame_derivative``, if given, supplies analytic frame derivatives
    (g, j, t) -> R^m and bypasses finite differencing entirely.
    """

    name: str
    space_name: str
    coeff: Callable[[np.ndarray, float], np.ndarray]
    time_varying: bool = False
    frame_derivative: Optional[Callable[[np.ndarray, int, float], np.ndarray]] = None


def eval_coeff(F: HorizontalField, g, t: float = 0.0, dim_m=None) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    c = np.asarray(F.coeff(g, t), dtype=float)
    if dim_m is not None and c.shape != g.shape[:-2] + (dim_m,):
        raise ValueError(f"field {F.name}: coefficient shape {c.shape}, "
                         f"expected {g.shape[:-2] + (dim_m,)}")
    if not np.all(np.isfinite(c)):
        raise ValueError(
            f"field {F.name}: non-finite coefficients at t={t}, g=\n{np.asarray(g)}"
        )
    return c


def lie_derivative(F: HorizontalField, space: Space, j: int, g, t: float = 0.0,
                   step: float = 1e-5, richardson: bool = False) -> np.ndarray:
    """Derivative of the coefficients along the j-th frame flow at g.

    Central difference of coeff(g exp(s A_j)) at s = 0; Richardson halves
    the step once and extrapolates.
    """
    if j >= space.dim_m:
        raise IndexError(f"frame index {j} out of range for dim {space.dim_m}")
    if F.frame_derivative is not None:
        d = np.asarray(F.frame_derivative(np.asarray(g, dtype=float), j, t), dtype=float)
        if not np.all(np.isfinite(d)):
            raise ValueError(f"field {F.name}: non-finite analytic derivative at g")
        return d

    def central(h):
        return (
            eval_coeff(F, space.frame_flow(g, j, h), t)
            - eval_coeff(F, space.frame_flow(g, j, -h), t)
        ) / (2.0 * h)

    d1 = central(step)
    if not richardson:
        return d1
    d2 = central(step / 2.0)
    return (4.0 * d2 - d1) / 3.0


def linearize(F: HorizontalField, space: Space, g, t: float = 0.0,
              step: float = 1e-5, richardson: bool = False) -> np.ndarray:
    """The m x m frame linearization at g.

    Column j is the frame derivative of the coefficients plus the
    connection correction sum_k coeff_k alpha[:, j, k].
    """
    m = space.dim_m
    P = np.empty((m, m))
    for j in range(m):
        P[:, j] = lie_derivative(F, space, j, g, t=t, step=step, richardson=richardson)
    c = eval_coeff(F, g, t, dim_m=m)
    return P + np.einsum("ijk,k->ij", space.alpha, c)


def covariant_apply(F: HorizontalField, space: Space, g, v, t: float = 0.0,
                    **fd_opts) -> np.ndarray:
    """Frame coordinates of the covariant derivative of F along v at g."""
    return linearize(F, space, g, t=t, **fd_opts) @ np.asarray(v, dtype=float)


@dataclass(frozen=True)
class CosetReport:
    max_gap: float
    tol: float
    pairs_checked: int

    @property
    def passed(self) -> bool:
        return self.max_gap <= self.tol


def coset_consistency_check(F: HorizontalField, space: Space, g, h_samples=None,
                            t: float = 0.0, tol: float = 1e-6) -> CosetReport:
    """Compare the linearization across coset representatives g and g h.

    For a genuine horizontal lift the matrices agree; the gap reported is
    the max-entry deviation over the sampled isotropy elements.
    """
    if h_samples is None:
        h_samples = space.h_samples()
    base = linearize(F, space, g, t=t)
    gap = 0.0
    count = 0
    for h in h_samples:
        other = linearize(F, space, np.asarray(g, dtype=float) @ h, t=t)
        gap = max(gap, float(np.max(np.abs(base - other))))
        count += 1
    return CosetReport(max_gap=gap, tol=tol, pairs_checked=count)


def rotate_field(F: HorizontalField, Q) -> HorizontalField:
    """Coefficients of the same field in a Q-rotated orthonormal m-basis."""
    Q = np.asarray(Q, dtype=float)

    def coeff(g, t):
        return np.asarray(F.coeff(g, t), dtype=float) @ Q

    deriv = None
    if F.frame_derivative is not None:
        # frame direction j of the rotated basis is sum_a Q[a, j] old frames;
        # only exact for linear-in-frame analytic derivatives, so skip it
        deriv = None
    return HorizontalField(
        name=F.name + "@rot",
        space_name=F.space_name,
        coeff=coeff,
        time_varying=F.time_varying,
        frame_derivative=deriv,
    )


# ---------------------------------------------------------------------------
# Built-in demo fields


def sphere_height_gradient(space: Space) -> HorizontalField:
    """Gradient ascent of the height function p -> o . p on the sphere."""
    o = space.base_point
    tangents = space.dec.m_basis @ o  # (m, 3)

    def coeff(R, t):
        p = R @ o
        grad = o - (p @ o)[..., None] * p
        frames = np.einsum("...ab,ib->...ia", R, tangents)
        return np.einsum("...ia,...a->...i", frames, grad)

    return HorizontalField("sphere-grad-height", space.name, coeff)


def sphere_nonequivariant(space: Space) -> HorizontalField:
    """Deliberately non-horizontal coefficients; fails the coset check."""

    def coeff(R, t):
        # x-coordinate of the moving point: a fine function on the sphere,
        # but constant coefficients in a frame that rotates under the
        # isotropy, so the linearization disagrees across coset reps.
        c = np.zeros(R.shape[:-2] + (space.dim_m,))
        c[..., 0] = R[..., 0, 2]
        return c

    return HorizontalField("sphere-noneq", space.name, coeff)


def constant_field(space: Space, u) -> HorizontalField:
    """Constant frame coefficients (state-independent input)."""
    u = np.asarray(u, dtype=float)
    if u.shape != (space.dim_m,):
        raise ValueError("input dimension does not match the space")

    def coeff(g, t):
        return np.broadcast_to(u, g.shape[:-2] + u.shape)

    label = ",".join(repr(float(x)) for x in u)
    return HorizontalField(f"constant[{label}]", space.name, coeff)


def so3_demo_schedule(space: Space) -> HorizontalField:
    """Time-varying open-loop input used by the attitude reachability demo."""

    def coeff(g, t):
        u = np.array([(5.0 - t) / 5.0, 1.0 - (t / 5.0) ** 2, np.sin(np.pi * t / 2.0)])
        return np.broadcast_to(u, g.shape[:-2] + (3,))

    return HorizontalField("so3-demo-schedule", space.name, coeff, time_varying=True)


def euclidean_linear(space: Space, M) -> HorizontalField:
    """Linear field x -> M x on flat space, read off the translation part."""
    M = np.asarray(M, dtype=float)
    n = space.embed_dim - 1
    if M.shape != (n, n):
        raise ValueError("matrix size does not match the space dimension")

    def coeff(g, t):
        x = g[..., :n, n]
        return x @ M.T

    return HorizontalField("euclidean-linear", space.name, coeff)


def circle_sine(space: Space) -> HorizontalField:
    """Coefficient sin(theta) on the circle; smooth and periodic."""

    def coeff(R, t):
        return R[..., 1:2, 0]

    return HorizontalField("circle-sin", space.name, coeff)


def tabulated_field(space: Space, path) -> HorizontalField:
    """Field interpolated from a CSV coefficient table.

    Header ``g00,...,g{d-1}{d-1},x1,...,xm``; each row is a flattened
    group element followed by its m coefficients.  Queries use the nearest
    tabulated point with a local-linear correction fitted on the d^2 + 1
    nearest neighbors.
    """
    d = space.embed_dim
    m = space.dim_m
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    if len(header) != d * d + m:
        raise ValueError(f"expected {d * d + m} columns, found {len(header)}")
    data = np.asarray(rows[1:], dtype=float)
    points = data[:, : d * d]
    values = data[:, d * d:]
    k = min(len(points), d * d + 1)

    def query_one(flat):
        dist = np.linalg.norm(points - flat, axis=1)
        idx = np.argsort(dist, kind="stable")[:k]
        base = idx[0]
        if dist[base] < 1e-12 or k == 1:
            return values[base]
        A = np.hstack([np.ones((k, 1)), points[idx] - flat])
        beta, _, _, _ = np.linalg.lstsq(A, values[idx], rcond=None)
        return beta[0]

    def coeff(g, t):
        flat = g.reshape(g.shape[:-2] + (d * d,))
        if flat.ndim == 1:
            return query_one(flat)
        out = np.empty(flat.shape[:-1] + (m,))
        for i in np.ndindex(flat.shape[:-1]):
            out[i] = query_one(flat[i])
        return out

    return HorizontalField(f"tabulated[{path}]", space.name, coeff)


def builtin_field(space: Space, name: str) -> HorizontalField:
    """Resolve a demo field by CLI name, e.g. ``constant:0,0,1``."""
    base, _, arg = name.partition(":")
    if base == "sphere-grad-height":
        return sphere_height_gradient(space)
    if base == "sphere-noneq":
        return sphere_nonequivariant(space)
    if base == "constant":
        return constant_field(space, [float(x) for x in arg.split(",")])
    if base == "so3-demo-schedule":
        return so3_demo_schedule(space)
    if base == "euclidean-linear":
        vals = [float(x) for x in arg.split(",")]
        n = space.embed_dim - 1
        return euclidean_linear(space, np.asarray(vals).reshape(n, n))
    if base == "circle-sin":
        return circle_sine(space)
    raise KeyError(f"unknown field {name!r}")
