"""Invariant Levi-Civita connection data in an orthonormal m-basis.

The connection is encoded by a constant bilinear map alpha on m,
alpha(A_j, A_k) = alpha[i, j, k] A_i, split as half the projected bracket
plus a metric correction term U.  The tensors are computed once per space
and cached on the space descriptor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .liealg import ReductiveDecomposition, bracket


def _bracket_m_coords(dec: ReductiveDecomposition) -> np.ndarray:
    """bm[j, k, :] = m-coordinates of the m-component of [A_j, A_k]."""
    m = dec.dim_m
    bm = np.zeros((m, m, m))
    for j in range(m):
        for k in range(j + 1, m):
            c = dec.coords_m(bracket(dec.m_basis[j], dec.m_basis[k]))
            bm[j, k] = c
            bm[k, j] = -c
    return bm


def compute_U(dec: ReductiveDecomposition) -> np.ndarray:
    """Metric correction term of the invariant Levi-Civita connection.

    U[i, j, k] is the i-th coordinate of U(A_j, A_k); symmetric in (j, k).
    """
    bm = _bracket_m_coords(dec)
    # <[A_j, A_i]_m, A_k> = bm[j, i, k];  <A_j, [A_k, A_i]_m> = bm[k, i, j]
    return 0.5 * (np.einsum("jik->ijk", bm) + np.einsum("kij->ijk", bm))


def compute_alpha(dec: ReductiveDecomposition) -> np.ndarray:
    """Full connection tensor: half projected bracket plus U."""
    bm = _bracket_m_coords(dec)
    return 0.5 * np.einsum("jki->ijk", bm) + compute_U(dec)


@dataclass(frozen=True)
class SpaceClassification:
    is_symmetric: bool
    is_naturally_reductive: bool
    max_u_norm: float
    max_mm_leak: float

    def to_dict(self) -> dict:
        return {
            "symmetric": self.is_symmetric,
            "naturally_reductive": self.is_naturally_reductive,
            "max_u_norm": self.max_u_norm,
            "max_mm_leak": self.max_mm_leak,
        }


def classify(dec: ReductiveDecomposition, tol: float = 1e-10) -> SpaceClassification:
    """Flag the space as symmetric / naturally reductive / generic.

    Symmetric: every bracket of m-basis pairs falls back into h.
    Naturally reductive: the U term vanishes.  Violating magnitudes are
    reported so borderline cases can be judged by the caller.
    """
    bm = _bracket_m_coords(dec)
    mm_leak = float(np.max(np.linalg.norm(bm, axis=-1))) if bm.size else 0.0
    u_norm = float(np.max(np.abs(compute_U(dec)))) if bm.size else 0.0
    return SpaceClassification(
        is_symmetric=mm_leak <= tol,
        is_naturally_reductive=u_norm <= tol,
        max_u_norm=u_norm,
        max_mm_leak=mm_leak,
    )


def check_alpha_invariants(dec: ReductiveDecomposition, alpha: np.ndarray,
                           tol: float = 1e-10) -> None:
    """Raise if the torsion or self-orthogonality identities fail.

    alpha[i, j, k] - alpha[i, k, j] must reproduce the projected bracket,
    and alpha(A_j, A_k) must be orthogonal to A_j for every j, k.
    """
    bm = _bracket_m_coords(dec)
    torsion = alpha - np.einsum("ikj->ijk", alpha) - np.einsum("jki->ijk", bm)
    if np.max(np.abs(torsion)) > tol:
        raise ValueError("connection tensor violates the torsion identity")
    m = dec.dim_m
    self_pair = np.array([[alpha[j, j, k] for k in range(m)] for j in range(m)])
    if self_pair.size and np.max(np.abs(self_pair)) > tol:
        raise ValueError("connection tensor violates self-orthogonality")
