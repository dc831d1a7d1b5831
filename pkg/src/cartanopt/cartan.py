"""Cartan factorization of 4x4 and 8x8 unitaries on polarization + path.

A two-qubit unitary splits as U = K1 . A . K2 where K1, K2 are local
(one 2x2 gate per degree-of-freedom slot) and A is generated by the
Cartan subalgebra.  Both labeling conventions reduce to one cosine-sine
decomposition after a basis permutation; the fixed unit factors that
turn the CSD central block into the convention's canonical central form
are absorbed into the returned gates, so the central angles are all
that remains of A.  The 8x8 entry point performs one CSD level at the
4+4 spatial split and leaves its 4x4 blocks for recursive treatment.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .dof import DofConvention
from .lie import SX
from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    _as_square,
    _cosine_sine,
    is_unitary,
    unitarity_residual,
)

# PS basis order interleaves polarization-major; this permutation
# rewrites it as spatial-major so the K-factors become block-diagonal.
_PS_TO_BLOCK = [0, 2, 1, 3]
# SP basis order is already spatial-major; swapping the second mode's
# polarization pair aligns the central coupling with the CSD layout.
_SP_TO_BLOCK = [0, 1, 3, 2]

_D = np.diag([-1.0 + 0j, 1.0])


@dataclasses.dataclass(frozen=True)
class CartanFactors:
    """U = e^{i global_phase} . (L1, L2 embedded) . A(alpha, beta) . (R1, R2 embedded)."""

    convention: DofConvention
    left_gates: tuple[np.ndarray, np.ndarray]
    right_gates: tuple[np.ndarray, np.ndarray]
    alpha: float
    beta: float
    global_phase: float = 0.0

    @property
    def theta1(self) -> float:
        return self.alpha + self.beta

    @property
    def theta2(self) -> float:
        return self.alpha - self.beta


@dataclasses.dataclass(frozen=True)
class RecursiveFactors:
    """One CSD level of an 8x8 unitary at the 4+4 spatial partition.

    U = e^{i global_phase} . blkdiag(left_blocks) . CS(angles) . blkdiag(right_blocks)

    with CS(angles) = [[C, S], [-S, C]], C = diag(cos), S = diag(sin).
    Angle k couples basis position k with position k+4, i.e. the same
    polarization component of the paired spatial modes.
    """

    left_blocks: tuple[np.ndarray, np.ndarray]
    right_blocks: tuple[np.ndarray, np.ndarray]
    angles: tuple[float, float, float, float]
    global_phase: float = 0.0


def central_a(alpha: float, beta: float, convention) -> np.ndarray:
    """Closed-form central factor A for the given convention's basis order.

    Both conventions: theta1 = alpha + beta, theta2 = alpha - beta.
    PS couples the two spatial amplitudes within each polarization;
    SP couples opposite polarizations across the two spatial modes.
    """
    conv = DofConvention(convention)
    t1, t2 = alpha + beta, alpha - beta
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    if conv is DofConvention.PS:
        return np.array(
            [
                [c1, 1j * s1, 0, 0],
                [1j * s1, c1, 0, 0],
                [0, 0, c2, 1j * s2],
                [0, 0, 1j * s2, c2],
            ]
        )
    return np.array(
        [
            [c1, 0, 0, s1],
            [0, c2, -s2, 0],
            [0, s2, c2, 0],
            [-s1, 0, 0, c1],
        ],
        dtype=complex,
    )


def _embed_pair(g1: np.ndarray, g2: np.ndarray, conv: DofConvention) -> np.ndarray:
    """Two 2x2 gates as a 4x4 in the convention's basis order.

    In SP order the gates are literal diagonal blocks; in PS order the
    first gate sits on index pair (0, 2) and the second on (1, 3).
    """
    M = np.zeros((4, 4), dtype=complex)
    if conv is DofConvention.PS:
        M[np.ix_((0, 2), (0, 2))] = g1
        M[np.ix_((1, 3), (1, 3))] = g2
    else:
        M[:2, :2] = g1
        M[2:, 2:] = g2
    return M


def decompose(U, convention, tol: ToleranceConfig = DEFAULT_TOL) -> CartanFactors:
    """Cartan factorization of a 4x4 unitary.

    Deterministic: the CSD gauge is pinned, so identical inputs give
    identical factors.  Central angles satisfy theta1 >= theta2 >= 0.
    """
    conv = DofConvention(convention)
    U = _as_square(U)
    if U.shape != (4, 4):
        raise ValueError(f"decompose expects a 4x4 matrix, got {U.shape}")
    if not is_unitary(U, tol):
        raise ValueError(
            f"decompose requires a unitary input (residual {unitarity_residual(U):.3e})"
        )
    perm = _PS_TO_BLOCK if conv is DofConvention.PS else _SP_TO_BLOCK
    Uq = U[np.ix_(perm, perm)]
    if (
        np.abs(Uq[:2, 2:]).max() <= tol.angle_tol
        and np.abs(Uq[2:, :2]).max() <= tol.angle_tol
    ):
        # already local: both central angles vanish and the gates can be
        # read off directly, with identity right gates
        g1 = Uq[:2, :2].copy()
        g2 = Uq[2:, 2:].copy()
        if conv is DofConvention.SP:
            g2 = SX @ g2 @ SX
        return CartanFactors(
            convention=conv,
            left_gates=(g1, g2),
            right_gates=(np.eye(2, dtype=complex), np.eye(2, dtype=complex)),
            alpha=0.0,
            beta=0.0,
            global_phase=0.0,
        )
    V1, V2, thetas, W1, W2 = _cosine_sine(Uq, 2)
    t1, t2 = float(thetas[0]), float(thetas[1])
    if conv is DofConvention.PS:
        left = (V1, 1j * V2)
        right = (W1, -1j * W2)
    else:
        left = (V1, SX @ V2 @ SX @ _D)
        right = (W1, _D @ SX @ W2 @ SX)
    return CartanFactors(
        convention=conv,
        left_gates=left,
        right_gates=right,
        alpha=(t1 + t2) / 2.0,
        beta=(t1 - t2) / 2.0,
        global_phase=0.0,
    )


def reassemble(f: CartanFactors) -> np.ndarray:
    """Multiply the factors back out in the convention's basis order."""
    conv = DofConvention(f.convention)
    K1 = _embed_pair(f.left_gates[0], f.left_gates[1], conv)
    K2 = _embed_pair(f.right_gates[0], f.right_gates[1], conv)
    A = central_a(f.alpha, f.beta, conv)
    return np.exp(1j * f.global_phase) * (K1 @ A @ K2)


def decompose_m4(U, tol: ToleranceConfig = DEFAULT_TOL) -> RecursiveFactors:
    """One CSD level of an 8x8 unitary at the spatial 4+4 partition.

    Basis order is spatial-major: (a1H, a1V, a2H, a2V, a3H, a3V, a4H,
    a4V).  Angle k couples position k with k+4.  The 4x4 blocks are
    returned in the plain CSD frame; the unit corrections that express
    the central factor through physical elements belong to the compile
    stage, which folds them into the blocks it recurses on.
    """
    U = _as_square(U)
    if U.shape != (8, 8):
        raise ValueError(f"decompose_m4 expects an 8x8 matrix, got {U.shape}")
    if not is_unitary(U, tol):
        raise ValueError(
            f"decompose_m4 requires a unitary input (residual {unitarity_residual(U):.3e})"
        )
    if (
        np.abs(U[:4, 4:]).max() <= tol.angle_tol
        and np.abs(U[4:, :4]).max() <= tol.angle_tol
    ):
        return RecursiveFactors(
            left_blocks=(U[:4, :4].copy(), U[4:, 4:].copy()),
            right_blocks=(np.eye(4, dtype=complex), np.eye(4, dtype=complex)),
            angles=(0.0, 0.0, 0.0, 0.0),
            global_phase=0.0,
        )
    V1, V2, thetas, W1, W2 = _cosine_sine(U, 4)
    return RecursiveFactors(
        left_blocks=(V1, V2),
        right_blocks=(W1, W2),
        angles=tuple(float(t) for t in thetas),
        global_phase=0.0,
    )


def central_cs_m4(angles) -> np.ndarray:
    """The 8x8 cosine-sine central factor [[C, S], [-S, C]]."""
    t = np.asarray(angles, dtype=float)
    if t.shape != (4,):
        raise ValueError("central_cs_m4 expects four angles")
    C = np.diag(np.cos(t)).astype(complex)
    S = np.diag(np.sin(t)).astype(complex)
    return np.block([[C, S], [-S, C]])


def reassemble_m4(f: RecursiveFactors) -> np.ndarray:
    """Multiply one CSD level back out."""
    L = np.zeros((8, 8), dtype=complex)
    R = np.zeros((8, 8), dtype=complex)
    L[:4, :4], L[4:, 4:] = f.left_blocks
    R[:4, :4], R[4:, 4:] = f.right_blocks
    return np.exp(1j * f.global_phase) * (L @ central_cs_m4(f.angles) @ R)
