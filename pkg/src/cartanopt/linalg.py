"""Dense complex linear algebra shared by every stage of the compiler.

Holds the tolerance configuration, unitarity and phase-aware distance
checks, the 2x2-block cosine-sine decomposition that drives both
factorization routes, Haar-random sampling for tests, and the matrix
JSON wire format.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np
from scipy.linalg import cossin


@dataclasses.dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used across the pipeline, all dimensionless."""

    unitarity_tol: float = 1e-10
    equivalence_tol: float = 1e-9
    angle_tol: float = 1e-12

    def __post_init__(self):
        if min(self.unitarity_tol, self.equivalence_tol, self.angle_tol) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if self.equivalence_tol < self.unitarity_tol:
            raise ValueError("equivalence_tol must be >= unitarity_tol")


DEFAULT_TOL = ToleranceConfig()


def _as_square(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def unitarity_residual(M) -> float:
    """Max-entry norm of M^dag M - I."""
    M = _as_square(M)
    n = M.shape[0]
    return float(np.abs(M.conj().T @ M - np.eye(n)).max())


def is_unitary(M, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    return unitarity_residual(M) <= tol.unitarity_tol


def phase_distance(A, B) -> tuple[float, float]:
    """Max-entry distance between A and B after optimal global phase.

    Returns (distance, phase) where phase = arg tr(A^dag B) and distance
    is ||A e^{i phase} - B||_max.  The phase choice maximizes alignment,
    so the distance is invariant under multiplying either argument by a
    unit scalar as long as tr(A^dag B) does not vanish.
    """
    A = _as_square(A)
    B = _as_square(B)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    t = np.trace(A.conj().T @ B)
    phase = float(np.angle(t)) if abs(t) > 0 else 0.0
    distance = float(np.abs(A * np.exp(1j * phase) - B).max())
    return distance, phase


@dataclasses.dataclass(frozen=True)
class BlockCsdResult:
    """U = blkdiag(left) . CS(angles) . blkdiag(right) at the 2+2 partition.

    CS(theta_a, theta_b) couples position i of the top block with
    position i of the bottom block as [[C, S], [-S, C]] with
    C = diag(cos), S = diag(sin).  Angles lie in [0, pi/2], descending.
    """

    left_blocks: tuple[np.ndarray, np.ndarray]
    right_blocks: tuple[np.ndarray, np.ndarray]
    angles: tuple[float, float]


def _cosine_sine(U: np.ndarray, half: int):
    """Cosine-sine decomposition of a 2k x 2k unitary at the k+k partition.

    Returns (V1, V2, thetas, W1, W2) with

        U = blkdiag(V1, V2) @ [[C, S], [-S, C]] @ blkdiag(W1, W2),

    thetas descending in [0, pi/2].  The result is made deterministic by
    a fixed gauge: for each index the common phase of (V1 col, V2 col,
    W1 row, W2 row) is chosen so the first non-negligible component of
    the V1 column is real and positive.
    """
    u, cs, vdh = cossin(U, p=half, q=half)
    # LAPACK's central factor is [[C, -S], [S, C]]; conjugating by
    # diag(I, -I) converts to [[C, S], [-S, C]] at the cost of a sign
    # on the second left and right blocks.
    V1 = u[:half, :half].copy()
    V2 = -u[half:, half:]
    W1 = vdh[:half, :half].copy()
    W2 = -vdh[half:, half:]
    c = np.clip(np.diag(cs[:half, :half]).real, 0.0, 1.0)
    s = np.clip(np.diag(cs[half:, :half]).real, 0.0, 1.0)
    thetas = np.arctan2(s, c)
    order = np.argsort(-thetas, kind="stable")
    thetas = thetas[order]
    V1 = V1[:, order]
    V2 = V2[:, order]
    W1 = W1[order, :]
    W2 = W2[order, :]
    for i in range(half):
        col = V1[:, i]
        j = int(np.argmax(np.abs(col) > 1e-8))
        ph = col[j] / abs(col[j])
        V1[:, i] = V1[:, i] * ph.conjugate()
        V2[:, i] = V2[:, i] * ph.conjugate()
        W1[i, :] = W1[i, :] * ph
        W2[i, :] = W2[i, :] * ph
    return V1, V2, thetas, W1, W2


def block_csd(U, tol: ToleranceConfig = DEFAULT_TOL) -> BlockCsdResult:
    """Cosine-sine decomposition of a 4x4 unitary at the natural 2+2 split."""
    U = _as_square(U)
    if U.shape != (4, 4):
        raise ValueError(f"block_csd expects a 4x4 matrix, got {U.shape}")
    if not is_unitary(U, tol):
        raise ValueError(
            f"block_csd requires a unitary input (residual {unitarity_residual(U):.3e})"
        )
    V1, V2, thetas, W1, W2 = _cosine_sine(U, 2)
    return BlockCsdResult(
        left_blocks=(V1, V2),
        right_blocks=(W1, W2),
        angles=(float(thetas[0]), float(thetas[1])),
    )


def haar_random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary, deterministic per seed.

    QR orthonormalization of a seeded complex Gaussian matrix with the
    R diagonal's phases folded back into Q.
    """
    if dim not in (2, 4, 8):
        raise ValueError(f"dim must be 2, 4, or 8, got {dim}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    q, r = np.linalg.qr(z / math.sqrt(2.0))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


# -- matrix JSON wire format -------------------------------------------------
#
# {"dim": n, "entries": [[[re, im], ...] x n] x n}, row-major.


def matrix_to_json(M) -> dict:
    M = _as_square(M)
    n = M.shape[0]
    return {
        "dim": n,
        "entries": [[[float(M[i, j].real), float(M[i, j].imag)] for j in range(n)]
                    for i in range(n)],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ValueError("matrix JSON must be an object")
    dim = obj.get("dim")
    entries = obj.get("entries")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValueError("matrix JSON needs a positive integer 'dim'")
    if not isinstance(entries, list) or len(entries) != dim:
        raise ValueError(f"'entries' must be a list of {dim} rows")
    M = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != dim:
            raise ValueError(f"row {i} length != dim ({dim})")
        for j, cell in enumerate(row):
            if (not isinstance(cell, (list, tuple)) or len(cell) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                               for v in cell)):
                raise ValueError(f"entry ({i},{j}) must be a [re, im] pair of numbers")
            re, im = float(cell[0]), float(cell[1])
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ValueError(f"entry ({i},{j}) is not finite")
            M[i, j] = complex(re, im)
    return M


def dump_matrix(M) -> str:
    return json.dumps(matrix_to_json(M))


def load_matrix(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    return matrix_from_json(obj)
