"""Closed-form wave-plate matrices and exact single-qubit chain synthesis.

Any 2x2 unitary splits as a global phase times an SU(2) element, and the
SU(2) part factors through two quarter-wave plates around one half-wave
plate.  The synthesis here is closed form: writing V = w I + i(x sx +
y sy + z sz), the product e^{i d} Q(q1) H(h) Q(q2) has quaternion
components

    w = -cos M cos N,   y =  sin M cos N,
    x =  cos K sin N,   z = -sin K sin N,

with M = q1 - q2, K = q1 + q2, N = 2h - K (all in doubled-angle units),
which inverts by two arctangents.  Shorter chains are emitted whenever
the target is a phase, a single half-wave plate, or a single
quarter-wave plate times a phase.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .linalg import DEFAULT_TOL, ToleranceConfig, is_unitary, unitarity_residual

_TWO_PI = 2.0 * math.pi


def ps_matrix(theta: float) -> np.ndarray:
    """Phase shifter: e^{i theta} on both polarizations of one path."""
    return np.exp(1j * theta) * np.eye(2)


def hwp_matrix(theta: float) -> np.ndarray:
    """Half-wave plate at fast-axis angle theta."""
    c, s = math.cos(2 * theta), math.sin(2 * theta)
    return 1j * np.array([[c, s], [s, -c]])


def qwp_matrix(theta: float) -> np.ndarray:
    """Quarter-wave plate at fast-axis angle theta."""
    c, s = math.cos(2 * theta), math.sin(2 * theta)
    return np.array([[1 + 1j * c, 1j * s], [1j * s, 1 - 1j * c]]) / math.sqrt(2)


@dataclasses.dataclass(frozen=True)
class WaveplateChain:
    """Up to PS, QWP, HWP, QWP applied in that order; absent plates are None."""

    ps_angle: float | None = None
    qwp1_angle: float | None = None
    hwp_angle: float | None = None
    qwp2_angle: float | None = None

    def plates(self) -> list[tuple[str, float]]:
        """Present plates as (kind, angle) pairs in application order."""
        out = []
        if self.ps_angle is not None:
            out.append(("ps", self.ps_angle))
        if self.qwp1_angle is not None:
            out.append(("qwp", self.qwp1_angle))
        if self.hwp_angle is not None:
            out.append(("hwp", self.hwp_angle))
        if self.qwp2_angle is not None:
            out.append(("qwp", self.qwp2_angle))
        return out

    @property
    def element_count(self) -> int:
        return len(self.plates())


_KIND_MATRIX = {"ps": ps_matrix, "hwp": hwp_matrix, "qwp": qwp_matrix}


def chain_matrix(chain: WaveplateChain) -> np.ndarray:
    """Ordered product of the chain's plates; the empty chain is identity."""
    M = np.eye(2, dtype=complex)
    for kind, angle in chain.plates():
        M = _KIND_MATRIX[kind](angle) @ M
    return M


def _canon_plate(angle: float) -> float:
    """Wave-plate action is pi-periodic in the fast-axis angle."""
    a = math.fmod(angle, math.pi)
    return a + math.pi if a < 0 else a + 0.0


def _canon_phase(angle: float) -> float:
    a = math.fmod(angle, _TWO_PI)
    return a + _TWO_PI if a < 0 else a + 0.0


def _quaternion(V: np.ndarray) -> tuple[float, float, float, float]:
    """Components (w, x, y, z) of V = w I + i(x sx + y sy + z sz) in SU(2)."""
    return (V[0, 0].real, V[0, 1].imag, V[0, 1].real, V[0, 0].imag)


def _chain_params(U: np.ndarray) -> tuple[float, float, float, float]:
    """Full four-plate parameterization of a 2x2 unitary.

    Returns (delta, q_first, h, q_last) with

        U = e^{i delta} . Q(q_last) . H(h) . Q(q_first)

    as a matrix product, i.e. Q(q_first) acts first.  Total and
    numerically self-stabilizing: near-degenerate inputs make one of the
    intermediate arctangents ill-conditioned in a direction the
    reconstruction does not depend on.
    """
    det = U[0, 0] * U[1, 1] - U[0, 1] * U[1, 0]
    delta = math.atan2(det.imag, det.real) / 2.0
    V = U * np.exp(-1j * delta)
    w, x, y, z = _quaternion(V)
    # hypot(x, z) rather than sqrt(1 - r*r): the latter loses half the
    # significant digits whenever the gate is close to a pure y-rotation.
    r = math.hypot(w, y)
    s = math.hypot(x, z)
    M = math.atan2(-y, w)
    K = math.atan2(-z, x) if s > 0.0 else 0.0
    N = math.atan2(s, -r)
    a_h = N + K
    a_last = K + M
    a_first = K - M
    return delta, a_first / 2.0, a_h / 2.0, a_last / 2.0


def synthesize_u2(U, tol: ToleranceConfig = DEFAULT_TOL) -> WaveplateChain:
    """Shortest wave-plate chain realizing U exactly (not just up to phase).

    The phase shifter carries the determinant phase; plates that a
    shorter realization does not need are omitted.  Chain length is at
    most 4 and the identity yields the empty chain.
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise ValueError(f"synthesize_u2 expects a 2x2 matrix, got {U.shape}")
    if not is_unitary(U, tol):
        raise ValueError(
            f"synthesize_u2 requires a unitary input (residual {unitarity_residual(U):.3e})"
        )
    a_tol = tol.angle_tol
    det = U[0, 0] * U[1, 1] - U[0, 1] * U[1, 0]
    delta = math.atan2(det.imag, det.real) / 2.0
    V = U * np.exp(-1j * delta)
    w, x, y, z = _quaternion(V)

    ps: float | None
    if math.sqrt(x * x + y * y + z * z) <= a_tol:
        # scalar: all of U is a phase
        if w < 0.0:
            delta += math.pi
        return WaveplateChain(ps_angle=_elide_phase(delta, a_tol))
    if math.hypot(w, y) <= a_tol:
        # i times a reflection in the x-z plane: a single half-wave plate
        ps = _elide_phase(delta, a_tol)
        return WaveplateChain(ps_angle=ps, hwp_angle=_canon_plate(math.atan2(x, z) / 2.0))
    if abs(y) <= a_tol and abs(abs(w) - 1.0 / math.sqrt(2.0)) <= a_tol:
        # a single quarter-wave plate times a phase; the SU(2) factor is
        # only fixed up to sign, so flip into the +w representative
        if w < 0.0:
            delta += math.pi
            x, z = -x, -z
        ps = _elide_phase(delta, a_tol)
        return WaveplateChain(ps_angle=ps, qwp1_angle=_canon_plate(math.atan2(x, z) / 2.0))
    d, q1, h, q2 = _chain_params(U)
    return WaveplateChain(
        ps_angle=_elide_phase(d, a_tol),
        qwp1_angle=_canon_plate(q1),
        hwp_angle=_canon_plate(h),
        qwp2_angle=_canon_plate(q2),
    )


def _elide_phase(angle: float, a_tol: float) -> float | None:
    a = _canon_phase(angle)
    if min(a, _TWO_PI - a) <= a_tol:
        return None
    return a
