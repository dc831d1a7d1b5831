"""Optical-circuit intermediate representation.

A circuit is a flat list of typed elements in propagation order: each
element is a polarizing beam splitter across two spatial modes or a
wave plate / phase shifter on one mode.  This module owns element
counting against the reference baselines, the JSON wire format, and a
small exact peephole optimizer.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np

from .dof import DofConvention
from .linalg import DEFAULT_TOL, ToleranceConfig
from .waveplates import (
    WaveplateChain,
    chain_matrix,
    hwp_matrix,
    ps_matrix,
    qwp_matrix,
    synthesize_u2,
)

KINDS = ("pbs", "hwp", "qwp", "ps")

_TWO_PI = 2.0 * math.pi


@dataclasses.dataclass(frozen=True)
class OpticalElement:
    """One element: kind, spatial mode(s), fast-axis or phase angle.

    PBS entries carry two distinct modes and no angle; plate and phase
    entries carry one mode and a finite angle in radians.
    """

    kind: str
    modes: tuple[int, ...]
    angle_rad: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        modes = tuple(int(m) for m in self.modes)
        if any(m < 0 for m in modes):
            raise ValueError(f"negative mode index in {modes}")
        object.__setattr__(self, "modes", modes)
        if self.kind == "pbs":
            if len(modes) != 2 or modes[0] == modes[1]:
                raise ValueError("pbs needs two distinct modes")
            if self.angle_rad is not None:
                raise ValueError("pbs carries no angle")
        else:
            if len(modes) != 1:
                raise ValueError(f"{self.kind} acts on exactly one mode")
            if self.angle_rad is None or not math.isfinite(float(self.angle_rad)):
                raise ValueError(f"{self.kind} needs a finite angle")
            object.__setattr__(self, "angle_rad", float(self.angle_rad))


def pbs(i: int, j: int) -> OpticalElement:
    return OpticalElement("pbs", (i, j))


def hwp(mode: int, angle: float) -> OpticalElement:
    return OpticalElement("hwp", (mode,), angle)


def qwp(mode: int, angle: float) -> OpticalElement:
    return OpticalElement("qwp", (mode,), angle)


def ps(mode: int, angle: float) -> OpticalElement:
    return OpticalElement("ps", (mode,), angle)


def chain_elements(chain: WaveplateChain, mode: int) -> list[OpticalElement]:
    """A synthesized single-qubit chain as circuit elements on one mode."""
    return [OpticalElement(kind, (mode,), angle) for kind, angle in chain.plates()]


@dataclasses.dataclass(frozen=True)
class OpticalCircuit:
    """Elements in propagation order plus the basis-labeling convention."""

    convention: object
    num_spatial_modes: int
    elements: tuple[OpticalElement, ...] = ()
    metadata: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "convention", DofConvention(self.convention))
        if self.num_spatial_modes not in (2, 4):
            raise ValueError(
                f"num_spatial_modes must be 2 or 4, got {self.num_spatial_modes}"
            )
        elements = tuple(self.elements)
        for e in elements:
            if not isinstance(e, OpticalElement):
                raise ValueError(f"not an OpticalElement: {e!r}")
            if max(e.modes) >= self.num_spatial_modes:
                raise ValueError(
                    f"element {e.kind} on modes {e.modes} exceeds "
                    f"{self.num_spatial_modes} spatial modes"
                )
        object.__setattr__(self, "elements", elements)
        meta = dict(self.metadata)
        for k, v in meta.items():
            if not isinstance(k, str) or not isinstance(v, str):
                raise ValueError("metadata must map strings to strings")
        object.__setattr__(self, "metadata", meta)


@dataclasses.dataclass(frozen=True)
class CountReport:
    """Element totals and the saving against the reference baseline.

    baseline_comparisons maps a baseline name to (baseline - total), so
    a positive delta is an improvement.  Only the baseline matching the
    circuit's convention and mode count appears.
    """

    total: int
    by_kind: dict
    baseline_comparisons: dict


# Element counts of the prior construction this compiler replaces,
# keyed by (convention tag, spatial modes).
BASELINES = {
    ("ps", 2): ("ps_csd_swap", 25),
    ("sp", 2): ("sp_csd", 21),
    ("sp", 4): ("m4_csd", 74),
}


def element_count(circuit: OpticalCircuit) -> CountReport:
    by_kind = {k: 0 for k in KINDS}
    for e in circuit.elements:
        by_kind[e.kind] += 1
    total = len(circuit.elements)
    comparisons = {}
    key = (circuit.convention.tag, circuit.num_spatial_modes)
    if key in BASELINES:
        name, baseline = BASELINES[key]
        comparisons[name] = baseline - total
    return CountReport(total=total, by_kind=by_kind, baseline_comparisons=comparisons)


# -- JSON wire format --------------------------------------------------------
#
# {"version": 1, "convention": "ps"|"sp", "spatial_modes": n,
#  "elements": [{"kind": ..., "modes": [...], "angle_rad": ...}, ...],
#  "metadata": {str: str}}


def serialize(circuit: OpticalCircuit) -> str:
    elements = []
    for e in circuit.elements:
        rec = {"kind": e.kind, "modes": list(e.modes)}
        if e.kind != "pbs":
            rec["angle_rad"] = e.angle_rad
        elements.append(rec)
    doc = {
        "version": 1,
        "convention": circuit.convention.tag,
        "spatial_modes": circuit.num_spatial_modes,
        "elements": elements,
        "metadata": circuit.metadata,
    }
    return json.dumps(doc)


def deserialize(text: str) -> OpticalCircuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed circuit JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("circuit JSON must be an object")
    if doc.get("version") != 1:
        raise ValueError(f"unsupported circuit version {doc.get('version')!r}")
    convention = doc.get("convention")
    if convention not in ("ps", "sp"):
        raise ValueError(f"convention must be 'ps' or 'sp', got {convention!r}")
    modes = doc.get("spatial_modes")
    if not isinstance(modes, int) or isinstance(modes, bool):
        raise ValueError("spatial_modes must be an integer")
    raw = doc.get("elements")
    if not isinstance(raw, list):
        raise ValueError("'elements' must be a list")
    elements = []
    for i, rec in enumerate(raw):
        if not isinstance(rec, dict):
            raise ValueError(f"element {i} must be an object")
        kind = rec.get("kind")
        if kind not in KINDS:
            raise ValueError(f"element {i}: unsupported kind {kind!r}")
        ms = rec.get("modes")
        if not isinstance(ms, list) or not all(
            isinstance(m, int) and not isinstance(m, bool) for m in ms
        ):
            raise ValueError(f"element {i}: modes must be a list of integers")
        angle = rec.get("angle_rad")
        if kind == "pbs":
            if angle is not None:
                raise ValueError(f"element {i}: pbs carries no angle_rad")
        else:
            if not isinstance(angle, (int, float)) or isinstance(angle, bool):
                raise ValueError(f"element {i}: angle_rad must be a number")
        try:
            elements.append(OpticalElement(kind, tuple(ms), angle))
        except ValueError as exc:
            raise ValueError(f"element {i}: {exc}") from exc
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise ValueError("metadata must be an object")
    try:
        return OpticalCircuit(
            convention=convention,
            num_spatial_modes=modes,
            elements=tuple(elements),
            metadata=meta,
        )
    except ValueError as exc:
        raise ValueError(str(exc)) from exc


# -- peephole optimization ---------------------------------------------------

_PLATE_MATRIX = {"ps": ps_matrix, "hwp": hwp_matrix, "qwp": qwp_matrix}


def _zero_phase(angle: float, a_tol: float) -> bool:
    a = math.fmod(angle, _TWO_PI)
    if a < 0:
        a += _TWO_PI
    return min(a, _TWO_PI - a) <= a_tol


def _disjoint(e: OpticalElement, f: OpticalElement) -> bool:
    return not set(e.modes) & set(f.modes)


def _rewrite_drop_zero_ps(elems: list, a_tol: float) -> bool:
    # a zero-angle PS is the only element whose matrix is identity:
    # wave plates are never proportional to I2 at any angle
    for i, e in enumerate(elems):
        if e.kind == "ps" and _zero_phase(e.angle_rad, a_tol):
            del elems[i]
            return True
    return False


def _rewrite_merge_ps(elems: list) -> bool:
    # two phase shifters on one mode add; anything on other modes
    # commutes past, anything sharing the mode blocks the merge
    for i, e in enumerate(elems):
        if e.kind != "ps":
            continue
        for j in range(i + 1, len(elems)):
            f = elems[j]
            if _disjoint(e, f):
                continue
            if f.kind == "ps" and f.modes == e.modes:
                merged = math.fmod(e.angle_rad + f.angle_rad, _TWO_PI)
                if merged < 0:
                    merged += _TWO_PI
                elems[i] = ps(e.modes[0], merged)
                del elems[j]
                return True
            break
    return False


def _rotation_pair(M: np.ndarray, mode: int, a_tol: float):
    # two half-wave plates realize any real rotation: H(a)H(0) equals
    # the rotation by 2a - pi, a form the PS-QWP-HWP-QWP chain needs
    # three plates for
    if np.abs(M.imag).max() > a_tol:
        return None
    if (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]).real < 0.0:
        return None
    phi = math.atan2(M[1, 0].real, M[0, 0].real)
    a = math.fmod((phi + math.pi) / 2.0, math.pi)
    if a < 0.0:
        a += math.pi
    return [hwp(mode, 0.0), hwp(mode, a)]


def _rewrite_resynthesize_run(elems: list, tol: ToleranceConfig) -> bool:
    # a same-mode run of plates collapses through synthesize_u2 when the
    # product admits a shorter chain; elements on other modes are
    # transparent, a PBS touching the mode ends the run
    n = len(elems)
    for i, e in enumerate(elems):
        if e.kind == "pbs":
            continue
        mode = e.modes[0]
        run = [i]
        for j in range(i + 1, n):
            f = elems[j]
            if mode not in f.modes:
                continue
            if f.kind == "pbs":
                break
            run.append(j)
        if len(run) < 2:
            continue
        M = np.eye(2, dtype=complex)
        for j in run:
            g = elems[j]
            M = _PLATE_MATRIX[g.kind](g.angle_rad) @ M
        replacement = chain_elements(synthesize_u2(M, tol), mode)
        pair = _rotation_pair(M, mode, tol.angle_tol)
        if pair is not None and len(pair) < len(replacement):
            replacement = pair
        if len(replacement) < len(run):
            for j in reversed(run):
                del elems[j]
            elems[run[0] : run[0]] = replacement
            return True
    return False


def _rewrite_cancel_pbs(elems: list) -> bool:
    # PBS is an involution; a pair on the same mode set cancels when
    # nothing in between touches either mode
    for i, e in enumerate(elems):
        if e.kind != "pbs":
            continue
        for j in range(i + 1, len(elems)):
            f = elems[j]
            if _disjoint(e, f):
                continue
            if f.kind == "pbs" and set(f.modes) == set(e.modes):
                del elems[j]
                del elems[i]
                return True
            break
    return False


def optimize(circuit: OpticalCircuit, tol: ToleranceConfig = DEFAULT_TOL) -> OpticalCircuit:
    """Exact peephole pass to fixpoint; never increases the element count.

    Rules: drop identity phase shifters, merge same-mode phase-shifter
    pairs, resynthesize same-mode plate runs into shorter chains, cancel
    adjacent PBS pairs.  Every rewrite preserves the simulated unitary
    exactly (not merely up to phase), so repeated application terminates
    with a circuit of equal or smaller count and identical action.
    """
    elems = list(circuit.elements)
    while True:
        if _rewrite_drop_zero_ps(elems, tol.angle_tol):
            continue
        if _rewrite_merge_ps(elems):
            continue
        if _rewrite_resynthesize_run(elems, tol):
            continue
        if _rewrite_cancel_pbs(elems):
            continue
        break
    return OpticalCircuit(
        convention=circuit.convention,
        num_spatial_modes=circuit.num_spatial_modes,
        elements=tuple(elems),
        metadata=dict(circuit.metadata),
    )
