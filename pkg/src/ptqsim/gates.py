"""Subspace-rotation gate IR for a single qutrit and transpilers to two native sets.

Circuits list gates in application order (first applied = first listed);
matrix products are therefore taken right to left.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from .linalg import dist_up_to_global_phase

_HALF_PI = math.pi / 2.0
_VALID_SUBSPACES = ((0, 1), (0, 2), (1, 2))


class GateKind(Enum):
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    RION = "RION"
    PHASE2 = "PHASE2"


# RZ and PHASE2 are zero-duration phase bookkeeping, everything else is a pulse
PHYSICAL_KINDS = frozenset({GateKind.RX, GateKind.RY, GateKind.RION})


class UnsupportedGate(ValueError):
    """Input gate outside the shape a transpiler accepts."""


class CircuitParseError(ValueError):
    """Malformed line in the textual circuit format."""


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    subspace: tuple[int, int]
    angles: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.subspace not in _VALID_SUBSPACES:
            raise ValueError(f"bad subspace {self.subspace}")
        expected = 2 if self.kind is GateKind.RION else 1
        if len(self.angles) != expected:
            raise ValueError(
                f"{self.kind.value} takes {expected} angle(s), got {len(self.angles)}"
            )
        if not all(math.isfinite(a) for a in self.angles):
            raise ValueError("gate angles must be finite")


def rx(i: int, j: int, theta: float) -> Gate:
    return Gate(GateKind.RX, (i, j), (float(theta),))


def ry(i: int, j: int, theta: float) -> Gate:
    return Gate(GateKind.RY, (i, j), (float(theta),))


def rz(i: int, j: int, phi: float) -> Gate:
    return Gate(GateKind.RZ, (i, j), (float(phi),))


def rion(i: int, j: int, phi: float, theta: float) -> Gate:
    return Gate(GateKind.RION, (i, j), (float(phi), float(theta)))


def phase2(i: int, j: int, lam: float) -> Gate:
    return Gate(GateKind.PHASE2, (i, j), (float(lam),))


@dataclass(frozen=True)
class Circuit:
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))

    def __iter__(self):
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)


def gate_matrix(g: Gate) -> np.ndarray:
    """Exact 3x3 matrix; the level outside the subspace is untouched."""
    m = np.eye(3, dtype=complex)
    i, j = g.subspace
    if g.kind is GateKind.RX:
        (theta,) = g.angles
        ch, sh = math.cos(theta / 2.0), math.sin(theta / 2.0)
        m[i, i] = ch
        m[i, j] = -1j * sh
        m[j, i] = -1j * sh
        m[j, j] = ch
    elif g.kind is GateKind.RY:
        (theta,) = g.angles
        ch, sh = math.cos(theta / 2.0), math.sin(theta / 2.0)
        m[i, i] = ch
        m[i, j] = -sh
        m[j, i] = sh
        m[j, j] = ch
    elif g.kind is GateKind.RZ:
        (phi,) = g.angles
        m[j, j] = cmath.exp(1j * phi)
    elif g.kind is GateKind.RION:
        phi, theta = g.angles
        ch, sh = math.cos(theta / 2.0), math.sin(theta / 2.0)
        m[i, i] = ch
        m[i, j] = -1j * cmath.exp(-1j * phi) * sh
        m[j, i] = -1j * cmath.exp(1j * phi) * sh
        m[j, j] = ch
    else:  # PHASE2
        (lam,) = g.angles
        z = cmath.exp(1j * lam)
        m[i, i] = z
        m[j, j] = z
    return m


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Ordered product of the gate matrices (last-applied gate leftmost)."""
    u = np.eye(3, dtype=complex)
    for g in c:
        u = gate_matrix(g) @ u
    return u


@dataclass(frozen=True)
class GateSet:
    name: str

    def admits(self, g: Gate) -> bool:
        if self.name == "ABSTRACT":
            return True
        if self.name == "ION":
            return g.kind in (GateKind.RION, GateKind.RZ) and g.subspace in (
                (0, 1),
                (0, 2),
            )
        if self.name == "TRANSMON":
            if g.subspace not in ((0, 1), (1, 2)):
                return False
            if g.kind is GateKind.RX:
                return g.angles[0] == _HALF_PI
            return g.kind is GateKind.RZ
        return False


ION = GateSet("ION")
TRANSMON = GateSet("TRANSMON")
ABSTRACT = GateSet("ABSTRACT")


def _require_abstract_rx(c: Circuit) -> None:
    for g in c:
        if g.kind is not GateKind.RX or g.subspace not in ((0, 1), (1, 2)):
            raise UnsupportedGate(f"cannot transpile {g}")


def transpile_ion(c: Circuit) -> Circuit:
    """RX(0,1) is the zero-phase native pulse; RX(1,2) is conjugated into the
    (0,2) subspace by a pair of (0,1) Y half-turns. Preserves the matrix
    exactly (no leftover phase)."""
    _require_abstract_rx(c)
    out: list[Gate] = []
    for g in c:
        (theta,) = g.angles
        if g.subspace == (0, 1):
            out.append(rion(0, 1, 0.0, theta))
        else:
            out.append(rion(0, 1, _HALF_PI, -math.pi))
            out.append(rion(0, 2, 0.0, theta))
            out.append(rion(0, 1, _HALF_PI, math.pi))
    return Circuit(tuple(out))


def _expand01(theta: float, sign: int) -> list[Gate]:
    """RX(0,1)(theta) from two quarter pulses, leaving the scalar
    exp(sign.i.theta/2) on the full space. Both sign branches exist so a
    whole circuit can cancel its scalars."""
    q = sign * _HALF_PI
    return [
        rz(1, 2, sign * theta / 2.0),
        rz(0, 1, q),
        rx(0, 1, _HALF_PI),
        rz(0, 1, q),
        rz(0, 1, sign * theta),
        rz(0, 1, q),
        rx(0, 1, _HALF_PI),
        rz(0, 1, q),
    ]


def _expand12(theta: float) -> list[Gate]:
    """RX(1,2)(theta) from two quarter pulses; exact, no leftover scalar
    (level 0 is never phased, so the two-level phase is fully expressible)."""
    return [
        rz(1, 2, -theta / 2.0),
        rz(0, 1, -theta / 2.0),
        rz(1, 2, _HALF_PI),
        rx(1, 2, _HALF_PI),
        rz(1, 2, _HALF_PI),
        rz(1, 2, theta),
        rz(1, 2, _HALF_PI),
        rx(1, 2, _HALF_PI),
        rz(1, 2, _HALF_PI),
    ]


def _phase_block(chi: float) -> list[Gate]:
    """exp(i.chi).identity from four quarter pulses; absorbs any residual
    scalar the (0,1) expansions could not cancel among themselves."""
    alpha = chi - math.pi
    return [
        rz(0, 1, alpha),
        rx(0, 1, _HALF_PI),
        rx(0, 1, _HALF_PI),
        rz(0, 1, alpha),
        rx(0, 1, _HALF_PI),
        rx(0, 1, _HALF_PI),
        rz(1, 2, chi),
    ]


def _wrap_pi(x: float) -> float:
    """Reduce to (-pi, pi]."""
    y = math.fmod(x, 2.0 * math.pi)
    if y > math.pi:
        y -= 2.0 * math.pi
    elif y <= -math.pi:
        y += 2.0 * math.pi
    return y


def _balance_signs(halves: list[float]) -> list[int]:
    """Sign per (0,1) rotation minimizing |wrap(sum of signed half-angles)|."""
    n = len(halves)
    if n == 0:
        return []
    if n <= 14:
        best: list[int] | None = None
        best_val = math.inf
        for mask in range(1 << n):
            signs = [1 if mask & (1 << k) == 0 else -1 for k in range(n)]
            val = abs(_wrap_pi(sum(s * h for s, h in zip(signs, halves))))
            if val < best_val:
                best_val = val
                best = signs
        assert best is not None
        return best
    # large circuits: greedily oppose the running sum, biggest angles first
    order = sorted(range(n), key=lambda k: -abs(halves[k]))
    signs = [1] * n
    total = 0.0
    for k in order:
        signs[k] = -1 if total * halves[k] > 0 else 1
        total += signs[k] * halves[k]
    return signs


def transpile_transmon(c: Circuit) -> Circuit:
    """Rewrite onto quarter X pulses plus virtual Z rotations, exactly.

    Each (0,1) rotation leaves a scalar exp(+-i.theta/2) because no set of
    pure Z rotations can phase level 0; the pass picks the branch signs so
    the scalars cancel, and appends an explicit four-pulse phase block for
    whatever residual remains."""
    _require_abstract_rx(c)
    halves = [g.angles[0] / 2.0 for g in c if g.subspace == (0, 1)]
    signs = _balance_signs(halves)
    out: list[Gate] = []
    total = 0.0
    k = 0
    for g in c:
        (theta,) = g.angles
        if g.subspace == (0, 1):
            sign = signs[k]
            k += 1
            out.extend(_expand01(theta, sign))
            total += sign * theta / 2.0
        else:
            out.extend(_expand12(theta))
    residual = _wrap_pi(total)
    if abs(residual) > 1e-12:
        out.extend(_phase_block(-residual))
    return Circuit(tuple(out))


def equivalent(
    c1: Circuit, c2: Circuit, tol: float = 1e-10, up_to_phase: bool = False
) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    u1 = circuit_unitary(c1)
    u2 = circuit_unitary(c2)
    if up_to_phase:
        return dist_up_to_global_phase(u1, u2) <= tol
    return float(np.max(np.abs(u1 - u2))) <= tol


@dataclass(frozen=True)
class CircuitStats:
    gate_count: int
    physical_count: int
    virtual_count: int
    depth: int


def stats(c: Circuit) -> CircuitStats:
    physical = sum(1 for g in c if g.kind in PHYSICAL_KINDS)
    total = len(c)
    return CircuitStats(
        gate_count=total,
        physical_count=physical,
        virtual_count=total - physical,
        depth=total,
    )


def format_circuit(c: Circuit) -> str:
    """One gate per line: KIND i j angle [angle]; %.17g round-trips doubles."""
    lines = []
    for g in c:
        parts = [g.kind.value, str(g.subspace[0]), str(g.subspace[1])]
        parts.extend(f"{a:.17g}" for a in g.angles)
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_circuit(text: str) -> Circuit:
    gates: list[Gate] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            kind = GateKind(parts[0].upper())
            i, j = int(parts[1]), int(parts[2])
            angles = tuple(float(x) for x in parts[3:])
            gates.append(Gate(kind, (i, j), angles))
        except (ValueError, IndexError) as exc:
            raise CircuitParseError(f"line {ln}: {raw.strip()!r}: {exc}") from None
    return Circuit(tuple(gates))
