"""Lower logical circuits to translation-invariant pulse schedules.

Every gate is realized twice, once on each half of the chain, because all
uniform operations commute with the mirror map.  Logical qubit ``j`` sits at
physical site ``2j - 1``; the even sites in between are ancillas held in
``|0>``.  A chain for ``n`` logical qubits has ``N = 4n + 2`` sites.

The operator products these sequences come from read right to left; the
schedules here are emitted in execution order (first item acts first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .schedule import STEP, Item, Pulse, PulseSchedule
from .symplectic import BitVec, s_vector


class CircuitFormatError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def chain_length(n_logical: int) -> int:
    if n_logical < 1:
        raise ValueError(f"need at least one logical qubit, got {n_logical}")
    return 4 * n_logical + 2


def cycle_length(n_sites: int) -> int:
    return 2 * (n_sites + 1)


@dataclass(frozen=True)
class LayoutMap:
    n_logical: int

    @property
    def n_sites(self) -> int:
        return chain_length(self.n_logical)

    def physical(self, j: int) -> int:
        if not 0 <= j <= self.n_logical:
            raise ValueError(f"logical index {j} outside 0..{self.n_logical}")
        return self.readout_site if j == 0 else 2 * j - 1

    @property
    def readout_site(self) -> int:
        return 2 * self.n_logical + 1

    def mirror(self, i: int) -> int:
        if not 1 <= i <= self.n_sites:
            raise ValueError(f"site {i} outside 1..{self.n_sites}")
        return self.n_sites + 1 - i

    @property
    def logical_sites(self) -> tuple[int, ...]:
        left = tuple(2 * j - 1 for j in range(1, self.n_logical + 1))
        return left + tuple(self.mirror(i) for i in left)

    @property
    def readout_sites(self) -> tuple[int, int]:
        return self.readout_site, self.mirror(self.readout_site)

    @property
    def ancilla_sites(self) -> tuple[int, ...]:
        used = set(self.logical_sites) | set(self.readout_sites)
        return tuple(i for i in range(1, self.n_sites + 1) if i not in used)


# logical gate set ---------------------------------------------------------

@dataclass(frozen=True)
class RZ:
    j: int
    alpha: float


@dataclass(frozen=True)
class RX:
    j: int
    alpha: float


@dataclass(frozen=True)
class XXRot:
    """``exp(i alpha/2 X_[j] X_[j+1])``."""

    j: int
    alpha: float


@dataclass(frozen=True)
class XStringRot:
    alpha: float
    L1: int
    L2: int


@dataclass(frozen=True)
class ControlledFlip:
    """``exp(i pi |--><--|)`` on logical qubits ``l1 < l2``."""

    l1: int
    l2: int


Gate = Union[RZ, RX, XXRot, XStringRot, ControlledFlip]


def _validate(gate: Gate, n: int) -> None:
    if isinstance(gate, (RZ, RX)):
        if not 1 <= gate.j <= n:
            raise ValueError(f"{type(gate).__name__}: qubit {gate.j} outside 1..{n}")
    elif isinstance(gate, XXRot):
        # j = n would couple into the readout qubit
        if not 1 <= gate.j <= n - 1:
            raise ValueError(f"XXRot: pair ({gate.j}, {gate.j + 1}) outside 1..{n}")
    elif isinstance(gate, XStringRot):
        if not 1 <= gate.L1 <= gate.L2 <= n:
            raise ValueError(f"XStringRot: need 1 <= L1 <= L2 <= {n}, got {gate.L1}, {gate.L2}")
    elif isinstance(gate, ControlledFlip):
        if not 1 <= gate.l1 < gate.l2 <= n:
            raise ValueError(f"ControlledFlip: need 1 <= l1 < l2 <= {n}, got {gate.l1}, {gate.l2}")
    else:
        raise TypeError(f"not a logical gate: {gate!r}")


@dataclass(frozen=True)
class LogicalCircuit:
    n_logical: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n_logical < 1:
            raise ValueError("circuit needs at least one logical qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            _validate(g, self.n_logical)

    def to_text(self) -> str:
        lines = [f"n {self.n_logical}"]
        for g in self.gates:
            if isinstance(g, RZ):
                lines.append(f"rz {g.j} {g.alpha!r}")
            elif isinstance(g, RX):
                lines.append(f"rx {g.j} {g.alpha!r}")
            elif isinstance(g, XXRot):
                lines.append(f"xx {g.j} {g.alpha!r}")
            elif isinstance(g, XStringRot):
                lines.append(f"xstring {g.alpha!r} {g.L1} {g.L2}")
            else:
                lines.append(f"cflip {g.l1} {g.l2}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LogicalCircuit":
        n = None
        gates: list[Gate] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            op, *args = line.split()
            try:
                if n is None:
                    if op != "n" or len(args) != 1:
                        raise CircuitFormatError("expected header 'n <count>'", lineno)
                    n = int(args[0])
                    if n < 1:
                        raise CircuitFormatError("logical qubit count must be positive", lineno)
                    continue
                gate = _parse_gate(op, args, lineno)
                _validate(gate, n)
            except CircuitFormatError:
                raise
            except ValueError as exc:
                raise CircuitFormatError(str(exc), lineno) from None
            gates.append(gate)
        if n is None:
            raise CircuitFormatError("missing header 'n <count>'")
        return cls(n, tuple(gates))


def _parse_gate(op: str, args: list[str], lineno: int) -> Gate:
    arity = {"rz": 2, "rx": 2, "xx": 2, "xstring": 3, "cflip": 2}
    if op not in arity:
        raise CircuitFormatError(f"unknown directive {op!r}", lineno)
    if len(args) != arity[op]:
        raise CircuitFormatError(f"{op} takes {arity[op]} arguments, got {len(args)}", lineno)
    if op == "rz":
        return RZ(int(args[0]), float(args[1]))
    if op == "rx":
        return RX(int(args[0]), float(args[1]))
    if op == "xx":
        return XXRot(int(args[0]), float(args[1]))
    if op == "xstring":
        return XStringRot(float(args[0]), int(args[1]), int(args[2]))
    return ControlledFlip(int(args[0]), int(args[1]))


# resources ----------------------------------------------------------------

@dataclass(frozen=True)
class ResourceReport:
    n_logical: int
    chain_length: int
    t_steps: int = 0
    gate_steps: tuple[int, ...] = field(default=())

    @property
    def cycle_steps(self) -> int:
        return cycle_length(self.chain_length)

    @property
    def clock_cycles(self) -> Fraction:
        return Fraction(self.t_steps, self.cycle_steps)

    def summary(self) -> str:
        return (
            f"n_logical={self.n_logical} N={self.chain_length} "
            f"steps_per_cycle={self.cycle_steps} t_steps={self.t_steps} "
            f"clock_cycles={self.clock_cycles}"
        )


def resource_plan(n_logical: int) -> ResourceReport:
    return ResourceReport(n_logical, chain_length(n_logical))


# gate sequences -----------------------------------------------------------

def _block(pre: int, axis: str, angle: float, mid: int, post: int) -> list[Item]:
    """``T^pre, U_axis(angle), T^mid, Y, T, Y, T^post`` in execution order."""
    if min(pre, mid, post) < 0:
        raise ValueError(f"negative step count in block ({pre}, {mid}, {post})")
    y = Pulse("Y", math.pi)
    return [STEP] * pre + [Pulse(axis, angle)] + [STEP] * mid + [y, STEP, y] + [STEP] * post


def _two_blocks(n_sites: int, pre: int, axis: str, alpha: float, mid: int, post: int) -> PulseSchedule:
    items = _block(pre, axis, alpha / 2, mid, post) + _block(pre, axis, -alpha / 2, mid, post)
    return PulseSchedule(n_sites, tuple(items))


def _check_phys(i: int, n_sites: int) -> None:
    if not 1 <= i <= n_sites:
        raise ValueError(f"site {i} outside 1..{n_sites}")


def compile_rz(i: int, alpha: float, n_sites: int) -> PulseSchedule:
    """Realizes ``exp(i a/2 Z_i) exp(i a/2 Z_{N+1-i})``; Y pulses at times ``i-1, i``."""
    _check_phys(i, n_sites)
    return _two_blocks(n_sites, 0, "Z", alpha, i - 1, n_sites + 1 - i)


def compile_rx(i: int, alpha: float, n_sites: int) -> PulseSchedule:
    """Realizes ``exp(i a/2 X_i) exp(i a/2 X_{N+1-i})``."""
    _check_phys(i, n_sites)
    return _two_blocks(n_sites, 0, "X", alpha, i, n_sites - i)


def compile_k(i: int, alpha: float, n_sites: int) -> PulseSchedule:
    """Realizes ``exp(i a/2 K_i) exp(i a/2 K_{N+1-i})`` with ``K_i = Z_i X_{i-1} X_{i+1}``."""
    _check_phys(i, n_sites)
    if i == n_sites:
        # same mirror pair as site 1; the direct sequence would need T^-1
        i = 1
    return _two_blocks(n_sites, 1, "X", alpha, i, n_sites - 1 - i)


def xstring_times(L1: int, L2: int, n_sites: int, variant: str = "verified") -> tuple[int, int, int]:
    """Step counts ``(t1, t2, t3)`` of one X-string block.

    ``verified`` places the Y pulses at times ``L1+L2-1, L1+L2`` after the
    rotation, which selects the string centred on site ``L1+L2-1``; the block
    then spans exactly ``N+1`` steps.  ``printed`` is the alternative parameter
    set ``t2=L1+L2-2, t3=N-2L1+2``, kept for comparison only: it selects the
    wrong site and does not close the clock cycle.
    """
    t1 = L2 - L1
    if variant == "verified":
        return t1, L1 + L2 - 1, n_sites - 2 * L2 + 1
    if variant == "printed":
        return t1, L1 + L2 - 2, n_sites - 2 * L1 + 2
    raise ValueError(f"unknown variant {variant!r}")


def compile_xstring(alpha: float, L1: int, L2: int, n_logical: int, variant: str = "verified") -> PulseSchedule:
    """Realizes ``exp(i a/2 X_[L1]...X_[L2])`` and its mirror on interlaced states."""
    if not 1 <= L1 <= L2 <= n_logical:
        raise ValueError(f"need 1 <= L1 <= L2 <= {n_logical}, got L1={L1}, L2={L2}")
    n_sites = chain_length(n_logical)
    t1, t2, t3 = xstring_times(L1, L2, n_sites, variant)
    return _two_blocks(n_sites, t1, "X", alpha, t2, t3)


def controlled_flip_factors(l1: int, l2: int) -> list[tuple[float, int, int]]:
    """``(angle, L1, L2)`` for the four X-string rotations, in execution order.

    Empty ranges (``L1 > L2``, when ``l2 = l1 + 1``) contribute a global phase
    and are dropped.
    """
    factors = [
        (-math.pi / 2, l1, l2 - 1),
        (math.pi / 2, l1 + 1, l2 - 1),
        (-math.pi / 2, l1 + 1, l2),
        (math.pi / 2, l1, l2),
    ]
    return [f for f in factors if f[1] <= f[2]]


def compile_controlled_flip(l1: int, l2: int, n_logical: int) -> PulseSchedule:
    if not 1 <= l1 < l2 <= n_logical:
        raise ValueError(f"need 1 <= l1 < l2 <= {n_logical}, got l1={l1}, l2={l2}")
    n_sites = chain_length(n_logical)
    return PulseSchedule.concat(
        n_sites, (compile_xstring(a, lo, hi, n_logical) for a, lo, hi in controlled_flip_factors(l1, l2))
    )


def compile_gate(gate: Gate, n_logical: int) -> PulseSchedule:
    _validate(gate, n_logical)
    n_sites = chain_length(n_logical)
    if isinstance(gate, RZ):
        return compile_rz(2 * gate.j - 1, gate.alpha, n_sites)
    if isinstance(gate, RX):
        return compile_rx(2 * gate.j - 1, gate.alpha, n_sites)
    if isinstance(gate, XXRot):
        return compile_k(2 * gate.j, gate.alpha, n_sites)
    if isinstance(gate, XStringRot):
        return compile_xstring(gate.alpha, gate.L1, gate.L2, n_logical)
    return compile_controlled_flip(gate.l1, gate.l2, n_logical)


def compile_circuit(circuit: LogicalCircuit) -> tuple[PulseSchedule, ResourceReport]:
    n = circuit.n_logical
    parts = [compile_gate(g, n) for g in circuit.gates]
    schedule = PulseSchedule.concat(chain_length(n), parts)
    report = ResourceReport(n, chain_length(n), schedule.t_steps, tuple(p.t_steps for p in parts))
    return schedule, report


def predict_selection(c: BitVec | Sequence[int], n_sites: int) -> BitVec:
    """Sites whose rotation survives (``s = M_Z c``) for Y pulses at the times set in ``c``."""
    if not isinstance(c, BitVec):
        c = BitVec.from_list(list(c))
    return s_vector(c, n_sites)


def pulse_times(block: PulseSchedule) -> list[int]:
    """Step indices at which Y pulses fire, counted from the first rotation pulse."""
    times, t, started = [], 0, False
    for item in block.items:
        if item is STEP or item == STEP:
            if started:
                t += 1
        elif item.axis == "Y":
            times.append(t)
        else:
            if started:
                break
            started = True
    return times
