"""Readout through total-spin measurements only, and chain-length detection.

The chain carries two mirror copies of an ``n``-qubit register.  Register
bit ``r_j`` lives on site ``[j] = 2j - 1`` and its mirror partner ``rbar_j``
on ``N + 1 - [j]``.  Every measurement is of ``S_Z = sum_i Z_i``; local
information is extracted by conjugating ``S_Z`` with CNOT / Toffoli pairs
that copy register parities onto the two readout sites.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import gf2
from . import statevec as sv
from .compiler import LayoutMap, chain_length
from .statevec import StateVector

Bits = tuple[int, ...]
Solution = tuple[Bits, Bits]


class ReadoutError(ValueError):
    """Protocol precondition violated (layout, readout sites not in |0>)."""


class TranscriptError(ValueError):
    """Outcome differences outside the range a valid transcript can produce."""


class ConstraintError(ValueError):
    """Constraint system inconsistent or not pinned down to the two mirror solutions."""


@dataclass
class ReadoutTranscript:
    n_logical: int
    m: int
    m_j: dict[int, int] = field(default_factory=dict)
    J: tuple[int, ...] = ()
    m_pairs: dict[tuple[int, int], int] = field(default_factory=dict)
    solutions: tuple[Solution, ...] = ()
    model: str = "coherent"

    def to_json(self) -> str:
        record = {
            "n_logical": self.n_logical,
            "model": self.model,
            "m": self.m,
            "m_j": {str(j): self.m_j[j] for j in sorted(self.m_j)},
            "J": list(self.J),
            "m_pairs": {f"{a},{b}": self.m_pairs[(a, b)] for a, b in sorted(self.m_pairs)},
            "solutions": [
                {"r": "".join(map(str, r)), "rbar": "".join(map(str, rb))} for r, rb in self.solutions
            ],
        }
        return json.dumps(record, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReadoutTranscript":
        d = json.loads(text)
        pairs = {}
        for key, val in d["m_pairs"].items():
            a, b = key.split(",")
            pairs[(int(a), int(b))] = val
        sols = tuple(
            (tuple(int(c) for c in s["r"]), tuple(int(c) for c in s["rbar"])) for s in d["solutions"]
        )
        return cls(
            n_logical=d["n_logical"],
            m=d["m"],
            m_j={int(j): v for j, v in d["m_j"].items()},
            J=tuple(d["J"]),
            m_pairs=pairs,
            solutions=sols,
            model=d["model"],
        )


@dataclass(frozen=True)
class ConstraintSystem:
    """Affine GF(2) equations over ``r_1..r_n`` (bits ``0..n-1``) and ``rbar_1..rbar_n`` (bits ``n..2n-1``)."""

    n_logical: int
    rows: tuple[int, ...]
    rhs: tuple[int, ...]

    def describe(self) -> list[str]:
        n = self.n_logical
        names = [f"r{j}" for j in range(1, n + 1)] + [f"rbar{j}" for j in range(1, n + 1)]
        out = []
        for row, b in zip(self.rows, self.rhs):
            terms = [names[k] for k in range(2 * n) if (row >> k) & 1]
            out.append(" + ".join(terms) + f" = {b}")
        return out


def _r(j: int) -> int:
    return 1 << (j - 1)


def _rbar(j: int, n: int) -> int:
    return 1 << (n + j - 1)


def build_constraints(t: ReadoutTranscript, n: int | None = None) -> ConstraintSystem:
    n = t.n_logical if n is None else n
    rows: list[int] = []
    rhs: list[int] = []
    for j in range(1, n + 1):
        if j not in t.m_j:
            raise TranscriptError(f"missing step-2 outcome for j={j}")
        d = t.m - t.m_j[j]
        if d == 0:
            rows += [_r(j), _rbar(j, n)]
            rhs += [0, 0]
        elif d == 2:
            rows.append(_r(j) | _rbar(j, n))
            rhs.append(1)
        elif d == 4:
            rows += [_r(j), _rbar(j, n)]
            rhs += [1, 1]
        else:
            raise TranscriptError(f"m - m({j}) = {d}, expected 0, 2 or 4")
    for (j1, jk), mp in sorted(t.m_pairs.items()):
        d = t.m - mp
        if d == 2:
            rows.append(_r(j1) | _r(jk))
            rhs.append(0)
        elif d == 0:
            rows.append(_r(j1) | _r(jk))
            rhs.append(1)
        else:
            raise TranscriptError(f"m - m({j1},{jk}) = {d}, expected 0 or 2")
    return ConstraintSystem(n, tuple(rows), tuple(rhs))


def _unpack(v: int, n: int) -> Solution:
    r = tuple((v >> (j - 1)) & 1 for j in range(1, n + 1))
    rb = tuple((v >> (n + j - 1)) & 1 for j in range(1, n + 1))
    return r, rb


def solve_constraints(system: ConstraintSystem) -> tuple[Solution, ...]:
    n = system.n_logical
    sol = gf2.solve(system.rows, system.rhs, 2 * n)
    if sol is None:
        raise ConstraintError("readout constraints are inconsistent")
    if sol.dimension > 1:
        raise ConstraintError(
            f"readout constraints leave a {sol.dimension}-dimensional solution space; "
            "state is not a two-branch mirror superposition"
        )
    solutions = tuple(sorted(_unpack(v, n) for v in sol.enumerate()))
    if len(solutions) == 2:
        (ra, rba), (rb, rbb) = solutions
        if not (ra == rbb and rba == rb):
            raise ConstraintError(f"two solutions are not mirror exchanges: {solutions}")
    return solutions


def _ideal_cnot_pair(s: StateVector, layout: LayoutMap, j: int) -> StateVector:
    src, dst = layout.physical(j), layout.readout_site
    sv.apply_cnot(s, src, dst)
    return sv.apply_cnot(s, layout.mirror(src), layout.mirror(dst))


def _ideal_toffoli_pair(s: StateVector, layout: LayoutMap, j1: int, jk: int) -> StateVector:
    a, b, dst = layout.physical(j1), layout.physical(jk), layout.readout_site
    sv.apply_toffoli(s, a, b, dst)
    return sv.apply_toffoli(s, layout.mirror(a), layout.mirror(b), layout.mirror(dst))


def check_layout(s: StateVector, n_logical: int, tol: float = 1e-9) -> LayoutMap:
    layout = LayoutMap(n_logical)
    if s.n_qubits != layout.n_sites:
        raise ReadoutError(f"state has {s.n_qubits} sites, layout for n={n_logical} needs {layout.n_sites}")
    for site in layout.readout_sites:
        p1 = s.site_one_probability(site)
        if p1 > tol:
            raise ReadoutError(f"readout site {site} is not in |0> (P(1) = {p1:.3g})")
    return layout


def run_protocol(
    s: StateVector,
    n_logical: int,
    model: str = "coherent",
    rng=None,
    cnot_pair: Callable[[StateVector, LayoutMap, int], StateVector] | None = None,
    toffoli_pair: Callable[[StateVector, LayoutMap, int, int], StateVector] | None = None,
) -> tuple[ReadoutTranscript, StateVector]:
    """Three-step readout; the input state is left untouched.

    ``cnot_pair``/``toffoli_pair`` replace the ideal conjugating gates, e.g.
    with compiled schedules.
    """
    layout = check_layout(s, n_logical)
    cnot_pair = cnot_pair or _ideal_cnot_pair
    toffoli_pair = toffoli_pair or _ideal_toffoli_pair
    rng = np.random.default_rng(rng)
    state = s.copy()

    rec, state = sv.measure_sz(state, model, rng)
    m = rec.outcome

    m_j = {}
    for j in range(1, n_logical + 1):
        cnot_pair(state, layout, j)
        rec, state = sv.measure_sz(state, model, rng)
        m_j[j] = rec.outcome
        cnot_pair(state, layout, j)

    J = tuple(j for j in range(1, n_logical + 1) if m - m_j[j] == 2)
    m_pairs = {}
    for jk in J[1:]:
        toffoli_pair(state, layout, J[0], jk)
        rec, state = sv.measure_sz(state, model, rng)
        m_pairs[(J[0], jk)] = rec.outcome
        toffoli_pair(state, layout, J[0], jk)

    t = ReadoutTranscript(n_logical, m, m_j, J, m_pairs, model=model)
    t.solutions = solve_constraints(build_constraints(t))
    return t, state


def _as_bits(bits) -> Bits:
    if isinstance(bits, str):
        return tuple(int(c) for c in bits)
    return tuple(int(b) for b in bits)


def prepare_registers(n_logical: int, branches: Sequence[tuple[complex, object, object]]) -> StateVector:
    """Superposition ``sum_a c_a |r^a>|rbar^a>`` with ancillas and readout sites in ``|0>``.

    Each branch is ``(amplitude, r, rbar)`` with bit strings of length ``n``.
    """
    layout = LayoutMap(n_logical)
    n_sites = layout.n_sites
    amps = np.zeros(1 << n_sites, dtype=complex)
    for c, r, rb in branches:
        r, rb = _as_bits(r), _as_bits(rb)
        if len(r) != n_logical or len(rb) != n_logical:
            raise ValueError(f"register strings must have length {n_logical}")
        idx = 0
        for j in range(1, n_logical + 1):
            site = layout.physical(j)
            if r[j - 1]:
                idx |= sv.site_bit(site, n_sites)
            if rb[j - 1]:
                idx |= sv.site_bit(layout.mirror(site), n_sites)
        amps[idx] += c
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ValueError("branches cancel to the zero vector")
    return StateVector(n_sites, amps / norm)


def mirror_pair_state(n_logical: int, r1, r2, relative_phase: complex = 1.0) -> StateVector:
    """``(|r1>|r2> + phase |r2>|r1>)``, normalized; a basis state when ``r1 == r2``."""
    r1, r2 = _as_bits(r1), _as_bits(r2)
    if r1 == r2:
        return prepare_registers(n_logical, [(1.0, r1, r1)])
    return prepare_registers(n_logical, [(1.0, r1, r2), (relative_phase, r2, r1)])


def true_solutions(r1, r2) -> tuple[Solution, ...]:
    """Register contents modulo interchange, in the solver's canonical order."""
    r1, r2 = _as_bits(r1), _as_bits(r2)
    if r1 == r2:
        return ((r1, r1),)
    return tuple(sorted({(r1, r2), (r2, r1)}))


# chain-length detection ----------------------------------------------------

@dataclass(frozen=True)
class LengthDetection:
    n_sites: int | None
    signal: tuple[float, ...]

    @property
    def conclusive(self) -> bool:
        return self.n_sites is not None


def detect_chain_length(
    prepare: Callable[[], object],
    step: Callable[[object], object],
    measure: Callable[[object], float],
    t_max: int,
    tol: float = 1e-9,
) -> LengthDetection:
    """Find ``N`` from the revival of ``<S_Z(t)>`` at ``t = N + 1``.

    Each time ``t`` is a fresh trial: prepare, step ``t`` times, measure.
    """
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    signal = []
    for t in range(t_max + 1):
        state = prepare()
        for _ in range(t):
            state = step(state)
        signal.append(float(measure(state)))
        if t > 0 and signal[0] != 0 and abs(signal[t] - signal[0]) <= tol:
            return LengthDetection(t - 1, tuple(signal))
    return LengthDetection(None, tuple(signal))


def hidden_chain(n_sites: int, shots: int = 0, rng=None):
    """``(prepare, step, measure)`` oracles for a chain whose length the caller does not read.

    With ``shots > 0`` the measurement returns a sample mean of ``S_Z``
    outcomes instead of the exact expectation.
    """
    gen = np.random.default_rng(rng)

    def prepare():
        return sv.init_zero(n_sites)

    def step(state):
        return sv.apply_T(state)

    def measure(state):
        if shots <= 0:
            return sv.expectation_sz(state)
        dist = sv.sz_distribution(state)
        ms = np.array(list(dist))
        ps = np.array([dist[m] for m in ms])
        return float(gen.choice(ms, size=shots, p=ps / ps.sum()).mean())

    return prepare, step, measure


def sz_signal(n_sites: int, t_max: int) -> np.ndarray:
    """Exact ``<S_Z(t)>`` for ``t = 0..t_max`` from ``|0...0>``."""
    state = sv.init_zero(n_sites)
    out = [sv.expectation_sz(state)]
    for _ in range(t_max):
        sv.apply_T(state)
        out.append(sv.expectation_sz(state))
    return np.array(out)


__all__ = [
    "ConstraintError",
    "ConstraintSystem",
    "LengthDetection",
    "ReadoutError",
    "ReadoutTranscript",
    "TranscriptError",
    "build_constraints",
    "chain_length",
    "check_layout",
    "detect_chain_length",
    "hidden_chain",
    "mirror_pair_state",
    "prepare_registers",
    "run_protocol",
    "solve_constraints",
    "sz_signal",
    "true_solutions",
]
