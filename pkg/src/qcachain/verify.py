"""Verification suites behind ``qcachain verify``.

Each suite returns a list of :class:`Check` rows.  Suites take the step map
through ``tmap_factory`` so a deliberately corrupted map can be injected to
prove a suite is able to fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import compiler as cc
from . import readout as ro
from . import statevec as sv
from . import symplectic as sp
from .schedule import STEP, PulseSchedule

DEFAULT_ANGLES = (math.pi / 2, -math.pi / 2, math.pi / 4, -math.pi / 4, 1.0, 0.0)

TmapFactory = Callable[[int], sp.TransitionMap]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    ok: bool
    detail: str = ""


def corrupted_map(n: int) -> sp.TransitionMap:
    """Chain map with the first edge removed (or a self-loop when ``N = 1``)."""
    gamma = list(sp.line_graph(n))
    if n == 1:
        gamma[0] = 1
    else:
        gamma[0] &= ~0b10
        gamma[1] &= ~0b01
    return sp.build_transition_map(n, gamma)


def suite_reversal(max_n: int = 32, dense_max_n: int = 10,
                   tmap_factory: TmapFactory = sp.build_transition_map) -> list[Check]:
    out = []
    for n in range(1, max_n + 1):
        rep = sp.verify_bit_reversal(n, tmap_factory(n))
        detail = "" if rep.ok else f"{len(rep.failures)} failures, first {rep.failures[0]}"
        out.append(Check("reversal", f"symplectic N={n}", rep.ok, detail))
    for n in range(1, min(max_n, dense_max_n) + 1):
        u = sv.schedule_unitary(PulseSchedule(n, (STEP,) * (n + 1)))
        ov = sv.phase_overlap(u, sv.reflection_matrix(n))
        out.append(Check("reversal", f"dense N={n}", ov >= 1 - 1e-9, f"overlap={ov:.15f}"))
    return out


def suite_mz(max_n: int = 32, tmap_factory: TmapFactory = sp.build_transition_map) -> list[Check]:
    out = []
    for n in range(1, max_n + 1):
        tmap = tmap_factory(n)
        bad = []
        for i in range(1, n + 1):
            for t in range(-1, n + 1):
                if sp.mz_definitional(i, t, tmap) != sp.mz_closed_form(i, t, n):
                    bad.append((i, t))
            for t in range(0, n):
                nbrs = sum(sp.mz_definitional(j, t, tmap) for j in (i - 1, i + 1) if 1 <= j <= n)
                if sp.mz_definitional(i, t + 1, tmap) != (sp.mz_definitional(i, t - 1, tmap) + nbrs) & 1:
                    bad.append(("recursion", i, t))
                if sp.mx_definitional(i, t + 1, tmap) != sp.mz_definitional(i, t, tmap):
                    bad.append(("mx", i, t))
        out.append(Check("mz", f"N={n}", not bad, f"{len(bad)} mismatches" if bad else ""))
    return out


def suite_appendix(max_n: int = 16, tmap_factory: TmapFactory = sp.build_transition_map) -> list[Check]:
    out = []
    for n in range(1, max_n + 1):
        tmap = tmap_factory(n)
        bad = []
        for p in range(1, n + 1):
            w = sp.PauliWord.single(n, p, "Z")
            for t in range(0, 2 * (n + 1) + 1):
                fold = sp.foldback_solution(p, t, n)
                if fold != sp.boundary_recursion(p, t, n) or fold.bits != w.z:
                    bad.append(("fold", p, t))
                for i in range(1, n + 1):
                    odd = (p - i + t) & 1
                    if odd and (w.z >> (i - 1)) & 1 or not odd and (w.x >> (i - 1)) & 1:
                        bad.append(("checkerboard", p, t, i))
                if t <= n + 1 and not (w.is_hermitian() and w.sign == 1):
                    bad.append(("phase", p, t))
                w = sp.conjugate_by_T(w, tmap)
        out.append(Check("appendix", f"N={n}", not bad, f"first {bad[0]}" if bad else ""))
    return out


def logical_columns(layout: cc.LayoutMap) -> np.ndarray:
    """Basis columns with every ancilla and readout site in ``|0>``."""
    n_sites = layout.n_sites
    sites = layout.logical_sites
    cols = []
    for b in range(1 << len(sites)):
        idx = 0
        for k, site in enumerate(sites):
            if (b >> k) & 1:
                idx |= sv.site_bit(site, n_sites)
        cols.append(idx)
    out = np.zeros((1 << n_sites, len(cols)), dtype=complex)
    out[cols, np.arange(len(cols))] = 1.0
    return out


def _x_word(sites: Iterable[int], n_sites: int) -> sp.PauliWord:
    x = 0
    for i in sites:
        x |= 1 << (i - 1)
    return sp.PauliWord(n_sites, 0, x, 0)


def logical_target(gate: cc.Gate, layout: cc.LayoutMap) -> list[tuple[sp.PauliWord, float]]:
    """Rotations ``exp(i a/2 P)`` whose product is the ideal gate on both register copies."""
    n_sites = layout.n_sites
    mir = layout.mirror
    if isinstance(gate, cc.RZ):
        i = layout.physical(gate.j)
        return [(sp.PauliWord.single(n_sites, s, "Z"), gate.alpha) for s in (i, mir(i))]
    if isinstance(gate, cc.RX):
        i = layout.physical(gate.j)
        return [(sp.PauliWord.single(n_sites, s, "X"), gate.alpha) for s in (i, mir(i))]
    if isinstance(gate, cc.XXRot):
        a, b = layout.physical(gate.j), layout.physical(gate.j + 1)
        return [(_x_word((a, b), n_sites), gate.alpha), (_x_word((mir(a), mir(b)), n_sites), gate.alpha)]
    if isinstance(gate, cc.XStringRot):
        left = [layout.physical(l) for l in range(gate.L1, gate.L2 + 1)]
        return [(_x_word(left, n_sites), gate.alpha), (_x_word([mir(i) for i in left], n_sites), gate.alpha)]
    out = []
    for angle, lo, hi in cc.controlled_flip_factors(gate.l1, gate.l2):
        out += logical_target(cc.XStringRot(angle, lo, hi), layout)
    return out


def physical_target(kind: str, i: int, n_sites: int) -> list[sp.PauliWord]:
    """Exact full-chain generators for the single-site sequences (``Z``, ``X`` or ``K``)."""
    words = []
    for s in (i, n_sites + 1 - i):
        if kind == "K":
            x = sum(1 << (j - 1) for j in (s - 1, s + 1) if 1 <= j <= n_sites)
            words.append(sp.PauliWord(n_sites, 1 << (s - 1), x, 0))
        else:
            words.append(sp.PauliWord.single(n_sites, s, kind))
    return words


def apply_rotations(columns: np.ndarray, n_sites: int, rotations) -> np.ndarray:
    out = columns
    for word, angle in rotations:
        out = sv.pauli_rotation_columns(out, n_sites, word, angle)
    return out


def gate_list(n: int, angles=DEFAULT_ANGLES) -> list[cc.Gate]:
    gates: list[cc.Gate] = []
    for a in angles:
        gates += [cc.RZ(j, a) for j in range(1, n + 1)]
        gates += [cc.RX(j, a) for j in range(1, n + 1)]
        gates += [cc.XXRot(j, a) for j in range(1, n)]
        gates += [cc.XStringRot(a, l1, l2) for l1 in range(1, n + 1) for l2 in range(l1, n + 1)]
    gates += [cc.ControlledFlip(l1, l2) for l1 in range(1, n + 1) for l2 in range(l1 + 1, n + 1)]
    return gates


def check_gate(gate: cc.Gate, n: int, tol: float = 1e-8) -> list[Check]:
    layout = cc.LayoutMap(n)
    n_sites = layout.n_sites
    sched = cc.compile_gate(gate, n)
    u = sv.schedule_unitary(sched).matrix
    name = f"n={n} {gate}"
    out = []
    if isinstance(gate, (cc.RZ, cc.RX, cc.XXRot)):
        kind = {cc.RZ: "Z", cc.RX: "X", cc.XXRot: "K"}[type(gate)]
        site = 2 * gate.j if kind == "K" else layout.physical(gate.j)
        rots = [(w, gate.alpha) for w in physical_target(kind, site, n_sites)]
        want = apply_rotations(np.eye(1 << n_sites, dtype=complex), n_sites, rots)
        ov = sv.phase_overlap(u, want)
        out.append(Check("gates", f"{name} full chain", ov >= 1 - tol, f"overlap={ov:.12f}"))
    e = logical_columns(layout)
    got = u @ e
    ov = sv.phase_overlap(got, apply_rotations(e, n_sites, logical_target(gate, layout)))
    out.append(Check("gates", f"{name} logical", ov >= 1 - tol, f"overlap={ov:.12f}"))
    kept = float(np.min(np.linalg.norm(e.T @ got, axis=0) ** 2))
    out.append(Check("gates", f"{name} ancillas", kept >= 1 - 1e-9, f"min kept={kept:.12f}"))
    comm = mirror_commutator(u)
    out.append(Check("gates", f"{name} mirror symmetric", comm <= 1e-9, f"max|[U,R]|={comm:.2e}"))
    return out


def mirror_commutator(u: np.ndarray) -> float:
    """``max |U R - R U|`` using that ``R`` permutes basis states by bit reversal."""
    n = int(u.shape[0]).bit_length() - 1
    rev = sv.reversal_permutation(n)
    return float(np.max(np.abs(u[:, rev] - u[rev, :])))


def suite_gates(max_n: int = 2, angles=DEFAULT_ANGLES, tol: float = 1e-8) -> list[Check]:
    out = []
    for n in range(1, max_n + 1):
        for gate in gate_list(n, angles):
            out += check_gate(gate, n, tol)
    return out


def suite_readout(max_n: int = 3, trials: int = 20, seed: int = 0) -> list[Check]:
    out = []
    rng = np.random.default_rng(seed)
    for n in range(1, max_n + 1):
        for model in sv.MODELS:
            fails = 0
            for trial in range(trials):
                r1 = tuple(int(b) for b in rng.integers(0, 2, n))
                r2 = r1 if trial % 2 == 0 else tuple(int(b) for b in rng.integers(0, 2, n))
                state = ro.mirror_pair_state(n, r1, r2, np.exp(1j * rng.uniform(0, 2 * math.pi)))
                t, _ = ro.run_protocol(state, n, model, rng=int(rng.integers(1 << 31)))
                fails += t.solutions != ro.true_solutions(r1, r2)
            out.append(Check("readout", f"n={n} {model}", fails == 0, f"{fails}/{trials} wrong"))
    return out


SUITES = ("reversal", "mz", "gates", "appendix", "readout")


def run_suite(name: str, max_n: int | None = None, inject_fault: bool = False, seed: int = 0,
              tol: float = 1e-8) -> list[Check]:
    """Run one suite; ``tol`` is the overlap tolerance of the gate checks."""
    factory = corrupted_map if inject_fault else sp.build_transition_map
    if name == "reversal":
        return suite_reversal(max_n or 32, tmap_factory=factory)
    if name == "mz":
        return suite_mz(max_n or 32, tmap_factory=factory)
    if name == "appendix":
        return suite_appendix(max_n or 16, tmap_factory=factory)
    if name == "gates":
        return suite_gates(max_n or 2, tol=tol)
    if name == "readout":
        return suite_readout(max_n or 3, seed=seed)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
