"""Exact Heisenberg-picture engine for the Hadamard + controlled-phase automaton.

Pauli operators are tracked in binary symplectic form.  A symplectic vector
is packed into one int: bits ``0..N-1`` hold the z-part (site ``k+1`` at bit
``k``), bits ``N..2N-1`` the x-part.

Phase convention: a :class:`PauliWord` denotes ``i**phase * prod_k Z_k**v_k X_k**w_k``
with sites in ascending order.  Because ``ZX = iY``, a Hermitian ``Y`` on one
site is ``phase=3, v=w=1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import gf2

_LETTERS = {(0, 0): "I", (0, 1): "X", (1, 0): "Z", (1, 1): "Y"}
_PAULI_2x2 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class BitVec:
    """Fixed-length GF(2) vector; component ``k`` (0-based) lives in bit ``k``."""

    bits: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("BitVec length must be positive")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits {self.bits:#x} do not fit in length {self.length}")

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "BitVec":
        return cls(sum((int(b) & 1) << k for k, b in enumerate(values)), len(values))

    @classmethod
    def from_indices(cls, indices, length: int) -> "BitVec":
        bits = 0
        for k in indices:
            bits |= 1 << k
        return cls(bits, length)

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(0, length)

    @classmethod
    def ones(cls, length: int) -> "BitVec":
        return cls((1 << length) - 1, length)

    def to_list(self) -> list[int]:
        return [(self.bits >> k) & 1 for k in range(self.length)]

    def indices(self) -> list[int]:
        return [k for k in range(self.length) if (self.bits >> k) & 1]

    def __getitem__(self, k: int) -> int:
        if not 0 <= k < self.length:
            raise IndexError(k)
        return (self.bits >> k) & 1

    def __len__(self) -> int:
        return self.length

    def __xor__(self, other: "BitVec") -> "BitVec":
        if other.length != self.length:
            raise ValueError("length mismatch")
        return BitVec(self.bits ^ other.bits, self.length)

    __add__ = __xor__

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_list())


@dataclass(frozen=True)
class PauliWord:
    """``i**phase * Z^z X^x`` on ``n`` sites; ``z``/``x`` are site bitsets."""

    n: int
    z: int
    x: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("PauliWord needs at least one site")
        mask = (1 << self.n) - 1
        if self.z & ~mask or self.x & ~mask or self.z < 0 or self.x < 0:
            raise ValueError("z/x bits exceed the number of sites")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliWord":
        return cls(n, 0, 0, 0)

    @classmethod
    def single(cls, n: int, site: int, axis: str) -> "PauliWord":
        """Hermitian single-site Pauli ``axis`` at 1-based ``site``."""
        if not 1 <= site <= n:
            raise ValueError(f"site {site} outside 1..{n}")
        bit = 1 << (site - 1)
        axis = axis.upper()
        if axis == "X":
            return cls(n, 0, bit, 0)
        if axis == "Z":
            return cls(n, bit, 0, 0)
        if axis == "Y":
            return cls(n, bit, bit, 3)
        raise ValueError(f"unknown axis {axis!r}")

    @classmethod
    def all_y(cls, n: int) -> "PauliWord":
        mask = (1 << n) - 1
        return cls(n, mask, mask, 3 * n)

    @classmethod
    def from_label(cls, label: str) -> "PauliWord":
        """Parse ``"+IZXY"``, ``"-YZ"``, ``"iXX"``; letters are Hermitian site factors."""
        coeff = 0
        body = label.strip()
        for prefix, power in (("-i", 3), ("+i", 1), ("i", 1), ("-", 2), ("+", 0)):
            if body.startswith(prefix):
                coeff = power
                body = body[len(prefix):]
                break
        z = x = 0
        n_y = 0
        for k, ch in enumerate(body):
            if ch == "X":
                x |= 1 << k
            elif ch == "Z":
                z |= 1 << k
            elif ch == "Y":
                x |= 1 << k
                z |= 1 << k
                n_y += 1
            elif ch != "I":
                raise ValueError(f"bad Pauli letter {ch!r} in {label!r}")
        return cls(len(body), z, x, coeff + 3 * n_y)

    @property
    def z_vec(self) -> BitVec:
        return BitVec(self.z, self.n)

    @property
    def x_vec(self) -> BitVec:
        return BitVec(self.x, self.n)

    @property
    def symplectic(self) -> int:
        return self.z | (self.x << self.n)

    @property
    def n_y(self) -> int:
        return (self.z & self.x).bit_count()

    def is_hermitian(self) -> bool:
        return (self.phase - self.n_y) % 2 == 0

    @property
    def sign(self) -> int:
        """Real coefficient ``+-1`` in front of the Hermitian letter product."""
        rel = (self.phase - 3 * self.n_y) % 4
        if rel == 0:
            return 1
        if rel == 2:
            return -1
        raise ValueError("word is anti-Hermitian; it has no real sign")

    def letters(self) -> str:
        return "".join(
            _LETTERS[((self.z >> k) & 1, (self.x >> k) & 1)] for k in range(self.n)
        )

    def __str__(self) -> str:
        rel = (self.phase - 3 * self.n_y) % 4
        return ("+", "+i", "-", "-i")[rel] + self.letters()

    def __mul__(self, other: "PauliWord") -> "PauliWord":
        if other.n != self.n:
            raise ValueError("site-count mismatch")
        # X^w1 Z^v2 = (-1)^{w1.v2} Z^v2 X^w1
        swap = (self.x & other.z).bit_count()
        return PauliWord(
            self.n,
            self.z ^ other.z,
            self.x ^ other.x,
            self.phase + other.phase + 2 * swap,
        )

    def commutes_with(self, other: "PauliWord") -> bool:
        return symplectic_product(self, other) == 0

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n`` matrix; site 1 is the leftmost Kronecker factor."""
        out = np.array([[1.0 + 0j]])
        for k in range(self.n):
            v, w = (self.z >> k) & 1, (self.x >> k) & 1
            factor = np.eye(2, dtype=complex)
            if v:
                factor = factor @ _PAULI_2x2["Z"]
            if w:
                factor = factor @ _PAULI_2x2["X"]
            out = np.kron(out, factor)
        return (1j ** self.phase) * out


def symplectic_product(a: PauliWord, b: PauliWord) -> int:
    """``a^T F b`` mod 2: 1 iff the words anticommute."""
    return ((a.z & b.x).bit_count() + (a.x & b.z).bit_count()) & 1


@dataclass(frozen=True)
class TransitionMap:
    """Binary symplectic matrix of one automaton step.

    ``C = [[Gamma, I], [I, 0]]`` acting on ``(z; x)``; ``gamma`` holds the
    interaction-graph adjacency rows.
    """

    n_sites: int
    gamma: tuple[int, ...]
    C: tuple[int, ...] = field(repr=False)
    is_chain: bool = False

    @property
    def gamma_lower(self) -> tuple[int, ...]:
        return tuple(row & ((1 << k) - 1) for k, row in enumerate(self.gamma))

    def gamma_apply(self, v: int) -> int:
        if self.is_chain:
            return ((v << 1) ^ (v >> 1)) & ((1 << self.n_sites) - 1)
        return gf2.matvec(self.gamma, v)

    def lower_form(self, v: int) -> int:
        """``v^T Gamma_L v`` mod 2 (pairs of adjacent set sites)."""
        if self.is_chain:
            return (v & (v >> 1)).bit_count() & 1
        return gf2.dot(gf2.matvec(self.gamma_lower, v), v)

    @property
    def F(self) -> tuple[int, ...]:
        return block_swap(self.n_sites)

    @property
    def C_inverse(self) -> tuple[int, ...]:
        # F C^{-1} = C F and F^2 = 1
        F = self.F
        return gf2.matmul(gf2.matmul(F, self.C), F)

    def dense(self) -> np.ndarray:
        return np.array(gf2.to_dense(self.C, 2 * self.n_sites), dtype=np.uint8)


def block_swap(n: int) -> tuple[int, ...]:
    return tuple(1 << (k + n) for k in range(n)) + tuple(1 << k for k in range(n))


def line_graph(n: int) -> tuple[int, ...]:
    mask = (1 << n) - 1
    return tuple(((1 << (k + 1)) | (1 << k >> 1)) & mask for k in range(n))


def build_transition_map(n_sites: int, gamma: Sequence[int] | None = None) -> TransitionMap:
    """Step matrix for ``n_sites`` qubits; ``gamma`` defaults to the open chain."""
    if n_sites < 1:
        raise ValueError(f"chain length must be positive, got {n_sites}")
    is_chain = gamma is None
    gamma = line_graph(n_sites) if gamma is None else tuple(gamma)
    if len(gamma) != n_sites:
        raise ValueError("gamma must have one row per site")
    # rows 0..N-1: z' = Gamma z + x ; rows N..2N-1: x' = z
    C = tuple(row | (1 << (k + n_sites)) for k, row in enumerate(gamma))
    C += tuple(1 << k for k in range(n_sites))
    return TransitionMap(n_sites, gamma, C, is_chain)


def _check(w: PauliWord, tmap: TransitionMap) -> None:
    if w.n != tmap.n_sites:
        raise ValueError(f"word on {w.n} sites, map on {tmap.n_sites}")


def conjugate_by_T(w: PauliWord, tmap: TransitionMap) -> PauliWord:
    """Exact ``T w T^dagger``.

    Images ``Z_i -> Z_nbr X_i`` and ``X_i -> Z_i`` (both with sign +1);
    reordering the site-ordered product into Z-before-X form costs
    ``(-1)^{v.w + v^T Gamma_L v}``.
    """
    _check(w, tmap)
    v, x = w.z, w.x
    z_new = tmap.gamma_apply(v) ^ x
    flips = (v & x).bit_count() + tmap.lower_form(v)
    return PauliWord(w.n, z_new, v, w.phase + 2 * flips)


def conjugate_by_T_inverse(w: PauliWord, tmap: TransitionMap) -> PauliWord:
    """Exact ``T^dagger w T``: ``Z_i -> X_i``, ``X_i -> Z_i X_nbr``."""
    _check(w, tmap)
    v, x = w.z, w.x
    x_new = v ^ tmap.gamma_apply(x)
    flips = (v & x).bit_count() + tmap.lower_form(x)
    return PauliWord(w.n, x, x_new, w.phase + 2 * flips)


def conjugate_by_global_y(w: PauliWord) -> PauliWord:
    """Conjugation by the product of ``Y`` on every site (phase-convention free)."""
    return PauliWord(w.n, w.z, w.x, w.phase + 2 * (w.z.bit_count() + w.x.bit_count()))


def epsilon_increment(w: PauliWord, tmap: TransitionMap) -> int:
    """Sign-bit update of one step, ``z^T Gamma_L z + x^T z`` mod 2, via explicit matrices."""
    _check(w, tmap)
    lower = gf2.matvec(tmap.gamma_lower, w.z)
    return (gf2.dot(lower, w.z) + gf2.dot(w.x, w.z)) & 1


def split_phase(w: PauliWord) -> tuple[int, int]:
    """Decompose ``phase = delta + 2 epsilon`` with ``delta = x.z`` mod 2."""
    delta = (w.x & w.z).bit_count() & 1
    rest = (w.phase - delta) % 4
    if rest % 2:
        raise ValueError("phase parity inconsistent with x.z; word is not Hermitian")
    return delta, rest // 2


def propagate(site: int, axis: str, t: int, tmap: TransitionMap) -> PauliWord:
    """``T^t A_site T^-t`` for ``A`` in {X, Y, Z}; negative ``t`` runs backwards."""
    w = PauliWord.single(tmap.n_sites, site, axis)
    return evolve(w, t, tmap)


def evolve(w: PauliWord, t: int, tmap: TransitionMap) -> PauliWord:
    step = conjugate_by_T if t >= 0 else conjugate_by_T_inverse
    for _ in range(abs(t)):
        w = step(w, tmap)
    return w


@lru_cache(maxsize=4096)
def _power_times_all_ones(tmap: TransitionMap, t: int) -> int:
    ones = (1 << (2 * tmap.n_sites)) - 1
    if t >= 0:
        return gf2.matvec(gf2.matpow(tmap.C, t), ones)
    return gf2.matvec(gf2.matpow(tmap.C_inverse, -t), ones)


def mz_definitional(i: int, t: int, tmap: TransitionMap) -> int:
    """``a_{Z_i}^T C^t a_Y``: the z-component ``i`` of ``C^t`` applied to all-ones."""
    if not 1 <= i <= tmap.n_sites:
        raise ValueError(f"site {i} outside 1..{tmap.n_sites}")
    return (_power_times_all_ones(tmap, t) >> (i - 1)) & 1


def mx_definitional(i: int, t: int, tmap: TransitionMap) -> int:
    if not 1 <= i <= tmap.n_sites:
        raise ValueError(f"site {i} outside 1..{tmap.n_sites}")
    return (_power_times_all_ones(tmap, t) >> (tmap.n_sites + i - 1)) & 1


def theta(x: int) -> int:
    return 1 if x >= 0 else 0


def mz_closed_form(i: int, t: int, n_sites: int) -> int:
    if not -1 <= t <= n_sites:
        raise ValueError(f"closed form holds only for -1 <= t <= N, got t={t}")
    if not 1 <= i <= n_sites:
        raise ValueError(f"site {i} outside 1..{n_sites}")
    return (theta(i - t - 1) + theta(t + i - n_sites - 1)) & 1


def mz_matrix(n_sites: int) -> np.ndarray:
    """``N x (N+1)`` selection matrix over times ``0..N``."""
    return np.array(
        [[mz_closed_form(i, t, n_sites) for t in range(n_sites + 1)] for i in range(1, n_sites + 1)],
        dtype=np.uint8,
    )


def s_vector(c: BitVec, n_sites: int) -> BitVec:
    """Sites whose Z picks up a sign under the accumulated Y pulses at times ``c``."""
    if c.length != n_sites + 1:
        raise ValueError(f"c must cover times 0..{n_sites} (length {n_sites + 1}), got {c.length}")
    s = 0
    for t in c.indices():
        for i in range(1, n_sites + 1):
            if mz_closed_form(i, t, n_sites):
                s ^= 1 << (i - 1)
    return BitVec(s, n_sites)


def accumulated_y(c: BitVec, tmap: TransitionMap) -> PauliWord:
    """Product ``(T^-N Y^{c_N} T^N) ... (T^-1 Y^{c_1} T) Y^{c_0}`` with exact phase."""
    n = tmap.n_sites
    if c.length != n + 1:
        raise ValueError(f"c must have length {n + 1}")
    acc = PauliWord.identity(n)
    y = PauliWord.all_y(n)
    back = y
    factors = []
    for t in range(n + 1):
        if c[t]:
            factors.append(back)
        back = conjugate_by_T_inverse(back, tmap)
    for f in reversed(factors):
        acc = acc * f
    return acc


@dataclass
class BitReversalReport:
    n_sites: int
    ok: bool
    failures: list[tuple[str, int, str]]


def verify_bit_reversal(n_sites: int, tmap: TransitionMap | None = None) -> BitReversalReport:
    """Check ``T^{N+1} A_p T^{-N-1} = A_{N+1-p}`` with sign +1 for A in {X, Z}."""
    tmap = build_transition_map(n_sites) if tmap is None else tmap
    failures = []
    for axis in "ZX":
        for p in range(1, n_sites + 1):
            got = propagate(p, axis, n_sites + 1, tmap)
            want = PauliWord.single(n_sites, n_sites + 1 - p, axis)
            if got != want:
                failures.append((axis, p, str(got)))
    return BitReversalReport(n_sites, not failures, failures)


def free_space_solution(p: int, i: int, t: int) -> int:
    """Infinite-chain z-pattern seeded by ``Z_p``: light cone with checkerboard parity."""
    d = p - i
    return ((theta(d + t) + theta(d - t - 1)) & 1) * ((d + t + 1) & 1)


def foldback_solution(p: int, t: int, n_sites: int) -> BitVec:
    """Boundary solution from the free-space one by image folding with period ``2(N+1)``."""
    if not 1 <= p <= n_sites:
        raise ValueError(f"site {p} outside 1..{n_sites}")
    if t < -1:
        raise ValueError("fold-back solution is defined for t >= -1")
    period = 2 * (n_sites + 1)
    # images outside |j - p| <= t vanish
    l_max = (abs(p) + max(t, 0) + n_sites) // period + 1
    bits = 0
    for i in range(1, n_sites + 1):
        acc = 0
        for l in range(-l_max, l_max + 1):
            acc += free_space_solution(p, i + l * period, t)
            acc += free_space_solution(p, -i + l * period, t)
        if acc & 1:
            bits |= 1 << (i - 1)
    return BitVec(bits, n_sites)


def boundary_recursion(p: int, t: int, n_sites: int) -> BitVec:
    """Iterate ``v(t+1) = Gamma v(t) + v(t-1)`` from ``v(-1)=0, v(0)=e_p``."""
    if t < -1:
        raise ValueError("t must be >= -1")
    mask = (1 << n_sites) - 1
    prev, cur = 0, 1 << (p - 1)
    if t == -1:
        return BitVec(0, n_sites)
    for _ in range(t):
        prev, cur = cur, (((cur << 1) ^ (cur >> 1)) & mask) ^ prev
    return BitVec(cur, n_sites)


@dataclass(frozen=True)
class LightCone:
    p: int
    axis: str
    n_sites: int
    rows: tuple[str, ...]
    susceptible: tuple[int, ...]

    def to_text(self, annotate: bool = True) -> str:
        width = len(str(len(self.rows) - 1))
        lines = []
        for t, row in enumerate(self.rows):
            line = f"{t:>{width}} {row}"
            if annotate:
                line += "  *" if self.susceptible[t] else "   "
            lines.append(line.rstrip())
        return "\n".join(lines) + "\n"

    def to_svg(self, cell: int = 16) -> str:
        colors = {"X": "#d62728", "Z": "#1f77b4", "Y": "#9467bd"}
        h = cell * len(self.rows)
        w = cell * self.n_sites
        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">',
            f'<rect width="{w}" height="{h}" fill="#ffffff"/>',
        ]
        for t, row in enumerate(self.rows):
            for k, ch in enumerate(row):
                if ch == "I":
                    continue
                parts.append(
                    f'<rect x="{k * cell}" y="{t * cell}" width="{cell}" height="{cell}" '
                    f'fill="{colors[ch]}"><title>t={t} site={k + 1} {ch}</title></rect>'
                )
        parts.append("</svg>")
        return "\n".join(parts) + "\n"


def render_lightcone(p: int, axis: str, n_sites: int, t_max: int,
                     tmap: TransitionMap | None = None) -> LightCone:
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    tmap = build_transition_map(n_sites) if tmap is None else tmap
    w = PauliWord.single(n_sites, p, axis)
    y = PauliWord.all_y(n_sites)
    rows, sus = [], []
    for _ in range(t_max + 1):
        rows.append(w.letters())
        sus.append(symplectic_product(w, y))
        w = conjugate_by_T(w, tmap)
    return LightCone(p, axis.upper(), n_sites, tuple(rows), tuple(sus))
