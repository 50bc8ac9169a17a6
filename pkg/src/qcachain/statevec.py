"""Dense state-vector simulator for the qubit chain.

Index convention: basis index ``b`` stores qubit 1 in its most significant
bit, so site ``q`` of an ``N``-qubit state is bit ``N - q`` of ``b`` and the
mirror map is bit-string reversal.

Kernels work on arrays of shape ``(2**N,)`` or ``(2**N, K)``; the second form
carries ``K`` columns at once and is how dense unitaries are built.
Operations on :class:`StateVector` mutate its buffer and return the same
object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Literal

import numpy as np

from .schedule import Pulse, PulseSchedule, StepT
from .symplectic import PauliWord

MAX_QUBITS = 22
DENSE_ORACLE_CAP = 12

Model = Literal["coherent", "dephasing"]
MODELS = ("coherent", "dephasing")

_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def rotation_2x2(axis: str, alpha: float) -> np.ndarray:
    """``exp(i alpha/2 A)`` for a single qubit."""
    return math.cos(alpha / 2) * np.eye(2, dtype=complex) + 1j * math.sin(alpha / 2) * _PAULI[axis]


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} amplitudes, got shape {self.amplitudes.shape}")

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = True) -> "StateVector":
        amps = np.array(amplitudes, dtype=complex)
        n = int(round(math.log2(len(amps))))
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        """Computational basis state; ``bits[0]`` is qubit 1."""
        n = len(bits)
        amps = np.zeros(1 << n, dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(n, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def site_one_probability(self, site: int) -> float:
        """Probability that qubit ``site`` reads 1."""
        _check_site(site, self.n_qubits)
        bit = 1 << (self.n_qubits - site)
        idx = np.arange(1 << self.n_qubits)
        return float(self.probabilities()[(idx & bit) != 0].sum())


@dataclass
class DenseUnitary:
    n_qubits: int
    matrix: np.ndarray


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: int
    model: str
    probability: float
    observable: str = "S_Z"


def _check_site(site: int, n: int) -> None:
    if not 1 <= site <= n:
        raise ValueError(f"site {site} outside 1..{n}")


def site_bit(site: int, n: int) -> int:
    return 1 << (n - site)


def site_mask_to_index(mask: int, n: int) -> int:
    """Map a site bitset (site k+1 at bit k) to a basis-index bitmask."""
    out = 0
    while mask:
        low = mask & -mask
        k = low.bit_length() - 1
        out |= 1 << (n - 1 - k)
        mask ^= low
    return out


@lru_cache(maxsize=32)
def _indices(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    idx.flags.writeable = False
    return idx


@lru_cache(maxsize=32)
def _weights(n: int) -> np.ndarray:
    w = np.bitwise_count(_indices(n)).astype(np.int64)
    w.flags.writeable = False
    return w


@lru_cache(maxsize=32)
def _cz_chain_signs(n: int) -> np.ndarray:
    idx = _indices(n)
    s = 1.0 - 2.0 * (np.bitwise_count(idx & (idx >> 1)) & 1)
    s.flags.writeable = False
    return s


@lru_cache(maxsize=32)
def reversal_permutation(n: int) -> np.ndarray:
    idx = _indices(n)
    rev = np.zeros_like(idx)
    for k in range(n):
        rev |= ((idx >> k) & 1) << (n - 1 - k)
    rev.flags.writeable = False
    return rev


def _bcast(vec: np.ndarray, psi: np.ndarray) -> np.ndarray:
    return vec.reshape(vec.shape + (1,) * (psi.ndim - 1))


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_CHUNK = 5


def _apply_uniform(psi: np.ndarray, n: int, u: np.ndarray) -> None:
    """Same 2x2 ``u`` on every site, as Kronecker blocks of up to ``_CHUNK`` sites."""
    site = 1
    while site <= n:
        k = min(_CHUNK, n - site + 1)
        uk = reduce(np.kron, [u] * k)
        view = psi.reshape(1 << (site - 1), 1 << k, -1)
        view[...] = np.matmul(uk, view)
        site += k


def _step_T(psi: np.ndarray, n: int) -> None:
    _apply_uniform(psi, n, _HADAMARD)
    if n > 1:
        psi *= _bcast(_cz_chain_signs(n), psi)


def _pulse(psi: np.ndarray, n: int, axis: str, alpha: float) -> None:
    if axis == "Z":
        # diagonal: exp(i alpha/2 (N - 2 wt))
        phase = np.exp(0.5j * alpha * (n - 2 * _weights(n)))
        psi *= _bcast(phase, psi)
        return
    _apply_uniform(psi, n, rotation_2x2(axis, alpha))


def _run(psi: np.ndarray, n: int, schedule: PulseSchedule) -> None:
    if schedule.n_sites != n:
        raise ValueError(f"schedule is for {schedule.n_sites} sites, state has {n}")
    for item in schedule.items:
        if isinstance(item, StepT):
            _step_T(psi, n)
        elif isinstance(item, Pulse):
            _pulse(psi, n, item.axis, item.angle)
        else:
            raise TypeError(f"unknown schedule item {item!r}")


def init_zero(n: int) -> StateVector:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"N must be in 1..{MAX_QUBITS}, got {n}")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, amps)


def random_state(n: int, rng=None) -> StateVector:
    rng = np.random.default_rng(rng)
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(n, amps / np.linalg.norm(amps))


def apply_T(s: StateVector) -> StateVector:
    """One automaton step: Hadamard on every site, then CZ on every neighbouring pair."""
    _step_T(s.amplitudes, s.n_qubits)
    return s


def apply_pulse(s: StateVector, axis: str, alpha: float) -> StateVector:
    if axis not in _PAULI:
        raise ValueError(f"axis must be X, Y or Z, got {axis!r}")
    _pulse(s.amplitudes, s.n_qubits, axis, alpha)
    return s


def apply_schedule(s: StateVector, schedule: PulseSchedule) -> StateVector:
    _run(s.amplitudes, s.n_qubits, schedule)
    return s


def evolve_columns(columns: np.ndarray, schedule: PulseSchedule) -> np.ndarray:
    """Apply ``schedule`` to each column of a ``(2**N, K)`` array; returns a new array."""
    psi = np.array(columns, dtype=complex, copy=True)
    _run(psi, schedule.n_sites, schedule)
    return psi


def schedule_unitary(schedule: PulseSchedule) -> DenseUnitary:
    n = schedule.n_sites
    if n > DENSE_ORACLE_CAP:
        raise ValueError(f"dense oracle limited to N <= {DENSE_ORACLE_CAP}, got {n}")
    return DenseUnitary(n, evolve_columns(np.eye(1 << n, dtype=complex), schedule))


def phase_equivalent(u, v, tol: float = 1e-9) -> bool:
    """``|tr(U^dagger V)| / K >= 1 - tol`` for ``K`` columns; equality up to global phase."""
    return phase_overlap(u, v) >= 1 - tol


def phase_overlap(u, v) -> float:
    a = u.matrix if isinstance(u, DenseUnitary) else np.asarray(u)
    b = v.matrix if isinstance(v, DenseUnitary) else np.asarray(v)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    cols = a.shape[1] if a.ndim == 2 else 1
    return float(abs(np.vdot(a, b)) / cols)


def apply_pauli(s: StateVector, word: PauliWord) -> StateVector:
    s.amplitudes[...] = _pauli_action(s.amplitudes, s.n_qubits, word)
    return s


def _pauli_action(psi: np.ndarray, n: int, word: PauliWord) -> np.ndarray:
    if word.n != n:
        raise ValueError("word and state differ in size")
    idx = _indices(n)
    zmask = site_mask_to_index(word.z, n)
    xmask = site_mask_to_index(word.x, n)
    # out[c] = i^k (-1)^{z.c} psi[c ^ x]
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & zmask) & 1)
    return (1j ** word.phase) * _bcast(signs, psi) * psi[idx ^ xmask]


def apply_pauli_rotation(s: StateVector, word: PauliWord, alpha: float) -> StateVector:
    """``exp(i alpha/2 P)`` for a Hermitian Pauli word ``P``."""
    s.amplitudes[...] = pauli_rotation_columns(s.amplitudes, s.n_qubits, word, alpha)
    return s


def pauli_rotation_columns(psi: np.ndarray, n: int, word: PauliWord, alpha: float) -> np.ndarray:
    if not word.is_hermitian():
        raise ValueError("rotation generator must be Hermitian")
    return math.cos(alpha / 2) * psi + 1j * math.sin(alpha / 2) * _pauli_action(psi, n, word)


def _controlled_flip(s: StateVector, controls: tuple[int, ...], target: int) -> StateVector:
    n = s.n_qubits
    sites = controls + (target,)
    for q in sites:
        _check_site(q, n)
    if len(set(sites)) != len(sites):
        raise ValueError(f"control and target sites must be distinct, got {sites}")
    idx = _indices(n)
    cmask = sum(site_bit(c, n) for c in controls)
    hit = (idx & cmask) == cmask
    perm = np.where(hit, idx ^ site_bit(target, n), idx)
    s.amplitudes[...] = s.amplitudes[perm]
    return s


def apply_cnot(s: StateVector, control: int, target: int) -> StateVector:
    return _controlled_flip(s, (control,), target)


def apply_toffoli(s: StateVector, c1: int, c2: int, target: int) -> StateVector:
    return _controlled_flip(s, (c1, c2), target)


def reflect(s: StateVector) -> StateVector:
    """Mirror the chain: qubit ``i`` goes to ``N + 1 - i``."""
    s.amplitudes[...] = s.amplitudes[reversal_permutation(s.n_qubits)]
    return s


def reflection_matrix(n: int) -> np.ndarray:
    perm = reversal_permutation(n)
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    out[perm, _indices(n)] = 1.0
    return out


def sz_values(n: int) -> np.ndarray:
    return n - 2 * _weights(n)


def expectation_sz(s: StateVector) -> float:
    return float(s.probabilities() @ sz_values(s.n_qubits))


def sz_distribution(s: StateVector) -> dict[int, float]:
    """Exact outcome distribution of a total-spin measurement, ``m -> probability``."""
    vals = sz_values(s.n_qubits)
    probs = s.probabilities()
    out = {}
    for m in range(s.n_qubits, -s.n_qubits - 1, -2):
        p = float(probs[vals == m].sum())
        if p > 0:
            out[m] = p
    return out


def project_sector(s: StateVector, m: int) -> StateVector:
    """Renormalized projection onto the ``S_Z = m`` eigenspace."""
    keep = sz_values(s.n_qubits) == m
    amps = np.where(keep, s.amplitudes, 0)
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ValueError(f"outcome {m} has zero probability")
    return StateVector(s.n_qubits, amps / norm)


def dephased_diagonal(s: StateVector, m: int) -> np.ndarray:
    """Diagonal of the post-measurement mixed state of the site-resolved, globally recorded model."""
    keep = sz_values(s.n_qubits) == m
    p = np.where(keep, s.probabilities(), 0.0)
    total = p.sum()
    if total == 0:
        raise ValueError(f"outcome {m} has zero probability")
    return p / total


def measure_sz(s: StateVector, model: Model = "coherent", rng=None) -> tuple[MeasurementRecord, StateVector]:
    """Sample a total-spin outcome and return the record with a fresh post-state.

    ``coherent`` keeps the sector projection.  ``dephasing`` returns one
    computational basis state drawn from the dephased sector mixture, so
    repeated seeded runs sample that mixture.
    """
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    rng = np.random.default_rng(rng)
    dist = sz_distribution(s)
    outcomes = list(dist)
    probs = np.array([dist[m] for m in outcomes])
    m = outcomes[int(rng.choice(len(outcomes), p=probs / probs.sum()))]
    record = MeasurementRecord(m, model, dist[m])
    if model == "coherent":
        return record, project_sector(s, m)
    diag = dephased_diagonal(s, m)
    b = int(rng.choice(len(diag), p=diag))
    amps = np.zeros_like(s.amplitudes)
    amps[b] = 1.0
    return record, StateVector(s.n_qubits, amps)
