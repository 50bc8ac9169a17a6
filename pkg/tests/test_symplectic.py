import itertools
import random
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcachain import gf2
from qcachain import symplectic as sp
from qcachain.symplectic import BitVec, PauliWord

import oracles as orc


def words(n_max=6):
    return st.integers(1, n_max).flatmap(
        lambda n: st.builds(
            PauliWord, st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1), st.integers(0, 3)
        )
    )


def all_words(n):
    for z in range(1 << n):
        for x in range(1 << n):
            yield PauliWord(n, z, x, (z & x).bit_count() * 3)


# representation -------------------------------------------------------------

def test_y_convention_matches_2x2():
    assert np.allclose(PauliWord.single(1, 1, "Y").to_matrix(), orc.Y)
    assert np.allclose(PauliWord.single(1, 1, "X").to_matrix(), orc.X)
    assert np.allclose(PauliWord.single(1, 1, "Z").to_matrix(), orc.Z)
    assert str(PauliWord.single(1, 1, "Y")) == "+Y"


@pytest.mark.parametrize("label", ["+IZXY", "-YZ", "iXX", "-iZ", "+YYY"])
def test_label_round_trip_and_matrix(label):
    w = PauliWord.from_label(label)
    assert PauliWord.from_label(str(w)) == w
    coeff = {"+": 1, "-": -1, "i": 1j, "-i": -1j}[label[:-len(w.letters())]]
    assert np.allclose(w.to_matrix(), coeff * orc.kron_all([orc.LETTER[c] for c in w.letters()]))


@given(words(4), st.data())
def test_product_matches_matrices(a, data):
    b = data.draw(st.builds(PauliWord, st.just(a.n), st.integers(0, (1 << a.n) - 1),
                            st.integers(0, (1 << a.n) - 1), st.integers(0, 3)))
    assert np.allclose((a * b).to_matrix(), a.to_matrix() @ b.to_matrix())
    ma, mb = a.to_matrix(), b.to_matrix()
    assert a.commutes_with(b) == np.allclose(ma @ mb, mb @ ma)


def test_sign_rejects_anti_hermitian():
    w = PauliWord(1, 1, 0, 1)  # i Z
    assert not w.is_hermitian()
    with pytest.raises(ValueError):
        _ = w.sign


def test_bitvec_helpers():
    v = BitVec.from_list([1, 0, 1])
    assert v.indices() == [0, 2]
    assert (v ^ BitVec.ones(3)).to_list() == [0, 1, 0]
    assert BitVec.from_indices([0, 2], 3) == v
    with pytest.raises(ValueError):
        BitVec(8, 3)


# transition map ---------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 7, 16])
def test_symplectic_invariants(n):
    tm = sp.build_transition_map(n)
    F = tm.F
    CT = gf2.transpose(tm.C, 2 * n)
    assert gf2.matmul(gf2.matmul(CT, F), tm.C) == F
    assert gf2.matmul(tm.C, tm.C_inverse) == gf2.identity(2 * n)
    assert gf2.matmul(F, tm.C_inverse) == gf2.matmul(tm.C, F)


def test_non_chain_gamma_uses_generic_path():
    n = 5
    chain = sp.build_transition_map(n)
    generic = sp.build_transition_map(n, sp.line_graph(n))
    assert not generic.is_chain
    for w in itertools.islice(all_words(n), 0, 1 << 10, 7):
        assert sp.conjugate_by_T(w, chain) == sp.conjugate_by_T(w, generic)
        assert sp.conjugate_by_T_inverse(w, chain) == sp.conjugate_by_T_inverse(w, generic)


def test_rejects_empty_chain():
    with pytest.raises(ValueError):
        sp.build_transition_map(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_every_pauli_word_matches_dense_oracle(n):
    tm = sp.build_transition_map(n)
    t = orc.transition(n)
    td = t.conj().T
    for w in all_words(n):
        m = w.to_matrix()
        assert np.allclose(sp.conjugate_by_T(w, tm).to_matrix(), t @ m @ td), str(w)
        assert np.allclose(sp.conjugate_by_T_inverse(w, tm).to_matrix(), td @ m @ t), str(w)


@given(words(8))
def test_inverse_undoes_step(w):
    tm = sp.build_transition_map(w.n)
    assert sp.conjugate_by_T_inverse(sp.conjugate_by_T(w, tm), tm) == w
    assert sp.evolve(sp.evolve(w, 5, tm), -5, tm) == w


@given(words(8), st.data())
def test_conjugation_is_a_homomorphism(a, data):
    b = data.draw(st.builds(PauliWord, st.just(a.n), st.integers(0, (1 << a.n) - 1),
                            st.integers(0, (1 << a.n) - 1), st.integers(0, 3)))
    tm = sp.build_transition_map(a.n)
    assert sp.conjugate_by_T(a * b, tm) == sp.conjugate_by_T(a, tm) * sp.conjugate_by_T(b, tm)
    assert sp.conjugate_by_T(a, tm).commutes_with(sp.conjugate_by_T(b, tm)) == a.commutes_with(b)


@given(words(10))
def test_sign_bit_recursion(w):
    """Sign bit of a Hermitian word advances by ``z^T Gamma_L z + x^T z``."""
    tm = sp.build_transition_map(w.n)
    w = PauliWord(w.n, w.z, w.x, 3 * w.n_y + 2 * (w.phase & 1))
    for _ in range(w.n + 2):
        _, eps = sp.split_phase(w)
        inc = sp.epsilon_increment(w, tm)
        w = sp.conjugate_by_T(w, tm)
        assert sp.split_phase(w)[1] == (eps + inc) % 2


def test_global_y_conjugation_matches_dense():
    n = 3
    ybar = PauliWord.all_y(n).to_matrix()
    for w in all_words(n):
        assert np.allclose(sp.conjugate_by_global_y(w).to_matrix(), ybar @ w.to_matrix() @ ybar.conj().T)


# propagation examples ---------------------------------------------------------

def test_propagation_examples():
    tm = sp.build_transition_map(8)
    assert str(sp.propagate(3, "Z", 1, tm)) == "+IZXZIIII"
    assert str(sp.propagate(3, "Z", 9, tm)) == "+IIIIIZII"
    tm2 = sp.build_transition_map(2)
    want = orc.transition(2) @ orc.pauli("YI") @ orc.transition(2).conj().T
    got = sp.propagate(1, "Y", 1, tm2)
    assert np.allclose(got.to_matrix(), want)
    assert str(got) == "-YZ"


@pytest.mark.parametrize("n", range(1, 33))
def test_bit_reversal(n):
    assert sp.verify_bit_reversal(n).ok


def test_bit_reversal_detects_corruption():
    from qcachain.verify import corrupted_map
    assert not sp.verify_bit_reversal(6, corrupted_map(6)).ok


# selection function -------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 13))
def test_mz_closed_form_and_recursion(n):
    tm = sp.build_transition_map(n)
    for i in range(1, n + 1):
        assert sp.mz_definitional(i, -1, tm) == sp.mz_definitional(i, 0, tm) == 1
        for t in range(-1, n + 1):
            assert sp.mz_definitional(i, t, tm) == sp.mz_closed_form(i, t, n)
        for t in range(0, n):
            nb = sum(sp.mz_definitional(j, t, tm) for j in (i - 1, i + 1) if 1 <= j <= n)
            assert sp.mz_definitional(i, t + 1, tm) == (sp.mz_definitional(i, t - 1, tm) + nb) % 2


def test_mz_matches_susceptibility_by_anticommutation():
    """M_Z(i, t) = 1 exactly when the evolved Z_i anticommutes with the all-Y word."""
    n = 9
    tm = sp.build_transition_map(n)
    y = PauliWord.all_y(n)
    for i in range(1, n + 1):
        for t in range(0, n + 1):
            w = sp.propagate(i, "Z", t, tm)
            assert sp.symplectic_product(w, y) == sp.mz_closed_form(i, t, n)


def test_mz_closed_form_domain():
    with pytest.raises(ValueError):
        sp.mz_closed_form(1, 5, 4)
    assert sp.mz_matrix(3).shape == (3, 4)


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (n + 1)) - 1))))
def test_s_vector_matches_accumulated_y(data):
    n, bits = data
    c = BitVec(bits, n + 1)
    acc = sp.accumulated_y(c, sp.build_transition_map(n))
    s = sp.s_vector(c, n)
    for i in range(1, n + 1):
        assert (not acc.commutes_with(PauliWord.single(n, i, "Z"))) == bool(s[i - 1])


def test_accumulated_y_dense_small():
    n = 3
    tm = sp.build_transition_map(n)
    t = orc.transition(n)
    ybar = orc.kron_all([orc.Y] * n)
    for bits in range(1 << (n + 1)):
        want = np.eye(1 << n)
        for k in range(n + 1):
            if (bits >> k) & 1:
                tk = np.linalg.matrix_power(t, k)
                want = want @ (tk.conj().T @ ybar @ tk)
        got = sp.accumulated_y(BitVec(bits, n + 1), tm).to_matrix()
        assert orc.phase_distance(got, want) < 1e-12


# fold-back and light cone -------------------------------------------------------

def test_foldback_example():
    assert sp.foldback_solution(3, 3, 8).to_list() == [0, 1, 0, 1, 0, 1, 0, 0]


@pytest.mark.parametrize("n", [1, 2, 5, 8, 11])
def test_foldback_equals_recursion(n):
    tm = sp.build_transition_map(n)
    for p in range(1, n + 1):
        w = PauliWord.single(n, p, "Z")
        for t in range(0, 2 * (n + 1) + 1):
            fold = sp.foldback_solution(p, t, n)
            assert fold == sp.boundary_recursion(p, t, n)
            assert fold.bits == w.z
            w = sp.conjugate_by_T(w, tm)


FIG_ROWS = [
    "IIZIIIII", "IZXZIIII", "ZXZXZIII", "XZXZXZII", "IXZXZXZI",
    "IIXZXZXZ", "IIIXZXZX", "IIIIXZXI", "IIIIIXII", "IIIIIZII",
]


def test_lightcone_golden():
    cone = sp.render_lightcone(3, "Z", 8, 9)
    assert list(cone.rows) == FIG_ROWS
    assert [t for t, s in enumerate(cone.susceptible) if s] == [0, 1, 2, 6, 7, 8, 9]
    assert list(cone.susceptible[:9]) == [sp.mz_closed_form(3, t, 8) for t in range(9)]
    text = cone.to_text().splitlines()
    assert text[0] == "0 IIZIIIII  *" and text[3] == "3 XZXZXZII"


def test_lightcone_single_row_and_svg():
    cone = sp.render_lightcone(2, "X", 4, 0)
    assert cone.rows == ("IXII",)
    root = ET.fromstring(sp.render_lightcone(3, "Z", 8, 9).to_svg())
    cells = [r for r in root if r.tag.endswith("rect")][1:]
    assert len(cells) == sum(len(r) - r.count("I") for r in FIG_ROWS)


def test_checkerboard_random():
    rng = random.Random(0)
    for _ in range(20):
        n = rng.randint(1, 14)
        p = rng.randint(1, n)
        w = sp.propagate(p, "Z", 0, sp.build_transition_map(n))
        tm = sp.build_transition_map(n)
        for t in range(2 * n + 3):
            for i in range(1, n + 1):
                bit = (w.z if (p - i + t) % 2 else w.x) >> (i - 1) & 1
                assert bit == 0
            w = sp.conjugate_by_T(w, tm)
