import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crflow.errors import ResonancePole
from crflow.opalg import (BlockStructure, FourierOperator, GradedOperator, antiderivative, block_split,
                          commutator, dc_part, interaction_frame, multiply)

DIM = 3


def random_fourier(seed: int, n_terms: int = 3, hermitian: bool = False) -> FourierOperator:
    rng = np.random.default_rng(seed)
    terms = []
    for _ in range(n_terms):
        w = float(rng.choice([-1, 1]) * rng.uniform(0.5, 5.0))
        m = rng.normal(size=(DIM, DIM)) + 1j * rng.normal(size=(DIM, DIM))
        terms.append((w, m))
        if hermitian:
            terms.append((-w, m.conj().T))
    return FourierOperator(terms, dim=DIM)


def random_graded(seed: int) -> GradedOperator:
    rng = np.random.default_rng(seed)
    energies = rng.uniform(0, 10, size=DIM)
    m = rng.normal(size=(DIM, DIM)) + 1j * rng.normal(size=(DIM, DIM))
    h = m + m.conj().T
    v = rng.normal(size=(DIM, DIM)) + 1j * rng.normal(size=(DIM, DIM))
    return GradedOperator(energies, rng.uniform(1, 3), {0: h, 1: v, -1: v.conj().T})


seeds = st.integers(0, 2**31 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds, seeds, seeds, st.floats(-3, 3), st.floats(-3, 3))
def test_commutator_bilinear(sa, sb, sc, x, y):
    a, b, c = random_fourier(sa), random_fourier(sb), random_fourier(sc)
    left = commutator(a.scale(x) + b.scale(y), c)
    right = commutator(a, c).scale(x) + commutator(b, c).scale(y)
    assert left.allclose(right, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds, seeds)
def test_commutator_of_hermitians_is_antihermitian(sa, sb):
    a, b = random_fourier(sa, hermitian=True), random_fourier(sb, hermitian=True)
    c = commutator(a, b)
    assert c.allclose(c.dagger().scale(-1), atol=1e-9)
    assert c.scale(1j).is_hermitian(atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(-2, 2))
def test_multiply_matches_pointwise_product(seed, t):
    a, b = random_fourier(seed), random_fourier(seed + 1)
    assert np.allclose(multiply(a, b).evaluate(t), a.evaluate(t) @ b.evaluate(t), atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_antiderivative_inverts_derivative(seed):
    a = random_fourier(seed)
    assert antiderivative(a).derivative().allclose(a, atol=1e-10)


def test_antiderivative_raises_on_static_term():
    a = FourierOperator([(0.0, np.eye(DIM)), (2.0, np.eye(DIM))])
    with pytest.raises(ResonancePole) as err:
        antiderivative(a)
    assert err.value.frequency == 0.0
    assert np.allclose(dc_part(a), np.eye(DIM))


def test_terms_merge_within_tolerance():
    a = FourierOperator([(1.0, np.eye(2)), (1.0 + 1e-9, np.eye(2)), (2.0, np.zeros((2, 2)))])
    assert len(a) == 1 and np.allclose(a.term(1.0), 2 * np.eye(2))
    with pytest.raises(ValueError):
        FourierOperator([])


@settings(max_examples=30, deadline=None)
@given(seeds, seeds, st.floats(-2, 2))
def test_graded_product_matches_fourier(sa, sb, t):
    a = random_graded(sa)
    b = GradedOperator(a.energies, a.drive_freq, random_graded(sb).sectors)
    prod = (a @ b).to_fourier()
    assert np.allclose(prod.evaluate(t), a.to_fourier().evaluate(t) @ b.to_fourier().evaluate(t), atol=1e-8)
    assert a.to_fourier().is_hermitian(atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_graded_antiderivative(seed):
    a = random_graded(seed)
    off = a.masked(~np.eye(DIM, dtype=bool))
    g = off.antiderivative(pole_tol=1e-9)
    assert g.derivative().to_fourier().allclose(off.to_fourier(), atol=1e-8)


def test_graded_pole_reports_photons():
    a = GradedOperator(np.array([0.0, 1.0]), 1.0, {1: np.array([[0, 0], [1.0, 0]])})
    # entry (1, 0) of sector 1 oscillates at 1 - 0 + 1 = 2; entry (0, 1) at -1 + 1 = 0
    a = a + a.like({1: np.array([[0, 1.0], [0, 0]])})
    with pytest.raises(ResonancePole) as err:
        a.antiderivative()
    assert [(e.row, e.col, e.photons) for e in err.value.entries] == [(0, 1, 1)]


def test_interaction_frame_shifts_frequencies():
    h0 = np.diag([0.0, 3.0])
    v = FourierOperator([(1.0, np.array([[0, 1.0], [1.0, 0]]))])
    hi = interaction_frame(h0, v)
    assert sorted(hi.frequencies) == pytest.approx([-2.0, 4.0])


def test_block_split_two_qubits():
    blocks = BlockStructure((2, 3), target=1)
    rng = np.random.default_rng(0)
    m = rng.normal(size=(6, 6))
    a = FourierOperator([(1.0, m)])
    b, n = block_split(a, blocks)
    assert np.allclose(b.term(1.0) + n.term(1.0), m)
    # block-diagonal entries keep the control level fixed
    lv = blocks.levels()
    rows, cols = np.nonzero(b.term(1.0))
    assert np.all(lv[rows, 0] == lv[cols, 0])
    with pytest.raises(ValueError):
        BlockStructure((2, 2), target=2)
