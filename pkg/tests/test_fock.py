"""Fock-space engine: operators, special states, expectation machinery."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from weakmeas.exceptions import (
    DimensionMismatchError,
    InvalidTruncationError,
    TruncationRiskError,
    TruncationWarning,
)
from weakmeas.fock import (
    StateVector,
    annihilation_matrix,
    apply_mode_a,
    coherent_state,
    creation_matrix,
    displacement_matrix,
    embed_mode_a,
    embed_mode_b,
    expectation,
    expectation_two,
    fock_state,
    guards_disabled,
    inner_product,
    laguerre_assoc,
    normalize,
    number_matrix,
    squeeze_single_matrix,
    squeeze_two_matrix,
    tensor,
    vacuum,
)
from weakmeas.states import SqueezeParams, squeezed_vacuum


def test_annihilation_entries():
    a = annihilation_matrix(3)
    expected = np.zeros((3, 3), dtype=complex)
    expected[0, 1] = 1.0
    expected[1, 2] = math.sqrt(2.0)
    assert np.array_equal(a, expected)


def test_annihilation_ladder_action():
    a = annihilation_matrix(10)
    out = a @ fock_state(2, 10).amplitudes
    expected = math.sqrt(2.0) * fock_state(1, 10).amplitudes
    assert np.allclose(out, expected, atol=1e-15)


def test_commutator_identity_on_interior():
    N = 40
    a = annihilation_matrix(N)
    comm = a @ a.conj().T - a.conj().T @ a
    interior = comm[: N - 5, : N - 5]
    assert np.max(np.abs(interior - np.eye(N - 5))) < 1e-12


def test_invalid_truncation():
    with pytest.raises(InvalidTruncationError):
        annihilation_matrix(1)
    with pytest.raises(InvalidTruncationError):
        number_matrix(0)


# ---------------------------------------------------------------------------
# Laguerre polynomials
# ---------------------------------------------------------------------------

def brute_laguerre(n: int, m: int, x: float) -> float:
    """Direct binomial-sum evaluation (independent oracle)."""
    total = 0.0
    for k in range(n + 1):
        if n - k > n + m:
            continue
        total += math.comb(n + m, n - k) * (-1) ** k * x ** k / math.factorial(k)
    return total


@pytest.mark.parametrize("m", [-1, 0, 1, 3, 7])
@pytest.mark.parametrize("x", [0.0, 0.3, 2.5])
def test_laguerre_degree_zero(m, x):
    if m < 0:
        return  # n + m >= 0 requires m >= 0 at n = 0
    assert laguerre_assoc(0, m, x) == 1.0


def test_laguerre_low_orders():
    assert laguerre_assoc(1, 1, 0.7) == pytest.approx(2.0 - 0.7, abs=1e-15)
    assert laguerre_assoc(3, 2, 1.5) == pytest.approx(brute_laguerre(3, 2, 1.5), rel=1e-13)


@given(n=st.integers(0, 12), m=st.integers(-3, 8), x=st.floats(0.0, 10.0))
@settings(max_examples=60, deadline=None)
def test_laguerre_matches_brute_force(n, m, x):
    if n + m < 0:
        return
    assert laguerre_assoc(n, m, x) == pytest.approx(brute_laguerre(n, m, x), rel=1e-9, abs=1e-9)


def test_laguerre_domain():
    with pytest.raises(ValueError):
        laguerre_assoc(-1, 0, 1.0)
    with pytest.raises(ValueError):
        laguerre_assoc(2, -3, 1.0)


# ---------------------------------------------------------------------------
# displacement
# ---------------------------------------------------------------------------

def test_displacement_zero_is_identity():
    assert np.allclose(displacement_matrix(0.0, 20), np.eye(20), atol=1e-15)


def test_displacement_vacuum_element():
    # <0|D(0.5)|0> = e^{-1/8}; cross-checked against the exponential route
    D = displacement_matrix(0.5, 60)
    assert D[0, 0].real == pytest.approx(0.8824969, abs=5e-8)
    a = annihilation_matrix(60)
    D_exp = expm(0.5 * a.conj().T - 0.5 * a)
    assert np.max(np.abs((D - D_exp)[:40, :40])) < 1e-10


def test_displacement_matches_exponential_complex():
    N = 60
    alpha = 0.3 + 0.2j
    a = annihilation_matrix(N)
    D_exp = expm(alpha * a.conj().T - np.conj(alpha) * a)
    assert np.max(np.abs(displacement_matrix(alpha, N) - D_exp)[:45, :45]) < 1e-11


def test_displacement_inverse_on_interior():
    N = 40
    alpha = 0.3 + 0.2j
    prod = displacement_matrix(alpha, N) @ displacement_matrix(-alpha, N)
    assert np.max(np.abs(prod - np.eye(N))[:25, :25]) < 1e-10


@pytest.mark.parametrize("alpha,N,block", [(0.5, 80, 60), (1.5, 80, 40), (3.0, 120, 40)])
def test_displacement_unitary_on_interior(alpha, N, block):
    # the reliable block shrinks as the displaced support grows with |alpha|
    D = displacement_matrix(alpha, N)
    dev = D.conj().T @ D - np.eye(N)
    assert np.max(np.abs(dev[:block, :block])) < 1e-8


@pytest.mark.parametrize("a,b,N,block", [
    (0.3 + 0.2j, -0.5 + 0.1j, 80, 50),
    (1.0, 0.8j, 80, 50),
    (2.0, 1.0, 120, 70),
])
def test_displacement_composition(a, b, N, block):
    phase = np.exp((a * np.conj(b) - np.conj(a) * b) / 2.0)
    lhs = displacement_matrix(a, N) @ displacement_matrix(b, N)
    rhs = phase * displacement_matrix(a + b, N)
    assert np.max(np.abs(lhs - rhs)[:block, :block]) < 1e-7


def test_displacement_guard():
    with pytest.raises(TruncationRiskError):
        displacement_matrix(4.0, 40)
    displacement_matrix(4.0, 40, force=True)
    with guards_disabled():
        displacement_matrix(4.0, 40)


# ---------------------------------------------------------------------------
# squeezing
# ---------------------------------------------------------------------------

def test_squeeze_zero_is_identity():
    assert np.allclose(squeeze_single_matrix(0.0, 0.0, 20), np.eye(20), atol=1e-14)


def test_squeeze_matches_closed_coefficients():
    # exponential route (padded so its own edge truncation is converged)
    # against the closed even-level series
    N, pad = 60, 40
    S = squeeze_single_matrix(0.8, 0.0, N + pad)
    from weakmeas.states import squeezed_vacuum_coefficients
    closed = np.zeros(N, dtype=complex)
    closed[0::2] = squeezed_vacuum_coefficients(SqueezeParams(0.8, 0.0), (N + 1) // 2)
    assert np.max(np.abs(S[:N, 0] - closed)) < 1e-9


def test_squeeze_parity():
    S = squeeze_single_matrix(0.9, 0.7, 50)
    assert np.max(np.abs(S[1::2, 0])) < 1e-14


def test_squeeze_unitary():
    S = squeeze_single_matrix(1.5, 0.3, 80, force=True)
    assert np.max(np.abs(S.conj().T @ S - np.eye(80))) < 1e-10


def test_squeeze_guard():
    with pytest.raises(TruncationRiskError):
        squeeze_single_matrix(2.5, 0.0, 40)


def test_squeeze_two_zero_is_identity():
    assert np.allclose(squeeze_two_matrix(0.0, 0.0, 6), np.eye(36), atol=1e-14)


def test_squeeze_two_matches_closed_series():
    # exp(chi a^dag b^dag - chi* a b)|0,0> = sum (e^{i zeta} tanh eta)^n |n,n> / cosh eta
    N = 40
    S = squeeze_two_matrix(0.5, 0.0, N)
    col = S[:, 0].reshape(N, N)
    t = math.tanh(0.5)
    expected = np.zeros((N, N), dtype=complex)
    np.fill_diagonal(expected, t ** np.arange(N) / math.cosh(0.5))
    assert np.max(np.abs(col - expected)) < 1e-8


def test_squeeze_two_pair_support():
    N = 16
    col = squeeze_two_matrix(0.4, 1.1, N)[:, 0].reshape(N, N)
    off_diag = col - np.diag(np.diag(col))
    assert np.max(np.abs(off_diag)) < 1e-12


# ---------------------------------------------------------------------------
# coherent states and expectation machinery
# ---------------------------------------------------------------------------

def test_coherent_zero_is_vacuum():
    st0 = coherent_state(0.0, 30)
    assert np.allclose(st0.amplitudes, vacuum(30).amplitudes)


def test_coherent_is_annihilation_eigenstate():
    mu = 1.0 + 0.5j
    st1 = coherent_state(mu, 60)
    assert expectation(st1, annihilation_matrix(60)) == pytest.approx(mu, abs=1e-10)


def test_coherent_overlap_closed_form():
    mu, nu = 0.8 + 0.3j, -0.4 + 0.9j
    N = 60
    overlap = inner_product(coherent_state(mu, N), coherent_state(nu, N))
    closed = np.exp(-(abs(mu) ** 2 + abs(nu) ** 2) / 2.0 + np.conj(mu) * nu)
    assert overlap == pytest.approx(closed, abs=1e-12)


def test_coherent_guard():
    with pytest.raises(TruncationRiskError):
        coherent_state(4.0, 40)


def test_expectation_basics():
    N = 40
    assert expectation(vacuum(N), number_matrix(N)) == 0.0
    sv = squeezed_vacuum(SqueezeParams(0.7), 80)
    assert expectation(sv, number_matrix(80)).real == pytest.approx(math.sinh(0.7) ** 2, rel=1e-10)
    assert abs(expectation(sv, number_matrix(80)).imag) < 1e-12


def test_expectation_validation():
    with pytest.raises(DimensionMismatchError):
        expectation(vacuum(10), number_matrix(12))
    bad = StateVector(1, 10, 2.0 * vacuum(10).amplitudes)
    with pytest.raises(ValueError):
        expectation(bad, number_matrix(10))


def test_normalize_and_inner():
    rng = np.random.default_rng(7)
    amps = rng.normal(size=12) + 1j * rng.normal(size=12)
    state = normalize(StateVector(1, 12, amps))
    assert inner_product(state, state) == pytest.approx(1.0, abs=1e-12)


def test_tensor_d0imensions_multiply():
    assert tensor(np.eye(4), np.eye(5)).shape == (20, 20)


def test_embed_mode_a_action():
    N = 8
    a = annihilation_matrix(N)
    amps = np.zeros(N * N, dtype=complex)
    amps[3 * N + 2] = 1.0  # |3, 2>
    out = embed_mode_a(a, N) @ amps
    expected = np.zeros(N * N, dtype=complex)
    expected[2 * N + 2] = math.sqrt(3.0)
    assert np.allclose(out, expected)
    # and the reshaped fast path agrees with the Kronecker route
    state = StateVector(2, N, amps)
    assert np.allclose(apply_mode_a(a, state).amplitudes, out)


def test_embed_mode_b_and_expectation_two():
    N = 10
    n = number_matrix(N)
    amps = np.zeros(N * N, dtype=complex)
    amps[4 * N + 6] = 1.0  # |4, 6>
    state = StateVector(2, N, amps)
    assert expectation(state, embed_mode_b(n, N)).real == pytest.approx(6.0)
    assert expectation_two(state, n, n).real == pytest.approx(24.0)
    assert expectation_two(state, n, np.eye(N, dtype=complex)).real == pytest.approx(4.0)


def test_truncation_monotonicity():
    # expectations computed at N and N + 20 agree within tail_tol * 10
    # (holds where the N=80 default actually meets the 1e-12 tail budget,
    # i.e. r <~ 0.75; larger r raises TruncationWarning instead)
    for r in (0.4, 0.7):
        lo = squeezed_vacuum(SqueezeParams(r), 80)
        hi = squeezed_vacuum(SqueezeParams(r), 100)
        e_lo = expectation(lo, number_matrix(80)).real
        e_hi = expectation(hi, number_matrix(100)).real
        assert abs(e_lo - e_hi) < 1e-11


def test_tail_warning():
    with pytest.warns(TruncationWarning):
        squeezed_vacuum(SqueezeParams(1.2), 60)


@given(st.floats(0.05, 1.0), st.floats(0.0, 2 * math.pi))
@settings(max_examples=20, deadline=None)
def test_squeezed_vacuum_norm_property(r, theta):
    sv = squeezed_vacuum(SqueezeParams(r, theta), 90)
    assert abs(sv.norm() - 1.0) < 1e-10
