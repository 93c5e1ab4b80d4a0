import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zuslab.cpmaps import (
    choi_operator,
    conditional_operators,
    is_common_zus,
    is_zus,
    is_zus_bruteforce,
    kraus_rank,
    lambda_apply,
    lambda_map,
    overlap_matrix,
    phi_apply,
    steer,
)
from zuslab.errors import DimensionMismatch
from zuslab.linalg import dagger, numerical_rank, random_density, swap_unitary
from zuslab.objects import (
    BipartiteState,
    bell,
    max_entangled_state,
    mix,
    s1,
    s2,
    validate_pvm,
    validate_state,
    x_pvm,
    z_pvm,
)

from conftest import random_matrix


def steer_loops(rho, d_a, d_b, p):
    """Z = sum_{i,j} P_ji <i|_A rho |j>_A  (Tr_A[(P (x) I) rho])."""
    out = np.zeros((d_b, d_b), dtype=complex)
    for i in range(d_a):
        for j in range(d_a):
            blk = rho[i * d_b:(i + 1) * d_b, j * d_b:(j + 1) * d_b]
            out += p[j, i] * blk
    return out


def test_bell_conditional_operators():
    L = lambda_map(bell())
    z = conditional_operators(L, z_pvm()).as_dict()
    np.testing.assert_allclose(z["0"], np.diag([0.5, 0]), atol=1e-12)
    np.testing.assert_allclose(z["1"], np.diag([0, 0.5]), atol=1e-12)
    x = conditional_operators(L, x_pvm()).as_dict()
    np.testing.assert_allclose(x["+"], np.full((2, 2), 0.25), atol=1e-12)


def test_mix_x_conditional_operators():
    L = lambda_map(mix())
    for _, z in conditional_operators(L, x_pvm()):
        np.testing.assert_allclose(z, np.eye(2) / 4, atol=1e-12)


def test_verdicts():
    Lb, Lm = lambda_map(bell()), lambda_map(mix())
    assert is_common_zus(Lb, s1()) and is_common_zus(Lb, s2())
    assert is_common_zus(Lm, s2())
    v = is_zus(Lm, x_pvm())
    assert not v.passed and v.failing_pair == ("+", "-")
    assert v.worst_overlap == pytest.approx(1.0)


def test_maximally_entangled_transpose_convention():
    L = lambda_map(max_entangled_state(3))
    rng = np.random.default_rng(0)
    x = random_matrix(rng, 3)
    np.testing.assert_allclose(lambda_apply(L, x), x / 3, atol=1e-14)
    np.testing.assert_allclose(steer(L, x), x.T / 3, atol=1e-14)
    np.testing.assert_allclose(phi_apply(L, x), x, atol=1e-12)


def test_steer_matches_loop_oracle(rng):
    rho = random_density(6, rng)
    L = lambda_map(validate_state(rho, 2, 3))
    p = random_matrix(rng, 2)
    np.testing.assert_allclose(steer(L, p), steer_loops(rho, 2, 3, p), atol=1e-14)
    np.testing.assert_allclose(lambda_apply(L, p), steer_loops(rho, 2, 3, p.T), atol=1e-14)


def test_lambda_identity_and_dimension_check(rng):
    L = lambda_map(validate_state(random_density(6, rng), 3, 2))
    np.testing.assert_allclose(lambda_apply(L, np.eye(3)), L.rho_b, atol=1e-14)
    with pytest.raises(DimensionMismatch):
        steer(L, np.eye(2))
    with pytest.raises(DimensionMismatch):
        conditional_operators(L, z_pvm())


def test_phi_is_unital_on_support(rng):
    rho = random_density(6, rng, rank=2)  # rho_B may be singular on d_b=3
    L = lambda_map(validate_state(rho, 2, 3))
    np.testing.assert_allclose(phi_apply(L, np.eye(2)), L.support_s, atol=1e-9)


def test_overlap_matrix_zero_operator():
    ov = overlap_matrix([np.zeros((2, 2)), np.eye(2)])
    np.testing.assert_array_equal(ov, np.zeros((2, 2)))


def test_zus_with_zero_outcome():
    # outcome with zero conditional operator is orthogonal to everything
    rho = validate_state(np.kron(np.diag([1.0, 0, 0]), np.diag([0.5, 0.5])), 3, 2)
    L = lambda_map(rho)
    p = validate_pvm([np.diag([1.0, 0, 0]), np.diag([0, 1.0, 0]), np.diag([0, 0, 1.0])])
    assert is_zus(L, p).passed


def test_choi_equals_swapped_state(rng):
    for d_a, d_b in [(2, 2), (2, 3), (3, 2)]:
        rho = random_density(d_a * d_b, rng, rank=2)
        L = lambda_map(validate_state(rho, d_a, d_b))
        f = swap_unitary(d_a, d_b)
        assert np.max(np.abs(choi_operator(L) - f @ rho @ dagger(f))) < 1e-12
        assert kraus_rank(L) == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_zus_verdict_agrees_with_support_oracle(seed, dims):
    rng = np.random.default_rng(seed)
    d_a, d_b = dims
    # generic states, and classically correlated ones (always ZUS for the Z basis)
    if rng.random() < 0.5:
        rho = random_density(d_a * d_b, rng, rank=int(rng.integers(1, 4)))
    else:
        rho = np.zeros((d_a * d_b,) * 2, dtype=complex)
        for i in range(d_a):
            e = np.zeros((d_a, d_a))
            e[i, i] = 1
            rho += np.kron(e, np.diag(np.eye(d_b)[i % d_b]))
        rho /= np.trace(rho)
    L = lambda_map(validate_state(rho, d_a, d_b))
    pvm = validate_pvm([np.diag(r) for r in np.eye(d_a)])
    assert is_zus(L, pvm).passed == is_zus_bruteforce(L, pvm)


def test_local_unitary_covariance(rng):
    from conftest import local_unitary_transport

    st_, fam = local_unitary_transport(bell(), s1(), rng)
    assert is_common_zus(lambda_map(st_), fam).passed


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_kraus_rank_equals_state_rank(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 5))
    rho = random_density(4, rng, rank=k)
    L = lambda_map(BipartiteState(rho, 2, 2))
    assert kraus_rank(L) == numerical_rank(rho) == k
