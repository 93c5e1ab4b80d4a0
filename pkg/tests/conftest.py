import numpy as np
import pytest

from zuslab.linalg import dagger, haar_unitary, random_density


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_matrix(rng, r, c=None):
    c = r if c is None else c
    return rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))


def random_hermitian(rng, d):
    m = random_matrix(rng, d)
    return (m + dagger(m)) / 2


def random_psd(rng, d, rank=None):
    return random_density(d, rng, rank)


def local_unitary_transport(state, family, rng):
    """Rotate rho by U_A (x) U_B and every PVM of the family by U_A.

    Conditional operators of the rotated state for PVM U_A P U_A^dag equal
    U_B Z_P U_B^dag, so ZUS-ness is preserved exactly.
    """
    from zuslab.objects import BipartiteState

    ua = haar_unitary(state.d_a, rng)
    ub = haar_unitary(state.d_b, rng)
    u = np.kron(ua, ub)
    rho = u @ state.rho @ dagger(u)
    return BipartiteState((rho + dagger(rho)) / 2, state.d_a, state.d_b), family.conjugate_by(ua)
