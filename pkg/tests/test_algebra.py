import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zuslab.algebra import (
    MatrixMap,
    block_algebra,
    block_structure,
    center,
    cluster_eigen,
    commutant,
    full_algebra,
    generate_algebra,
    md_algebra,
    md_member,
    minimal_central_projections,
    wedderburn_decompose,
)
from zuslab.errors import DegenerateSplit
from zuslab.linalg import dagger, haar_unitary, opnorm
from zuslab.objects import s1, s2

from conftest import random_matrix

patterns = st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=3).filter(
    lambda b: sum(n * m for n, m in b) <= 8)


def test_generated_dimensions():
    assert generate_algebra(s1().projectors(), 2).dim == 4
    assert generate_algebra(s2().projectors(), 2).dim == 2
    assert generate_algebra([], 3).dim == 1


def test_full_algebra_commutant_and_center():
    a = full_algebra(3)
    assert a.dim == 9
    assert commutant(a).dim == 1
    assert center(a).dim == 1


def test_closure(rng):
    u = haar_unitary(5, rng)
    a = block_algebra([(2, 1), (1, 3)], u)
    assert max(a.closure_defects()) < 1e-9
    x, y = a.random_element(rng), a.random_element(rng)
    assert a.contains(x @ y) and a.contains(dagger(x))
    assert not a.contains(random_matrix(rng, 5))


def test_cluster_eigen():
    g = cluster_eigen(np.array([0.0, 1e-9, 0.5, 0.5 + 1e-8, 1.0]))
    assert [list(x) for x in g] == [[0, 1], [2, 3], [4]]
    with pytest.raises(DegenerateSplit):
        cluster_eigen(np.array([0.0, 1e-5]))


def test_central_projections_diagonal():
    a = generate_algebra([np.diag([1.0, 0, 0])], 3)
    ps = minimal_central_projections(a)
    assert len(ps) == 2
    np.testing.assert_allclose(sum(ps), np.eye(3), atol=1e-9)
    np.testing.assert_allclose(ps[0], np.diag([1, 0, 0]), atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(patterns, st.integers(0, 2**31 - 1))
def test_wedderburn_recovers_random_patterns(blocks, seed):
    rng = np.random.default_rng(seed)
    d = sum(n * m for n, m in blocks)
    a = block_algebra(blocks, haar_unitary(d, rng))
    ws = wedderburn_decompose(a)
    assert sorted(ws.blocks) == sorted(tuple(b) for b in blocks)
    assert ws.algebra_dim == a.dim
    assert ws.commutant_dim == commutant(a).dim
    assert ws.r == center(a).dim
    assert opnorm(ws.transform @ dagger(ws.transform) - np.eye(d)) < 1e-9
    for _ in range(3):
        x = a.random_element(rng)
        assert ws.block_defect(x) < 1e-8
        np.testing.assert_allclose(ws.embed(ws.components(x)), x, atol=1e-8)


def test_wedderburn_block_order(rng):
    ws = wedderburn_decompose(block_algebra([(1, 1), (1, 2), (2, 1)], haar_unitary(5, rng)))
    assert ws.blocks == ((2, 1), (1, 2), (1, 1))


def test_wedderburn_seed_independence_of_blocks(rng):
    a = block_algebra([(2, 2), (1, 1)], haar_unitary(5, rng))
    assert wedderburn_decompose(a, seed=1).blocks == wedderburn_decompose(a, seed=2).blocks


def test_block_structure_explicit():
    ws = block_structure([(2, 1), (1, 1)])
    assert ws.is_full() is False and ws.dim == 3
    np.testing.assert_allclose(sum(ws.central_projections), np.eye(3))
    assert block_structure([(3, 1)]).is_full()


def test_decomposition_is_fast(rng):
    a = block_algebra([(2, 2), (1, 3), (1, 1)], haar_unitary(8, rng))
    t = time.perf_counter()
    wedderburn_decompose(a)
    assert time.perf_counter() - t < 1.0


def test_md_of_conjugation_is_everything(rng):
    u = haar_unitary(3, rng)
    phi = MatrixMap.from_function(lambda x: u @ x @ dagger(u), 3)
    assert md_algebra(phi).dim == 9


def test_md_of_pinching_is_diagonal():
    phi = MatrixMap.from_function(lambda x: np.diag(np.diag(x)), 3)
    md = md_algebra(phi)
    assert md.dim == 3
    assert md.contains(np.diag([1.0, 2.0, 3.0]))
    assert not md_member(phi, np.ones((3, 3)))


def test_md_of_measure_and_prepare_channel():
    # X -> <0|X|0> P + <1|X|1> (I - P) on a qubit: MD is the diagonal algebra
    p = np.diag([1.0, 0])
    phi = MatrixMap.from_function(lambda x: x[0, 0] * p + x[1, 1] * (np.eye(2) - p), 2)
    assert md_algebra(phi).dim == 2


def test_matrix_map_from_values(rng):
    from zuslab.linalg import kron

    basis = [random_matrix(rng, 2) for _ in range(4)]
    f = lambda x: kron(x, np.eye(2))  # noqa: E731
    m = MatrixMap.from_values(basis, [f(b) for b in basis], 2)
    x = random_matrix(rng, 2)
    np.testing.assert_allclose(m(x), f(x), atol=1e-10)


def test_qutrit_p_generates_abelian_algebra():
    from zuslab.objects import qutrit_p

    a = generate_algebra(list(qutrit_p().projections), 3)
    ws = wedderburn_decompose(a)
    assert a.dim == 2 and ws.r == 2
    assert ws.blocks == ((1, 2), (1, 1))
