import numpy as np
import pytest

from zuslab.algebra import block_algebra, block_structure, generate_algebra, wedderburn_decompose
from zuslab.constructions import (
    ProperSubalgebraRecipe,
    analytic_defect,
    appendix_c_catalog,
    appendix_c_example_1,
    appendix_c_example_2,
    default_recipe,
    expected_rho_a,
    larger_memory_zus,
    product_extension_zus,
    proper_subalgebra_zus,
    pvm_in_algebra,
    sample_pvms,
)
from zuslab.cpmaps import is_common_zus, is_zus, lambda_map, steer
from zuslab.errors import BadBlock, InvalidSigma, NotProper, ValidationError
from zuslab.linalg import haar_unitary, opnorm, random_density
from zuslab.objects import bell, mix, s1, s2, x_pvm, z_pvm
from zuslab.rigidity import maximally_mixed_defect

ALGEBRAS = [[(2, 2)], [(2, 1), (1, 1)], [(1, 1), (1, 1)]]


@pytest.mark.parametrize("blocks", ALGEBRAS)
@pytest.mark.parametrize("rotate", [False, True])
def test_proper_subalgebra_zus(blocks, rotate, rng):
    d = sum(n * m for n, m in blocks)
    alg = block_algebra(blocks, haar_unitary(d, rng) if rotate else None)
    ws = wedderburn_decompose(alg)
    rec = default_recipe(ws)
    st = proper_subalgebra_zus(rec)
    L = lambda_map(st)
    for pvm in sample_pvms(ws, 12, rng):
        assert all(alg.contains(p) for p in pvm.projections)
        assert is_zus(L, pvm).passed, pvm.name
    np.testing.assert_allclose(st.reduced_a(), expected_rho_a(rec), atol=1e-12)
    assert maximally_mixed_defect(st) == pytest.approx(analytic_defect(rec), abs=1e-9)
    assert analytic_defect(rec) > 0


def test_analytic_defect_values():
    assert analytic_defect(default_recipe(block_structure([(2, 2)]))) == pytest.approx(0.25)
    assert analytic_defect(default_recipe(block_structure([(2, 1), (1, 1)]))) == pytest.approx(1 / 3)
    assert analytic_defect(default_recipe(block_structure([(1, 1), (1, 1)]))) == pytest.approx(0.5)


def test_proper_subalgebra_other_block_and_vectors():
    ws = block_structure([(2, 1), (1, 2)])
    u = np.array([1, 1j]) / np.sqrt(2)
    rec = ProperSubalgebraRecipe(ws, 1, u, np.array([0, 1.0]))
    st = proper_subalgebra_zus(rec)
    np.testing.assert_allclose(st.reduced_a(), expected_rho_a(rec), atol=1e-12)


def test_proper_subalgebra_errors():
    with pytest.raises(NotProper):
        proper_subalgebra_zus(default_recipe(block_structure([(2, 1)])))
    ws = block_structure([(2, 1), (1, 1)])
    with pytest.raises(BadBlock):
        ProperSubalgebraRecipe(ws, 2, np.ones(1), np.ones(1))
    with pytest.raises(ValidationError):
        ProperSubalgebraRecipe(ws, 0, np.ones(2), np.ones(1))


def test_sample_pvms_first_two_are_fixed():
    ws = block_structure([(2, 1)])
    pv = sample_pvms(ws, 3, np.random.default_rng(0))
    assert [p.name for p in pv[:2]] == ["computational", "fourier"]
    for a, b in zip(pv[1].projections, x_pvm().projections):
        np.testing.assert_allclose(a, b, atol=1e-12)


def test_sampled_pvms_include_degenerate(rng):
    ws = wedderburn_decompose(block_algebra([(2, 2), (1, 1)], haar_unitary(5, rng)))
    ranks = set()
    for p in sample_pvms(ws, 20, rng):
        ranks.update(round(np.trace(q).real) for q in p.projections)
    assert max(ranks) > 2


def test_pvm_in_algebra_merges_outcomes():
    ws = block_structure([(2, 1), (1, 1)])
    p = pvm_in_algebra(ws, [np.eye(2), np.eye(1)], [[0, 1], [0]], 3)
    assert p.labels == ("0", "1")
    np.testing.assert_allclose(p.projections[0], np.diag([1, 0, 1]))


def test_larger_memory(rng):
    sigma = random_density(3, rng, rank=2)
    st = larger_memory_zus(2, sigma)
    assert (st.d_a, st.d_b) == (2, 6)
    assert is_common_zus(lambda_map(st), s1()).passed
    np.testing.assert_allclose(st.reduced_a(), np.eye(2) / 2, atol=1e-12)
    with pytest.raises(InvalidSigma):
        larger_memory_zus(2, np.diag([1.0, 1.0]))


def test_product_extension(rng):
    st = product_extension_zus(mix(), random_density(2, rng))
    L = lambda_map(st)
    assert is_zus(L, z_pvm()).passed and not is_zus(L, x_pvm()).passed
    assert is_common_zus(lambda_map(product_extension_zus(bell(), np.eye(3) / 3)), s1()).passed


def test_memory_examples(rng):
    omega = random_density(4, rng)
    ex = appendix_c_example_1(omega)
    L = lambda_map(ex.state)
    for p in (np.diag([1.0, 0]), x_pvm().projections[1]):
        e = np.kron(p, np.eye(2))
        np.testing.assert_allclose(steer(L, e), ex.expected_conditional(p), atol=1e-12)
    alg = generate_algebra([np.kron(p, np.eye(2)) for p in s1().projectors()], 4)
    assert alg.dim == 4
    sigma = random_density(2, rng)
    ex2 = appendix_c_example_2(sigma)
    L2 = lambda_map(ex2.state)
    for p in s1().projectors():
        np.testing.assert_allclose(steer(L2, p), ex2.expected_conditional(p), atol=1e-12)
    assert is_common_zus(L2, s2()).passed
    with pytest.raises(InvalidSigma):
        appendix_c_example_2(np.eye(3) / 3)


def test_memory_catalog_defaults():
    cat = appendix_c_catalog()
    assert set(cat) == {"appendix-c-1", "appendix-c-2"}
    np.testing.assert_allclose(cat["appendix-c-2"].memory, np.eye(2) / 2)
    assert cat["appendix-c-1"].state.d_b == 4


def test_diagonal_algebra_gives_product_state():
    st = proper_subalgebra_zus(default_recipe(wedderburn_decompose(block_algebra([(1, 1), (1, 1)]))))
    np.testing.assert_allclose(st.rho, np.diag([1.0, 0, 0, 0]), atol=1e-12)


def test_m2_tensor_i2_matches_memory_example():
    st = proper_subalgebra_zus(default_recipe(block_structure([(2, 2)])))
    want = appendix_c_example_1(np.diag([1.0, 0, 0, 0])).state
    np.testing.assert_allclose(st.rho, want.rho, atol=1e-12)


@pytest.mark.parametrize("blocks", [[(2, 1), (1, 1)], [(1, 2), (1, 1)], [(2, 2)], [(1, 1), (1, 1)]])
def test_non_maximality_margin(blocks):
    rec = default_recipe(block_structure(blocks))
    assert maximally_mixed_defect(proper_subalgebra_zus(rec)) > 0.1
