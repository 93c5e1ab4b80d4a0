import numpy as np
import pytest

from zuslab.algebra import generate_algebra
from zuslab.errors import NotPure
from zuslab.objects import bell, max_entangled_state, mix, pure_state, s1, s2, validate_pvm, validate_family
from zuslab.rigidity import maximally_mixed_defect, purity, schmidt_coefficients, verify_rigidity

from conftest import local_unitary_transport


def test_bell_is_rigid():
    rep = verify_rigidity(bell(), s1())
    assert rep.hypotheses_hold and rep.is_max_entangled and not rep.theorem_violation
    assert rep.kraus_rank == 1
    np.testing.assert_allclose(rep.schmidt_coeffs, [0.5, 0.5], atol=1e-12)


def test_mix_fails_common_zus_without_violation():
    rep = verify_rigidity(mix(), s1())
    assert not rep.common_zus and not rep.theorem_violation
    assert rep.purity == pytest.approx(0.5)
    assert rep.kraus_rank == 2
    assert rep.schmidt_coeffs == []


def test_mix_with_s2_is_silent():
    rep = verify_rigidity(mix(), s2())
    assert rep.common_zus and not rep.algebra_full and rep.algebra_dim == 2
    assert not rep.theorem_violation
    d = rep.to_dict()
    assert set(d) == {"hypotheses", "algebra_dim", "conclusions", "theorem_violation"}


def test_transported_bell(rng):
    for _ in range(5):
        st, fam = local_unitary_transport(bell(), s1(), rng)
        rep = verify_rigidity(st, fam)
        assert rep.hypotheses_hold and rep.is_max_entangled and not rep.theorem_violation


def test_qutrit_family_of_three_bases_generates_full_algebra():
    from zuslab.constructions import _fourier

    f = _fourier(3)
    fam = validate_family([validate_pvm([np.diag(r) for r in np.eye(3)]),
                           validate_pvm([np.outer(f[:, k], f[:, k].conj()) for k in range(3)])])
    assert generate_algebra(fam.projectors(), 3).dim == 9
    rep = verify_rigidity(max_entangled_state(3), fam)
    assert rep.hypotheses_hold and rep.is_max_entangled


def test_schmidt_examples():
    v = np.kron([1, 0], [1, 0])
    assert schmidt_coefficients(pure_state(v, 2, 2)) == [1.0, 0.0]
    # uneven dimensions pad to the larger factor
    psi = (np.kron([1, 0], [1, 0, 0, 0]) + np.kron([0, 1], [0, 1, 0, 0])) / np.sqrt(2)
    np.testing.assert_allclose(schmidt_coefficients(pure_state(psi, 2, 4)), [0.5, 0.5, 0, 0], atol=1e-12)
    with pytest.raises(NotPure):
        schmidt_coefficients(mix())


def test_schmidt_matches_reduced_spectrum(rng):
    from zuslab.linalg import haar_unitary

    psi = haar_unitary(6, rng)[:, 0]
    st = pure_state(psi, 2, 3)
    s = schmidt_coefficients(st)
    eig = sorted(np.linalg.eigvalsh(st.reduced_a()), reverse=True)
    np.testing.assert_allclose(s[:2], eig, atol=1e-12)
    assert purity(st) == pytest.approx(1.0)


def test_maximally_mixed_defect():
    assert maximally_mixed_defect(bell()) < 1e-15
    assert maximally_mixed_defect(pure_state(np.kron([1, 0], [1, 0]), 2, 2)) == pytest.approx(0.5)


def test_larger_memory_pure_sigma_schmidt():
    from zuslab.constructions import larger_memory_zus

    st = larger_memory_zus(2, np.diag([1.0, 0.0]))
    np.testing.assert_allclose(schmidt_coefficients(st), [0.5, 0.5, 0, 0], atol=1e-12)
