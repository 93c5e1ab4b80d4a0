import numpy as np
import pytest

from zuslab.errors import (
    DimensionMismatch,
    NotComplete,
    NotHermitian,
    NotOrthogonal,
    NotProjection,
    NotPsd,
    TraceNotOne,
    ValidationError,
)
from zuslab.objects import (
    bell,
    max_entangled_state,
    mix,
    paper_examples,
    qutrit_p,
    qutrit_q,
    s1,
    s2,
    validate_family,
    validate_pvm,
    validate_state,
    x_pvm,
    z_pvm,
)


def test_bell_matrix():
    want = np.zeros((4, 4))
    for i in (0, 3):
        for j in (0, 3):
            want[i, j] = 0.5
    np.testing.assert_allclose(bell().rho, want, atol=1e-15)


def test_mix_matrix():
    np.testing.assert_allclose(mix().rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)


def test_max_entangled_reduced_states():
    for d in (1, 2, 3, 5):
        st = max_entangled_state(d)
        np.testing.assert_allclose(st.reduced_a(), np.eye(d) / d, atol=1e-14)
        np.testing.assert_allclose(st.reduced_b(), np.eye(d) / d, atol=1e-14)
    with pytest.raises(ValueError):
        max_entangled_state(0)


def test_validate_state_failures():
    with pytest.raises(DimensionMismatch) as e:
        validate_state(np.eye(3) / 3, 2, 2)
    assert e.value.report["error"] == "DimMismatch"
    with pytest.raises(NotHermitian) as e:
        validate_state(np.array([[0.5, 1], [0, 0.5]]), 2, 1)
    assert e.value.report["defect"] == pytest.approx(1.0)
    with pytest.raises(TraceNotOne) as e:
        validate_state(np.eye(2), 2, 1)
    assert e.value.report["value"] == pytest.approx(2.0)
    with pytest.raises(NotPsd) as e:
        validate_state(np.diag([1.2, -0.2]), 2, 1)
    assert e.value.report["min_eigenvalue"] == pytest.approx(-0.2)


def test_validate_pvm_failures():
    with pytest.raises(NotProjection):
        validate_pvm([np.diag([0.5, 0]), np.diag([0.5, 1])])
    with pytest.raises(NotOrthogonal) as e:
        validate_pvm([np.eye(2), np.diag([1.0, 0])], labels=["a", "b"])
    assert e.value.report["pair"] == ["a", "b"]
    with pytest.raises(NotComplete):
        validate_pvm([np.diag([1.0, 0])])
    with pytest.raises(ValidationError):
        validate_pvm([np.diag([1.0, 0]), np.diag([0, 1.0])], labels=["a", "a"])
    with pytest.raises(ValidationError):
        validate_pvm([])


def test_degenerate_pvm_is_valid():
    p = validate_pvm([np.diag([1.0, 1, 0]), np.diag([0, 0, 1.0])])
    assert len(p) == 2 and p.dim == 3


def test_named_pvms():
    z, x = z_pvm(), x_pvm()
    assert z.labels == ("0", "1") and x.labels == ("+", "-")
    np.testing.assert_allclose(x.projections[0], np.full((2, 2), 0.5), atol=1e-15)
    assert [p.name for p in s1()] == ["Z", "X"] and [p.name for p in s2()] == ["Z"]
    p, q = qutrit_p(), qutrit_q()
    assert [round(np.trace(m).real) for m in p.projections] == [2, 1]
    assert [round(np.trace(m).real) for m in q.projections] == [2, 1]


def test_family_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        validate_family([z_pvm(), qutrit_p()])


def test_catalog():
    cat = paper_examples()
    assert set(cat) == {"Bell", "Mix", "S1", "S2", "QutritPhi3", "QutritP", "QutritQ"}
    assert cat["QutritPhi3"].d_a == 3


def test_pvm_transpose_and_conjugation(rng):
    from zuslab.linalg import haar_unitary

    u = haar_unitary(2, rng)
    x = x_pvm().conjugate_by(u)
    validate_pvm(list(x.projections))
    t = x.transpose()
    np.testing.assert_allclose(t.projections[0], x.projections[0].T)
