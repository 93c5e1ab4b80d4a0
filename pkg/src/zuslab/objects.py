"""Validated states, PVMs and PVM families, plus the named example objects."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NotComplete,
    NotHermitian,
    NotOrthogonal,
    NotProjection,
    NotPsd,
    TraceNotOne,
    ValidationError,
)
from .linalg import DEFAULT_TOL, ToleranceConfig, as_matrix, dagger, ket, partial_trace, proj


@dataclass(frozen=True, eq=False)
class BipartiteState:
    rho: np.ndarray
    d_a: int
    d_b: int

    @property
    def dim(self) -> int:
        return self.d_a * self.d_b

    def reduced_a(self) -> np.ndarray:
        return partial_trace(self.rho, self.d_a, self.d_b, over="B")

    def reduced_b(self) -> np.ndarray:
        return partial_trace(self.rho, self.d_a, self.d_b, over="A")


@dataclass(frozen=True, eq=False)
class Pvm:
    projections: tuple
    labels: tuple
    name: str = ""

    @property
    def dim(self) -> int:
        return self.projections[0].shape[0]

    def __len__(self):
        return len(self.projections)

    def __iter__(self):
        return iter(zip(self.labels, self.projections))

    def transpose(self) -> "Pvm":
        return Pvm(tuple(p.T.copy() for p in self.projections), self.labels, self.name)

    def conjugate_by(self, u: np.ndarray) -> "Pvm":
        return Pvm(tuple(u @ p @ dagger(u) for p in self.projections), self.labels, self.name)


@dataclass(frozen=True, eq=False)
class PvmFamily:
    pvms: tuple = ()
    d_a: int | None = None
    name: str = ""

    def __len__(self):
        return len(self.pvms)

    def __iter__(self):
        return iter(self.pvms)

    def projectors(self) -> list:
        return [p for pvm in self.pvms for p in pvm.projections]

    def conjugate_by(self, u: np.ndarray) -> "PvmFamily":
        return PvmFamily(tuple(p.conjugate_by(u) for p in self.pvms), self.d_a, self.name)


def validate_state(rho, d_a: int, d_b: int, tol: ToleranceConfig = DEFAULT_TOL) -> BipartiteState:
    """Check a density operator on C^d_a (x) C^d_b.

    Raises DimensionMismatch, NotHermitian, NotPsd or TraceNotOne; each
    carries a ``report`` with the offending magnitude.
    """
    rho = as_matrix(rho)
    n = d_a * d_b
    if d_a < 1 or d_b < 1 or rho.shape != (n, n):
        raise DimensionMismatch(
            f"state matrix has shape {rho.shape}, expected ({n}, {n}) for d_a={d_a}, d_b={d_b}",
            shape=list(rho.shape), d_a=d_a, d_b=d_b,
        )
    herm = float(np.max(np.abs(rho - dagger(rho))))
    if herm > tol.eq_tol:
        raise NotHermitian(herm)
    rho = (rho + dagger(rho)) / 2
    tr = float(np.trace(rho).real)
    if abs(tr - 1) > tol.eq_tol:
        raise TraceNotOne(tr)
    lo = float(np.linalg.eigvalsh(rho)[0])
    if lo < -tol.psd_tol:
        raise NotPsd(lo)
    return BipartiteState(rho, d_a, d_b)


def validate_pvm(projs: Sequence, tol: ToleranceConfig = DEFAULT_TOL, labels: Sequence | None = None, name: str = "") -> Pvm:
    if len(projs) == 0:
        raise ValidationError("PVM must have at least one outcome")
    ps = [as_matrix(p) for p in projs]
    d = ps[0].shape[0]
    for p in ps:
        if p.shape != (d, d):
            raise DimensionMismatch(f"projection of shape {p.shape} in a PVM on C^{d}", dim=d)
    labels = [str(i) for i in range(len(ps))] if labels is None else [str(x) for x in labels]
    if len(labels) != len(ps):
        raise ValidationError("number of labels does not match number of projections")
    if len(set(labels)) != len(labels):
        raise ValidationError("outcome labels must be distinct")
    for lab, p in zip(labels, ps):
        defect = max(float(np.max(np.abs(p @ p - p))), float(np.max(np.abs(p - dagger(p)))))
        if defect > tol.eq_tol:
            raise NotProjection(f"outcome {lab!r} is not an orthogonal projection (defect {defect:.3e})",
                                outcome=lab, defect=defect)
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            overlap = float(np.max(np.abs(ps[i] @ ps[j])))
            if overlap > tol.eq_tol:
                raise NotOrthogonal(f"outcomes {labels[i]!r} and {labels[j]!r} overlap ({overlap:.3e})",
                                    pair=[labels[i], labels[j]], defect=overlap)
    completeness = float(np.linalg.norm(sum(ps) - np.eye(d), 2))
    if completeness > tol.eq_tol:
        raise NotComplete(f"projections do not sum to identity (defect norm {completeness:.3e})",
                          defect=completeness)
    return Pvm(tuple(ps), tuple(labels), name)


def validate_family(pvms: Sequence[Pvm], d_a: int | None = None, name: str = "") -> PvmFamily:
    dims = {p.dim for p in pvms}
    if d_a is not None:
        dims.add(d_a)
    if len(dims) > 1:
        raise DimensionMismatch(f"family members act on different dimensions {sorted(dims)}")
    d = dims.pop() if dims else d_a
    return PvmFamily(tuple(pvms), d, name)


def pure_state(psi, d_a: int, d_b: int) -> BipartiteState:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    return validate_state(proj(psi), d_a, d_b)


def max_entangled_vector(d: int) -> np.ndarray:
    return sum(np.kron(ket(j, d), ket(j, d)) for j in range(d)) / np.sqrt(d)


def max_entangled_state(d: int) -> BipartiteState:
    if d < 1:
        raise ValueError("d must be >= 1")
    return pure_state(max_entangled_vector(d), d, d)


def basis_pvm(vectors, labels=None, name: str = "") -> Pvm:
    """Rank-one PVM from an orthonormal list of vectors."""
    return validate_pvm([proj(v) for v in vectors], labels=labels, name=name)


_SQ2 = 1 / np.sqrt(2)
Z_BASIS = ([1, 0], [0, 1])
X_BASIS = ([_SQ2, _SQ2], [_SQ2, -_SQ2])


def bell() -> BipartiteState:
    return max_entangled_state(2)


def mix() -> BipartiteState:
    return validate_state((proj([1, 0, 0, 0]) + proj([0, 0, 0, 1])) / 2, 2, 2)


def z_pvm() -> Pvm:
    return basis_pvm(Z_BASIS, labels=["0", "1"], name="Z")


def x_pvm() -> Pvm:
    return basis_pvm(X_BASIS, labels=["+", "-"], name="X")


def s1() -> PvmFamily:
    return validate_family([z_pvm(), x_pvm()], name="S1")


def s2() -> PvmFamily:
    return validate_family([z_pvm()], name="S2")


def qutrit_phi3() -> BipartiteState:
    return max_entangled_state(3)


def qutrit_p() -> Pvm:
    p0 = proj([1, 0, 0]) + proj([0, 1, 0])
    p1 = proj([0, 0, 1])
    return validate_pvm([p0, p1], labels=["0", "1"], name="P")


def qutrit_q() -> Pvm:
    v = np.array([0, 1, 1]) * _SQ2
    q1 = proj(v)
    return validate_pvm([np.eye(3) - q1, q1], labels=["0", "1"], name="Q")


@dataclass(frozen=True)
class Catalog:
    """Named constructors for the worked examples."""

    entries: dict = field(default_factory=lambda: {
        "Bell": bell,
        "Mix": mix,
        "S1": s1,
        "S2": s2,
        "QutritPhi3": qutrit_phi3,
        "QutritP": qutrit_p,
        "QutritQ": qutrit_q,
    })

    def __getitem__(self, name):
        return self.entries[name]()

    def __iter__(self):
        return iter(self.entries)


def paper_examples() -> Catalog:
    return Catalog()
