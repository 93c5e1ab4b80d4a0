"""The maps Lambda and Phi attached to a bipartite state, and ZUS verdicts.

Transpose convention: ``lambda_apply(L, X)`` is Tr_A[(X^T (x) I) rho], so the
conditional operator of a projection P is ``lambda_apply(L, P.T)``, which is
the same as ``steer(L, P)`` = Tr_A[(P (x) I) rho]. For the maximally
entangled state on C^d (x) C^d, ``lambda_apply`` gives X/d and ``steer``
gives X^T/d. Transposes are always taken in the computational basis of H_A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch
from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    kron,
    numerical_rank,
    opnorm,
    psd_power,
    support_isometry,
    support_projection,
)
from .objects import BipartiteState, Pvm, PvmFamily


@dataclass(frozen=True, eq=False)
class LambdaMap:
    state: BipartiteState
    tol: ToleranceConfig = DEFAULT_TOL

    @cached_property
    def _rho4(self) -> np.ndarray:
        s = self.state
        return s.rho.reshape(s.d_a, s.d_b, s.d_a, s.d_b)

    @cached_property
    def rho_b(self) -> np.ndarray:
        return self.state.reduced_b()

    @cached_property
    def support_s(self) -> np.ndarray:
        return support_projection(self.rho_b, self.tol)

    @cached_property
    def support_basis(self) -> np.ndarray:
        return support_isometry(self.rho_b, self.tol)

    @cached_property
    def rho_b_inv_sqrt(self) -> np.ndarray:
        return psd_power(self.rho_b, -0.5, self.tol)

    @cached_property
    def rho_b_sqrt(self) -> np.ndarray:
        return psd_power(self.rho_b, 0.5, self.tol)

    @property
    def d_a(self) -> int:
        return self.state.d_a

    @property
    def d_b(self) -> int:
        return self.state.d_b


def lambda_map(state: BipartiteState, tol: ToleranceConfig = DEFAULT_TOL) -> LambdaMap:
    return LambdaMap(state, tol)


def _check_a(L: LambdaMap, x) -> np.ndarray:
    x = as_matrix(x)
    if x.shape != (L.d_a, L.d_a):
        raise DimensionMismatch(f"operator of shape {x.shape} does not act on H_A = C^{L.d_a}")
    return x


def steer(L: LambdaMap, x) -> np.ndarray:
    """Tr_A[(X (x) I) rho] -- no transpose."""
    x = _check_a(L, x)
    return np.einsum("ij,jkil->kl", x, L._rho4)


def lambda_apply(L: LambdaMap, x) -> np.ndarray:
    """Tr_A[(X^T (x) I) rho]."""
    x = _check_a(L, x)
    return np.einsum("ji,jkil->kl", x, L._rho4)


def phi_apply(L: LambdaMap, x) -> np.ndarray:
    """rho_B^{-1/2} Lambda(X) rho_B^{-1/2}, pseudo-inverse on supp(rho_B)."""
    r = L.rho_b_inv_sqrt
    return r @ lambda_apply(L, x) @ r


@dataclass(frozen=True, eq=False)
class ConditionalAssemblage:
    labels: tuple
    operators: tuple
    pvm: Pvm

    def __iter__(self):
        return iter(zip(self.labels, self.operators))

    def as_dict(self) -> dict:
        return dict(zip(self.labels, self.operators))


def conditional_operators(L: LambdaMap, k: Pvm) -> ConditionalAssemblage:
    if k.dim != L.d_a:
        raise DimensionMismatch(f"PVM acts on C^{k.dim}, state has d_a={L.d_a}")
    ops = tuple(steer(L, p) for p in k.projections)
    return ConditionalAssemblage(k.labels, ops, k)


@dataclass(frozen=True)
class ZusVerdict:
    passed: bool
    worst_overlap: float
    failing_pair: tuple | None
    overlaps: np.ndarray = field(repr=False, default=None)
    labels: tuple = ()

    def __bool__(self):
        return self.passed


def overlap_matrix(ops, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Normalized overlaps ||Z_a Z_b|| / (||Z_a|| ||Z_b||); zero operators overlap nothing."""
    norms = [opnorm(z) for z in ops]
    n = len(ops)
    out = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            if a == b or norms[a] <= tol.rank_tol or norms[b] <= tol.rank_tol:
                continue
            out[a, b] = opnorm(ops[a] @ ops[b]) / (norms[a] * norms[b])
    return out


def zus_verdict(labels, ops, tol: ToleranceConfig = DEFAULT_TOL, threshold: float | None = None) -> ZusVerdict:
    threshold = tol.eq_tol if threshold is None else threshold
    ov = overlap_matrix(ops, tol)
    worst, pair = 0.0, None
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            v = max(ov[a, b], ov[b, a])
            if v > worst:
                worst, pair = v, (labels[a], labels[b])
    passed = worst <= threshold
    return ZusVerdict(passed, worst, None if passed else pair, ov, tuple(labels))


def is_zus(L: LambdaMap, k: Pvm, tol: ToleranceConfig | None = None) -> ZusVerdict:
    tol = L.tol if tol is None else tol
    asm = conditional_operators(L, k)
    return zus_verdict(asm.labels, asm.operators, tol)


def is_zus_bruteforce(L: LambdaMap, k: Pvm, tol: ToleranceConfig | None = None) -> bool:
    """Support-projection route: supp(Z_a) . supp(Z_b) = 0 for every pair."""
    tol = L.tol if tol is None else tol
    supports = [support_projection(z, tol) for z in conditional_operators(L, k).operators]
    for a in range(len(supports)):
        for b in range(a + 1, len(supports)):
            if np.max(np.abs(supports[a] @ supports[b]), initial=0.0) > 1e-6:
                return False
    return True


@dataclass(frozen=True)
class CommonZusVerdict:
    passed: bool
    members: tuple

    def __bool__(self):
        return self.passed


def is_common_zus(L: LambdaMap, fam: PvmFamily, tol: ToleranceConfig | None = None) -> CommonZusVerdict:
    members = tuple(is_zus(L, k, tol) for k in fam)
    return CommonZusVerdict(all(m.passed for m in members), members)


def choi_operator(L: LambdaMap) -> np.ndarray:
    """sum_ij Lambda(E_ij) (x) E_ij on H_B (x) H_A."""
    d = L.d_a
    out = np.zeros((L.d_b * d, L.d_b * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            out += kron(lambda_apply(L, e), e)
    return out


def kraus_rank(L: LambdaMap, tol: ToleranceConfig | None = None) -> int:
    return numerical_rank(choi_operator(L), L.tol if tol is None else tol)
