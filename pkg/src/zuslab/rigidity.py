"""Equal-dimension rigidity checks: purity and maximal entanglement."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import generate_algebra
from .cpmaps import is_common_zus, kraus_rank, lambda_map
from .errors import NotPure
from .linalg import DEFAULT_TOL, ToleranceConfig, opnorm
from .objects import BipartiteState, PvmFamily

MAX_ENT_TOL = 1e-8


def purity(state: BipartiteState) -> float:
    return float(np.real(np.trace(state.rho @ state.rho)))


def reduced_a(state: BipartiteState) -> np.ndarray:
    return state.reduced_a()


def maximally_mixed_defect(state: BipartiteState) -> float:
    rho_a = state.reduced_a()
    return opnorm(rho_a - np.eye(state.d_a) / state.d_a)


def schmidt_coefficients(state: BipartiteState, tol: float = DEFAULT_TOL.eq_tol) -> list[float]:
    """Descending Schmidt coefficients s_j (squared singular values), padded with zeros to max(d_a, d_b)."""
    p = purity(state)
    if p < 1 - tol:
        raise NotPure(f"purity {p:.12g} is below 1 - {tol:g}", purity=p)
    w, v = np.linalg.eigh(state.rho)
    psi = v[:, -1].reshape(state.d_a, state.d_b)
    s = np.linalg.svd(psi, compute_uv=False) ** 2
    s = s / s.sum()
    out = np.zeros(max(state.d_a, state.d_b))
    out[: s.size] = s
    return [float(x) for x in out]


@dataclass
class RigidityReport:
    dims_equal: bool
    common_zus: bool
    algebra_full: bool
    algebra_dim: int
    purity: float
    kraus_rank: int
    rho_a_maximally_mixed_defect: float
    schmidt_coeffs: list = field(default_factory=list)
    is_max_entangled: bool = False
    theorem_violation: bool = False

    @property
    def hypotheses_hold(self) -> bool:
        return self.dims_equal and self.common_zus and self.algebra_full

    def to_dict(self) -> dict:
        d = asdict(self)
        return {
            "hypotheses": {k: d[k] for k in ("dims_equal", "common_zus", "algebra_full")},
            "algebra_dim": d["algebra_dim"],
            "conclusions": {k: d[k] for k in ("purity", "kraus_rank", "rho_a_maximally_mixed_defect",
                                              "schmidt_coeffs", "is_max_entangled")},
            "theorem_violation": d["theorem_violation"],
        }


def verify_rigidity(state: BipartiteState, fam: PvmFamily, tol: ToleranceConfig = DEFAULT_TOL,
                    algebra=None) -> RigidityReport:
    """Evaluate the rigidity hypotheses and conclusions independently.

    ``theorem_violation`` is set when all hypotheses hold but the state is
    not pure and maximally entangled; on correct input it never fires.
    """
    L = lambda_map(state, tol)
    alg = generate_algebra(fam.projectors(), state.d_a, tol) if algebra is None else algebra
    p = purity(state)
    defect = maximally_mixed_defect(state)
    try:
        schmidt = schmidt_coefficients(state, MAX_ENT_TOL)
    except NotPure:
        schmidt = []
    max_ent = abs(p - 1) < MAX_ENT_TOL and defect < MAX_ENT_TOL
    rep = RigidityReport(
        dims_equal=state.d_a == state.d_b,
        common_zus=is_common_zus(L, fam, tol).passed,
        algebra_full=alg.dim == state.d_a ** 2,
        algebra_dim=alg.dim,
        purity=p,
        kraus_rank=kraus_rank(L, tol),
        rho_a_maximally_mixed_defect=defect,
        schmidt_coeffs=schmidt,
        is_max_entangled=max_ent,
    )
    rep.theorem_violation = rep.hypotheses_hold and not max_ent
    return rep
