"""A-ZUS characterization and the block normal form of (phi, rho_B).

Given an observable algebra A on H_A, the visible data of a state is the
restriction phi of the normalized map Phi to A^T, compressed to
S = supp(rho_B). A state is an A-ZUS exactly when phi is a unital
*-homomorphism whose image commutes with rho_B; in that case a unitary
U: S -> sum_a C^{n_a} (x) K_a brings phi to sum_a X_a (x) I and rho_B to
sum_a I_{n_a} (x) tau_a.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_SEED, MatrixAlgebra, WedderburnStructure, full_algebra, wedderburn_decompose
from .constructions import sample_pvms
from .cpmaps import LambdaMap, is_zus, lambda_apply, phi_apply
from .errors import BlockStructureDefect, NotAZus
from .linalg import DEFAULT_TOL, ToleranceConfig, as_matrix, dagger, kron, opnorm, projection_range
from .objects import BipartiteState, max_entangled_state

log = logging.getLogger(__name__)

STRUCTURE_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class RestrictedPhi:
    algebra: MatrixAlgebra  # A^T
    values: np.ndarray  # (k, s, s): phi of each basis element, in the support basis
    support_basis: np.ndarray  # (d_b, s) isometry onto S
    rho_b: np.ndarray  # rho_B compressed to S

    @property
    def support_dim(self) -> int:
        return self.support_basis.shape[1]

    def __call__(self, x) -> np.ndarray:
        c = self.algebra.coefficients(x)
        return np.einsum("k,kij->ij", c, self.values)


def restricted_phi(L: LambdaMap, alg: MatrixAlgebra) -> RestrictedPhi:
    """phi = Phi restricted to A^T, compressed to S."""
    at = alg.transpose()
    v = L.support_basis
    values = np.array([dagger(v) @ phi_apply(L, b) @ v for b in at.basis])
    return RestrictedPhi(at, values, v, dagger(v) @ L.rho_b @ v)


@dataclass(frozen=True)
class AZusCheck:
    is_azus: bool
    hom_defect: float
    commutant_defect: float

    def __bool__(self):
        return self.is_azus


def a_zus_check(L: LambdaMap, alg: MatrixAlgebra, tol: ToleranceConfig | None = None,
                rphi: RestrictedPhi | None = None) -> AZusCheck:
    tol = L.tol if tol is None else tol
    rphi = restricted_phi(L, alg) if rphi is None else rphi
    s = rphi.support_dim
    basis = rphi.algebra.basis
    vals = rphi.values
    hom = opnorm(rphi(np.eye(alg.ambient_dim)) - np.eye(s))
    for a, fa in zip(basis, vals):
        hom = max(hom, opnorm(rphi(dagger(a)) - dagger(fa)))
        for b, fb in zip(basis, vals):
            hom = max(hom, opnorm(rphi(a @ b) - fa @ fb))
    comm = max((opnorm(fa @ rphi.rho_b - rphi.rho_b @ fa) for fa in vals), default=0.0)
    return AZusCheck(hom < tol.eq_tol and comm < tol.eq_tol, hom, comm)


@dataclass(frozen=True)
class EquivalenceResult:
    agree: bool
    is_azus: bool
    sampled_all_zus: bool
    n_samples: int
    first_failure: str | None = None

    def __bool__(self):
        return self.agree


def sampled_zus_equivalence(L: LambdaMap, alg: MatrixAlgebra, n_samples: int = 20,
                            tol: ToleranceConfig | None = None, seed: int = DEFAULT_SEED,
                            structure: WedderburnStructure | None = None) -> EquivalenceResult:
    """Compare the homomorphism test with direct ZUS checks on PVMs sampled from ``alg``."""
    tol = L.tol if tol is None else tol
    check = a_zus_check(L, alg, tol)
    structure = wedderburn_decompose(alg, tol, seed) if structure is None else structure
    rng = np.random.default_rng([seed, 1])
    first = None
    for pvm in sample_pvms(structure, n_samples, rng, tol):
        if not is_zus(L, pvm, tol).passed:
            first = pvm.name
            break
    sampled = first is None
    res = EquivalenceResult(sampled == check.is_azus, check.is_azus, sampled, n_samples, first)
    if not res.agree:
        log.warning("A-ZUS equivalence disagreement: homomorphism test %s, sampled PVMs %s",
                    check.is_azus, sampled)
    return res


@dataclass
class NormalFormBlock:
    algebra_block: int
    n: int
    m: int  # multiplicity of the block inside A^T itself
    k: int  # dim K_a
    tau: np.ndarray

    @property
    def tau_spectrum(self) -> list[float]:
        return sorted((float(x) for x in np.linalg.eigvalsh(self.tau)), reverse=True)


@dataclass
class NormalForm:
    transform_u: np.ndarray  # (s, d_b): H_B -> sum_a C^{n_a} (x) K_a, zero on S-perp
    blocks: list
    structure: WedderburnStructure  # Wedderburn structure of A^T
    support_dim: int
    omitted: list = field(default_factory=list)  # algebra blocks acting as zero on S
    phi_defect: float = 0.0
    rho_b_defect: float = 0.0
    lambda_defect: float = 0.0
    check: AZusCheck | None = None

    @property
    def r(self) -> int:
        return len(self.blocks)

    def block_sum(self, parts) -> np.ndarray:
        dims = [b.n * b.k for b in self.blocks]
        out = np.zeros((sum(dims), sum(dims)), dtype=complex)
        o = 0
        for dim, p in zip(dims, parts):
            out[o:o + dim, o:o + dim] = p
            o += dim
        return out

    def model_lambda(self, x) -> np.ndarray:
        """sum_a X_a (x) tau_a, in block coordinates."""
        comps = self.structure.components(x)
        return self.block_sum([kron(comps[b.algebra_block], b.tau) for b in self.blocks])

    def to_dict(self, full_output: bool = False) -> dict:
        out = {
            "r": self.r,
            "support_dim": self.support_dim,
            "blocks": [{"n": b.n, "k": b.k, "tau_spectrum": b.tau_spectrum} for b in self.blocks],
            "omitted_blocks": [{"algebra_block": a, "n": n, "m": m} for a, n, m in self.omitted],
            "defects": {"phi": self.phi_defect, "rho_b": self.rho_b_defect, "lambda": self.lambda_defect},
        }
        if full_output:
            out["transform_u"] = self.transform_u
            out["taus"] = [b.tau for b in self.blocks]
        return out


def compute_normal_form(L: LambdaMap, alg: MatrixAlgebra, tol: ToleranceConfig | None = None,
                        seed: int = DEFAULT_SEED, n_checks: int = 8,
                        structure_tol: float = STRUCTURE_TOL) -> NormalForm:
    """Block normal form of an A-ZUS.

    Step 1 splits S by the images of the minimal central projections of
    A^T and builds, per block, a basis C^{n} (x) K from matrix units. Step 2
    reads tau_a off the conjugated rho_B; the K basis is chosen to make
    tau_a diagonal. Step 3 checks U Lambda(X) U^dag = sum X_a (x) tau_a on
    the basis of A^T and on ``n_checks`` random elements.
    """
    tol = L.tol if tol is None else tol
    rphi = restricted_phi(L, alg)
    check = a_zus_check(L, alg, tol, rphi)
    if not check.is_azus:
        raise NotAZus("state is not an A-ZUS for this algebra",
                      hom_defect=check.hom_defect, commutant_defect=check.commutant_defect)
    at = rphi.algebra
    ws = wedderburn_decompose(at, tol, seed)
    s = rphi.support_dim
    rows, blocks, omitted = [], [], []
    for a, (n, m) in enumerate(ws.blocks):
        def unit(i, j):
            parts = [np.zeros((nb, nb)) for nb, _ in ws.blocks]
            parts[a] = np.zeros((n, n))
            parts[a][i, j] = 1.0
            return rphi(ws.embed(parts))

        q = rphi(ws.central_projections[a]) if ws.central_projections else sum(unit(i, i) for i in range(n))
        rank = int(round(float(np.real(np.trace(q)))))
        if rank == 0:
            omitted.append((a, n, m))
            continue
        if rank % n:
            raise BlockStructureDefect(f"image of block {a} has rank {rank}, not a multiple of n={n}")
        k = rank // n
        f0 = projection_range(unit(0, 0), tol)
        if f0.shape[1] != k:
            raise BlockStructureDefect(f"matrix unit image has rank {f0.shape[1]}, expected {k}")
        cols = np.concatenate([unit(i, 0) @ f0 for i in range(n)], axis=1)  # column i * k + l
        ua = dagger(cols)
        blk = ua @ rphi.rho_b @ dagger(ua)
        tau = np.einsum("ikil->kl", blk.reshape(n, k, n, k)) / n
        w, g = np.linalg.eigh((tau + dagger(tau)) / 2)
        g = g[:, ::-1]
        ua = kron(np.eye(n), dagger(g)) @ ua
        tau = np.diag(w[::-1]).astype(complex)
        rows.append(ua)
        blocks.append(NormalFormBlock(a, n, m, k, tau))
    u = np.concatenate(rows, axis=0) if rows else np.zeros((0, s), dtype=complex)
    if u.shape[0] != s or opnorm(u @ dagger(u) - np.eye(s)) > structure_tol:
        raise BlockStructureDefect("block bases do not assemble into a unitary on S")
    nf = NormalForm(u @ dagger(rphi.support_basis), blocks, ws, s, omitted, check=check)

    model_rho = nf.block_sum([kron(np.eye(b.n), b.tau) for b in blocks])
    nf.rho_b_defect = opnorm(u @ rphi.rho_b @ dagger(u) - model_rho)
    if nf.rho_b_defect > structure_tol:
        raise BlockStructureDefect(f"rho_B is not of the form sum I (x) tau (defect {nf.rho_b_defect:.3e})",
                                   defect=nf.rho_b_defect)
    rng = np.random.default_rng([seed, 2])
    probes = list(at.basis) + [at.random_element(rng) for _ in range(n_checks)]
    vs = rphi.support_basis
    for x in probes:
        comps = ws.components(x)
        phi_model = nf.block_sum([kron(comps[b.algebra_block], np.eye(b.k)) for b in blocks])
        nf.phi_defect = max(nf.phi_defect, opnorm(u @ rphi(x) @ dagger(u) - phi_model))
        lam = u @ dagger(vs) @ lambda_apply(L, x) @ vs @ dagger(u)
        nf.lambda_defect = max(nf.lambda_defect, opnorm(lam - nf.model_lambda(x)))
    return nf


@dataclass
class FullAlgebraForm:
    u: np.ndarray  # (d * k, d_b), U phi(X) U^dag = X (x) I_K
    sigma: np.ndarray
    reconstructed: BipartiteState
    reconstruction_defect: float
    normal_form: NormalForm


def full_algebra_form(L: LambdaMap, tol: ToleranceConfig | None = None, seed: int = DEFAULT_SEED) -> FullAlgebraForm:
    """Normal form for A = B(H_A): U rho_B U^dag = (1/d) I (x) sigma and the global state."""
    d = L.d_a
    nf = compute_normal_form(L, full_algebra(d), tol, seed)
    if nf.r != 1 or nf.blocks[0].n != d:
        raise BlockStructureDefect(f"full algebra gave blocks {[(b.n, b.k) for b in nf.blocks]}")
    k = nf.blocks[0].k
    w = nf.structure.transform
    # undo the gauge of the M_d decomposition so that U phi(X) U^dag = X (x) I
    u = kron(dagger(w), np.eye(k)) @ nf.transform_u
    sigma = d * nf.blocks[0].tau
    big = kron(np.eye(d), u)
    rho_new = big @ L.state.rho @ dagger(big)
    target = kron(max_entangled_state(d).rho, sigma)
    defect = opnorm(rho_new - target)
    rec = BipartiteState((rho_new + dagger(rho_new)) / 2, d, d * k)
    return FullAlgebraForm(u, sigma, rec, defect, nf)
