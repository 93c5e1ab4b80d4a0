"""Explicit state families: proper-subalgebra ZUS, larger memory, product extension."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import WedderburnStructure
from .errors import BadBlock, InvalidSigma, NotProper, ValidationError
from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    dagger,
    haar_unitary,
    kron,
    partial_trace,
    permute_subsystems,
    proj,
)
from .objects import BipartiteState, Pvm, max_entangled_state, validate_pvm, validate_state


@dataclass(frozen=True, eq=False)
class ProperSubalgebraRecipe:
    structure: WedderburnStructure
    chosen_block: int  # 0-based
    u_vector: np.ndarray
    v_vector: np.ndarray

    def __post_init__(self):
        if not 0 <= self.chosen_block < self.structure.r:
            raise BadBlock(f"block index {self.chosen_block} outside 0..{self.structure.r - 1}",
                           block=self.chosen_block, r=self.structure.r)
        m = self.structure.blocks[self.chosen_block][1]
        for name in ("u_vector", "v_vector"):
            v = np.asarray(getattr(self, name), dtype=complex).reshape(-1)
            if v.shape != (m,):
                raise ValidationError(f"{name} must have length m = {m}")
            if abs(np.linalg.norm(v) - 1) > DEFAULT_TOL.eq_tol:
                raise ValidationError(f"{name} must be a unit vector")


def default_recipe(structure: WedderburnStructure, block: int = 0) -> ProperSubalgebraRecipe:
    m = structure.blocks[block][1] if 0 <= block < structure.r else 1
    e0 = np.zeros(m, dtype=complex)
    e0[0] = 1.0
    return ProperSubalgebraRecipe(structure, block, e0, e0)


def proper_subalgebra_zus(recipe: ProperSubalgebraRecipe) -> BipartiteState:
    """Maximally entangled on one visible factor, product on its multiplicity space.

    H_B is identified with H_A through the same Wedderburn transform.
    """
    st = recipe.structure
    if st.is_full():
        raise NotProper("the algebra is all of B(H_A); the construction needs a proper subalgebra")
    a0 = recipe.chosen_block
    n, m = st.blocks[a0]
    u = np.asarray(recipe.u_vector, dtype=complex).reshape(-1)
    v = np.asarray(recipe.v_vector, dtype=complex).reshape(-1)
    d = st.transform.shape[0]
    off = st.offsets[a0]
    psi_block = np.zeros((d, d), dtype=complex)
    for j in range(n):
        a = np.zeros(d, dtype=complex)
        b = np.zeros(d, dtype=complex)
        a[off + j * m: off + (j + 1) * m] = u
        b[off + j * m: off + (j + 1) * m] = v
        psi_block += np.outer(a, b) / np.sqrt(n)
    wd = dagger(st.transform)
    psi = (wd @ psi_block @ wd.T).reshape(-1)  # (W^dag (x) W^dag) applied to the coefficient matrix
    return validate_state(proj(psi), d, d)


def expected_rho_a(recipe: ProperSubalgebraRecipe) -> np.ndarray:
    """Reduced state W^dag (0 + (1/n) I_n (x) |u><u| + 0) W."""
    st = recipe.structure
    n, m = st.blocks[recipe.chosen_block]
    d = st.transform.shape[0]
    off = st.offsets[recipe.chosen_block]
    y = np.zeros((d, d), dtype=complex)
    y[off:off + n * m, off:off + n * m] = np.kron(np.eye(n) / n, proj(recipe.u_vector))
    return dagger(st.transform) @ y @ st.transform


def analytic_defect(recipe: ProperSubalgebraRecipe) -> float:
    """||rho_A - I/d|| in operator norm, from the block form of rho_A."""
    st = recipe.structure
    n, _ = st.blocks[recipe.chosen_block]
    d = st.transform.shape[0]
    out = abs(1 / n - 1 / d)
    if n < d:
        out = max(out, 1 / d)
    return out


def _check_density(sigma, what: str = "sigma") -> np.ndarray:
    sigma = as_matrix(sigma)
    try:
        validate_state(sigma, sigma.shape[0], 1)
    except ValidationError as exc:
        raise InvalidSigma(f"{what} is not a density operator: {exc}", **exc.details) from exc
    return (sigma + dagger(sigma)) / 2


def larger_memory_zus(d: int, sigma) -> BipartiteState:
    """|Phi+><Phi+|_{A B1} (x) sigma_{B2} on C^d (x) (C^d (x) K)."""
    sigma = _check_density(np.atleast_2d(sigma))
    k = sigma.shape[0]
    rho = kron(max_entangled_state(d).rho, sigma)
    return validate_state(rho, d, d * k)


def product_extension_zus(rho0: BipartiteState, omega) -> BipartiteState:
    omega = _check_density(np.atleast_2d(omega), "omega")
    return validate_state(kron(rho0.rho, omega), rho0.d_a, rho0.d_b * omega.shape[0])


@dataclass(frozen=True, eq=False)
class AppendixExample:
    state: BipartiteState
    algebra_blocks: tuple  # block pattern of the observable algebra in the computational basis
    memory: np.ndarray  # tau (example 1) or sigma (example 2)

    def expected_conditional(self, e) -> np.ndarray:
        """1/2 E^T (x) memory, the conditional operator of E (x) I_{A2} (or E)."""
        return kron(as_matrix(e).T / 2, self.memory)


def appendix_c_example_1(omega) -> AppendixExample:
    """rho = Phi+_{A1B1} (x) omega_{A2B2}, with A = A1 A2 and B = B1 B2 (all qubits)."""
    omega = _check_density(omega, "omega")
    if omega.shape != (4, 4):
        raise InvalidSigma("omega must act on C^2 (x) C^2")
    raw = kron(max_entangled_state(2).rho, omega)  # factor order A1 B1 A2 B2
    rho = permute_subsystems(raw, [2, 2, 2, 2], [0, 2, 1, 3])
    tau = partial_trace(omega, 2, 2, over="A")
    return AppendixExample(validate_state(rho, 4, 4), ((2, 2),), tau)


def appendix_c_example_2(sigma) -> AppendixExample:
    sigma = _check_density(sigma)
    if sigma.shape != (2, 2):
        raise InvalidSigma("sigma must act on C^2")
    return AppendixExample(larger_memory_zus(2, sigma), ((2, 1),), sigma)


def appendix_c_catalog(omega=None, sigma=None) -> dict:
    """Both memory examples; defaults are omega = |00><00| and sigma = I/2."""
    omega = proj([1, 0, 0, 0]) if omega is None else omega
    sigma = np.eye(2) / 2 if sigma is None else sigma
    return {"appendix-c-1": appendix_c_example_1(omega), "appendix-c-2": appendix_c_example_2(sigma)}


# -- PVMs inside an algebra ------------------------------------------------


def _fourier(n: int) -> np.ndarray:
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return np.exp(2j * np.pi * j * k / n) / np.sqrt(n)


def pvm_in_algebra(structure: WedderburnStructure, unitaries, assignment, n_outcomes: int,
                   tol: ToleranceConfig = DEFAULT_TOL, name: str = "") -> Pvm:
    """E_alpha = W^dag (sum_a (u_a D_alpha^(a) u_a^dag) (x) I_{m_a}) W, zero outcomes dropped.

    ``assignment[a][j]`` is the outcome of the j-th rotated basis vector in block a.
    """
    outcomes = []
    for alpha in range(n_outcomes):
        parts = []
        for (n, _), u, lab in zip(structure.blocks, unitaries, assignment):
            diag = np.diag([1.0 if lab[j] == alpha else 0.0 for j in range(n)])
            parts.append(u @ diag @ dagger(u))
        if any(np.any(p) for p in parts):
            outcomes.append((alpha, structure.embed(parts)))
    return validate_pvm([p for _, p in outcomes], tol, labels=[str(a) for a, _ in outcomes], name=name)


def sample_pvms(structure: WedderburnStructure, n_samples: int, rng: np.random.Generator,
                tol: ToleranceConfig = DEFAULT_TOL) -> list[Pvm]:
    """PVMs inside the algebra: Haar rotations per block of random outcome patterns.

    The first samples are deterministic: the fine-grained computational and
    Fourier bases of every block (the latter is the X basis for qubit blocks).
    After that, outcome counts and assignments are random, so degenerate
    patterns (several vectors or blocks sharing an outcome) are covered.
    """
    out = []
    blocks = structure.blocks
    total = sum(n for n, _ in blocks)
    fixed = []
    for kind in ("computational", "fourier"):
        us = [np.eye(n) if kind == "computational" else _fourier(n) for n, _ in blocks]
        lab, c = [], 0
        for n, _ in blocks:
            lab.append(list(range(c, c + n)))
            c += n
        fixed.append(pvm_in_algebra(structure, us, lab, total, tol, name=kind))
    for pvm in fixed[:n_samples]:
        out.append(pvm)
    while len(out) < n_samples:
        k = int(rng.integers(1, total + 1))
        us = [haar_unitary(n, rng) for n, _ in blocks]
        lab = [list(rng.integers(0, k, size=n)) for n, _ in blocks]
        out.append(pvm_in_algebra(structure, us, lab, k, tol, name=f"sample{len(out)}"))
    return out
