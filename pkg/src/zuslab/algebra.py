"""Finite-dimensional *-algebras of matrices.

An algebra is stored as a Hilbert-Schmidt orthonormal basis. Everything
here reduces to linear algebra on vectorized matrices (row-major ``vec``):
span saturation, nullspaces of commutator maps, and spectral splitting of
random probe elements drawn from a seeded generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateSplit, NumericalRankAmbiguity, VerificationFailed
from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    dagger,
    nullspace,
    opnorm,
    orthonormal_span,
    projection_range,
)

DEFAULT_SEED = 20240611
CLUSTER_GAP = 1e-6
MAX_PROBE_RETRIES = 8


@dataclass(frozen=True, eq=False)
class MatrixAlgebra:
    ambient_dim: int
    basis: np.ndarray  # (k, d, d), orthonormal in the Hilbert-Schmidt inner product
    contains_identity: bool = True

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def vectors(self) -> np.ndarray:
        """Basis as columns of a (d^2, k) matrix."""
        return self.basis.reshape(self.dim, -1).T

    def __len__(self):
        return self.dim

    def project(self, x) -> np.ndarray:
        """Orthogonal (Hilbert-Schmidt) projection of ``x`` onto the span."""
        v = np.asarray(x, dtype=complex).reshape(-1)
        q = self.vectors
        return (q @ (dagger(q) @ v)).reshape(self.ambient_dim, self.ambient_dim)

    def coefficients(self, x) -> np.ndarray:
        return dagger(self.vectors) @ np.asarray(x, dtype=complex).reshape(-1)

    def distance(self, x) -> float:
        x = as_matrix(x)
        return float(np.linalg.norm(x - self.project(x)))

    def contains(self, x, tol: float = DEFAULT_TOL.eq_tol) -> bool:
        return self.distance(x) <= tol * max(1.0, float(np.linalg.norm(x)))

    def transpose(self) -> "MatrixAlgebra":
        return MatrixAlgebra(self.ambient_dim, np.transpose(self.basis, (0, 2, 1)).copy(), self.contains_identity)

    def conjugate_by(self, u: np.ndarray) -> "MatrixAlgebra":
        return MatrixAlgebra(self.ambient_dim, np.einsum("ij,kjl,ml->kim", u, self.basis, np.conj(u)),
                             self.contains_identity)

    def random_element(self, rng: np.random.Generator, hermitian: bool = False) -> np.ndarray:
        c = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        x = np.einsum("k,kij->ij", c, self.basis)
        return (x + dagger(x)) / 2 if hermitian else x

    def closure_defects(self) -> tuple[float, float, float]:
        """(adjoint, product, identity) distances from the span."""
        adj = max((self.distance(dagger(b)) for b in self.basis), default=0.0)
        prod = 0.0
        for a in self.basis:
            for b in self.basis:
                prod = max(prod, self.distance(a @ b))
        ident = self.distance(np.eye(self.ambient_dim))
        return adj, prod, ident


def _from_vectors(d: int, q: np.ndarray) -> MatrixAlgebra:
    basis = q.T.reshape(-1, d, d).copy()
    return MatrixAlgebra(d, basis)


def span_algebra(mats: Sequence, d: int, tol: ToleranceConfig = DEFAULT_TOL) -> MatrixAlgebra:
    """Orthonormal basis for the plain linear span (no closure)."""
    if len(mats) == 0:
        return MatrixAlgebra(d, np.zeros((0, d, d), dtype=complex), False)
    v = np.stack([as_matrix(m).reshape(-1) for m in mats], axis=1)
    alg = _from_vectors(d, orthonormal_span(v, tol.rank_tol))
    return MatrixAlgebra(d, alg.basis, alg.contains(np.eye(d)))


def generate_algebra(generators: Sequence, d: int, tol: ToleranceConfig = DEFAULT_TOL) -> MatrixAlgebra:
    """Smallest unital *-subalgebra of M_d containing ``generators``."""
    seed = [np.eye(d, dtype=complex)]
    for g in generators:
        g = as_matrix(g)
        seed += [g, dagger(g)]
    q = orthonormal_span(np.stack([m.reshape(-1) for m in seed], axis=1), tol.rank_tol)
    while True:
        mats = q.T.reshape(-1, d, d)
        prods = np.einsum("aij,bjk->abik", mats, mats).reshape(-1, d * d).T
        q_new = orthonormal_span(np.concatenate([q, prods], axis=1), tol.rank_tol)
        if q_new.shape[1] == q.shape[1]:
            break
        q = q_new
    return _from_vectors(d, q)


def full_algebra(d: int) -> MatrixAlgebra:
    return _from_vectors(d, np.eye(d * d, dtype=complex))


def _commutator_matrix(mats: np.ndarray, d: int) -> np.ndarray:
    """Rows stack the maps vec(Y) -> vec(X Y - Y X) for each X."""
    eye = np.eye(d)
    blocks = [np.kron(x, eye) - np.kron(eye, x.T) for x in mats]
    if not blocks:
        return np.zeros((0, d * d), dtype=complex)
    return np.concatenate(blocks, axis=0)


def commutant(alg: MatrixAlgebra, tol: ToleranceConfig = DEFAULT_TOL) -> MatrixAlgebra:
    d = alg.ambient_dim
    ns = nullspace(_commutator_matrix(alg.basis, d), tol.rank_tol)
    return _from_vectors(d, ns)


def center(alg: MatrixAlgebra, tol: ToleranceConfig = DEFAULT_TOL) -> MatrixAlgebra:
    d = alg.ambient_dim
    q = alg.vectors
    coeffs = nullspace(_commutator_matrix(alg.basis, d) @ q, tol.rank_tol)
    return _from_vectors(d, orthonormal_span(q @ coeffs, tol.rank_tol))


def cluster_eigen(w: np.ndarray, gap: float = CLUSTER_GAP) -> list[np.ndarray]:
    """Index groups of an ascending spectrum separated by gaps larger than ``gap``.

    Raises DegenerateSplit when a gap falls in the ambiguous window between
    the clustering threshold and a thousand times it.
    """
    groups = [[0]]
    for i in range(1, len(w)):
        g = w[i] - w[i - 1]
        if gap < g < 1e3 * gap:
            raise DegenerateSplit(f"probe spectrum gap {g:.2e} is ambiguous", gap=float(g))
        if g <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [np.array(g) for g in groups]


def _probe_rng(seed: int, attempt: int) -> np.random.Generator:
    return np.random.default_rng([seed, attempt])


def minimal_central_projections(alg: MatrixAlgebra, tol: ToleranceConfig = DEFAULT_TOL,
                                seed: int = DEFAULT_SEED) -> list[np.ndarray]:
    """Pairwise orthogonal minimal projections of the center, summing to I."""
    z = center(alg, tol)
    d = alg.ambient_dim
    last = None
    for attempt in range(MAX_PROBE_RETRIES):
        h = z.random_element(_probe_rng(seed, attempt), hermitian=True)
        h = h / max(opnorm(h), 1e-300)
        w, v = np.linalg.eigh(h)
        try:
            groups = cluster_eigen(w)
        except DegenerateSplit as exc:
            last = exc
            continue
        projs = [v[:, g] @ dagger(v[:, g]) for g in groups]
        if len(projs) != z.dim:
            last = DegenerateSplit(f"found {len(projs)} spectral projections for a center of dimension {z.dim}")
            continue
        if any(not z.contains(p, 1e-6) for p in projs):
            last = DegenerateSplit("spectral projection of the probe left the center")
            continue
        return _sort_projections([_clean_projection(p) for p in projs], d)
    raise last or DegenerateSplit("probe retries exhausted")


def _clean_projection(p: np.ndarray) -> np.ndarray:
    return (p + dagger(p)) / 2


def _sort_projections(projs, d):
    return sorted(projs, key=lambda p: tuple(-np.round(np.real(np.diag(p)), 6)))


@dataclass(frozen=True, eq=False)
class WedderburnStructure:
    """W @ X @ W^dag is block diagonal with blocks X_a (x) I_{m_a}.

    Block a occupies rows ``offsets[a] : offsets[a] + n_a * m_a`` with
    composite index ``i * m_a + k`` (i in the matrix factor, k in the
    multiplicity factor).
    """

    transform: np.ndarray
    blocks: tuple  # ((n_a, m_a), ...)
    central_projections: tuple = field(default=(), repr=False)

    @property
    def r(self) -> int:
        return len(self.blocks)

    @property
    def dim(self) -> int:
        return int(sum(n * m for n, m in self.blocks))

    @property
    def offsets(self) -> list[int]:
        out, o = [], 0
        for n, m in self.blocks:
            out.append(o)
            o += n * m
        return out

    @property
    def algebra_dim(self) -> int:
        return int(sum(n * n for n, _ in self.blocks))

    @property
    def commutant_dim(self) -> int:
        return int(sum(m * m for _, m in self.blocks))

    def is_full(self) -> bool:
        return self.r == 1 and self.blocks[0][1] == 1

    def block_form(self, x) -> np.ndarray:
        return self.transform @ as_matrix(x) @ dagger(self.transform)

    def components(self, x) -> list[np.ndarray]:
        """X_a for each block, read from the first multiplicity copy."""
        y = self.block_form(x)
        out = []
        for (n, m), o in zip(self.blocks, self.offsets):
            idx = o + np.arange(n) * m
            out.append(y[np.ix_(idx, idx)])
        return out

    def embed(self, parts: Sequence) -> np.ndarray:
        """W^dag (sum_a X_a (x) I_{m_a}) W, the algebra element with components ``parts``."""
        d = self.transform.shape[0]
        y = np.zeros((d, d), dtype=complex)
        for (n, m), o, xa in zip(self.blocks, self.offsets, parts):
            y[o:o + n * m, o:o + n * m] = np.kron(as_matrix(xa), np.eye(m))
        return dagger(self.transform) @ y @ self.transform

    def block_defect(self, x) -> float:
        """Operator-norm distance of W X W^dag from the block form rebuilt from its components."""
        y = self.block_form(x)
        return opnorm(y - self.transform @ self.embed(self.components(x)) @ dagger(self.transform))

    def basis_vector(self, block: int, i: int, k: int) -> np.ndarray:
        """Column of W^dag for basis vector |i> (x) |k> of block ``block``."""
        n, m = self.blocks[block]
        return np.conj(self.transform[self.offsets[block] + i * m + k])


def _restricted_algebra(alg: MatrixAlgebra, v: np.ndarray, tol: ToleranceConfig) -> MatrixAlgebra:
    da = v.shape[1]
    mats = [dagger(v) @ b @ v for b in alg.basis]
    return span_algebra(mats, da, tol)


def _split_block(alg: MatrixAlgebra, v: np.ndarray, tol: ToleranceConfig, seed: int, label: int):
    """Isometry columns (ordered i * m + k) and (n, m) for one central summand."""
    da = v.shape[1]
    sub = _restricted_algebra(alg, v, tol)
    n = int(round(np.sqrt(sub.dim)))
    if n * n != sub.dim or da % n:
        raise NumericalRankAmbiguity(
            f"central summand of dimension {da} carries an algebra of dimension {sub.dim}, "
            "not of the form n^2 with n | dim", summand_dim=da, algebra_dim=sub.dim)
    m = da // n
    if m == 1:
        return v, (n, 1)
    comm = commutant(sub, tol)
    if comm.dim != m * m:
        raise NumericalRankAmbiguity(f"restricted commutant has dimension {comm.dim}, expected {m * m}")
    last = None
    for attempt in range(MAX_PROBE_RETRIES):
        rng = _probe_rng(seed + 7919 * (label + 1), attempt)
        c = comm.random_element(rng, hermitian=True)
        c = c / max(opnorm(c), 1e-300)
        w, e = np.linalg.eigh(c)
        try:
            groups = cluster_eigen(w)
        except DegenerateSplit as exc:
            last = exc
            continue
        if len(groups) != m or any(len(g) != n for g in groups):
            last = DegenerateSplit(f"multiplicity probe split {da} into {[len(g) for g in groups]}")
            continue
        copies = [e[:, g] for g in groups]
        y = comm.random_element(rng)
        aligned = [copies[0]]
        ok = True
        for wk in copies[1:]:
            t = dagger(wk) @ y @ copies[0]
            s = np.sqrt(np.real(np.trace(dagger(t) @ t)) / n)
            if s < 1e-6:
                ok = False
                break
            u = t / s
            if opnorm(dagger(u) @ u - np.eye(n)) > 1e-6:
                raise NumericalRankAmbiguity("intertwiner between multiplicity copies is not unitary")
            aligned.append(wk @ u)
        if not ok:
            last = DegenerateSplit("random intertwiner vanished")
            continue
        local = np.stack(aligned, axis=2).reshape(da, n * m)  # column i * m + k
        return v @ local, (n, m)
    raise last or DegenerateSplit("probe retries exhausted")


def wedderburn_decompose(alg: MatrixAlgebra, tol: ToleranceConfig = DEFAULT_TOL,
                         seed: int = DEFAULT_SEED) -> WedderburnStructure:
    """Unitary W and blocks (n_a, m_a) with W A W^dag = sum_a M_{n_a} (x) I_{m_a}.

    Blocks are ordered by n descending, then m descending, then by the
    diagonal of the central projection (block touching lower indices first).
    """
    d = alg.ambient_dim
    zs = minimal_central_projections(alg, tol, seed)
    parts = []
    for label, z in enumerate(zs):
        v = projection_range(z, tol)
        iso, nm = _split_block(alg, v, tol, seed, label)
        parts.append((nm, iso, z))
    parts.sort(key=lambda t: (-t[0][0], -t[0][1]))
    vfull = np.concatenate([p[1] for p in parts], axis=1)
    w = dagger(vfull)
    if opnorm(w @ dagger(w) - np.eye(d)) > 1e-8:
        raise NumericalRankAmbiguity("assembled Wedderburn transform is not unitary")
    return WedderburnStructure(w, tuple(p[0] for p in parts), tuple(p[2] for p in parts))


def block_algebra(blocks: Sequence[tuple[int, int]], transform: np.ndarray | None = None) -> MatrixAlgebra:
    """The algebra W^dag (sum_a M_{n_a} (x) I_{m_a}) W with standard matrix units."""
    d = int(sum(n * m for n, m in blocks))
    mats = []
    o = 0
    for n, m in blocks:
        for i in range(n):
            for j in range(n):
                e = np.zeros((n, n))
                e[i, j] = 1.0
                y = np.zeros((d, d), dtype=complex)
                y[o:o + n * m, o:o + n * m] = np.kron(e, np.eye(m)) / np.sqrt(m)
                mats.append(y)
        o += n * m
    if transform is not None:
        mats = [dagger(transform) @ y @ transform for y in mats]
    return MatrixAlgebra(d, np.array(mats))


def block_structure(blocks: Sequence[tuple[int, int]], transform: np.ndarray | None = None) -> WedderburnStructure:
    """WedderburnStructure for an explicitly block-patterned algebra (no probing)."""
    d = int(sum(n * m for n, m in blocks))
    w = np.eye(d, dtype=complex) if transform is None else as_matrix(transform)
    st = WedderburnStructure(w, tuple((int(n), int(m)) for n, m in blocks))
    zs = tuple(st.embed([np.eye(n) if b == a else np.zeros((n, n)) for b, (n, _) in enumerate(blocks)])
               for a in range(len(blocks)))
    return WedderburnStructure(w, st.blocks, zs)


# -- multiplicative domain -------------------------------------------------


@dataclass(frozen=True, eq=False)
class MatrixMap:
    """Linear map M_{d_in} -> M_{d_out} stored as a (d_out^2, d_in^2) matrix on row-major vec."""

    d_in: int
    d_out: int
    matrix: np.ndarray

    def __call__(self, x) -> np.ndarray:
        v = self.matrix @ np.asarray(x, dtype=complex).reshape(-1)
        return v.reshape(self.d_out, self.d_out)

    @classmethod
    def from_function(cls, f: Callable, d_in: int) -> "MatrixMap":
        cols = []
        d_out = None
        for i in range(d_in):
            for j in range(d_in):
                e = np.zeros((d_in, d_in), dtype=complex)
                e[i, j] = 1.0
                y = as_matrix(f(e))
                d_out = y.shape[0]
                cols.append(y.reshape(-1))
        return cls(d_in, d_out, np.stack(cols, axis=1))

    @classmethod
    def from_values(cls, basis: Sequence, values: Sequence, d_in: int) -> "MatrixMap":
        """Map defined on all of M_d by its values on a basis of M_d."""
        b = np.stack([as_matrix(x).reshape(-1) for x in basis], axis=1)
        v = np.stack([as_matrix(y).reshape(-1) for y in values], axis=1)
        d_out = as_matrix(values[0]).shape[0]
        return cls(d_in, d_out, v @ np.linalg.inv(b))


def md_defects(phi: MatrixMap, x) -> tuple[float, float]:
    x = as_matrix(x)
    fx = phi(x)
    left = opnorm(phi(dagger(x) @ x) - dagger(fx) @ fx)
    right = opnorm(phi(x @ dagger(x)) - fx @ dagger(fx))
    return left, right


def md_member(phi: MatrixMap, x, tol: float = DEFAULT_TOL.eq_tol) -> bool:
    left, right = md_defects(phi, x)
    scale = max(1.0, opnorm(as_matrix(x)) ** 2)
    return left < tol * scale and right < tol * scale


def md_algebra(phi: MatrixMap, tol: ToleranceConfig = DEFAULT_TOL) -> MatrixAlgebra:
    """Solve Phi(a e) = Phi(a) Phi(e) and Phi(e a) = Phi(e) Phi(a) over all matrix units e."""
    d, do = phi.d_in, phi.d_out
    eye_in, eye_out = np.eye(d), np.eye(do)
    rows = []
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d))
            e[i, j] = 1.0
            fe = phi(e)
            # vec(a e) = (I (x) e^T) vec(a); vec(F(a) fe) = (I (x) fe^T) vec(F(a))
            rows.append(phi.matrix @ np.kron(eye_in, e.T) - np.kron(eye_out, fe.T) @ phi.matrix)
            rows.append(phi.matrix @ np.kron(e, eye_in) - np.kron(fe, eye_out) @ phi.matrix)
    ns = nullspace(np.concatenate(rows, axis=0), max(tol.rank_tol, 1e-10) * 10)
    alg = _from_vectors(d, ns)
    for b in alg.basis:
        if not md_member(phi, b, max(tol.eq_tol, 1e-8)):
            raise VerificationFailed("bimodule solution fails the multiplicative-domain identities; "
                                     "is the map unital CP?", defects=list(md_defects(phi, b)))
    return alg
