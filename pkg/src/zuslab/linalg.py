"""Dense complex linear-algebra primitives.

Matrices are plain ``numpy.ndarray`` objects of complex dtype. Tensor
factors use the row-major composite index ``i_a * d_b + i_b`` everywhere,
so ``kron``, ``partial_trace`` and the JSON layout agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPsd


@dataclass(frozen=True)
class ToleranceConfig:
    eq_tol: float = 1e-9
    rank_tol: float = 1e-9
    psd_tol: float = 1e-10

    def __post_init__(self):
        for name in ("eq_tol", "rank_tol", "psd_tol"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    def replace(self, **kw) -> "ToleranceConfig":
        return ToleranceConfig(**{**self.__dict__, **kw})


DEFAULT_TOL = ToleranceConfig()


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def opnorm(m: np.ndarray) -> float:
    """Operator (spectral) norm; 0 for empty matrices."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, d_a: int, d_b: int, over: str = "A") -> np.ndarray:
    """Trace out subsystem ``over`` ("A" or "B") of an operator on C^d_a (x) C^d_b."""
    m = as_matrix(m)
    n = d_a * d_b
    if m.shape != (n, n):
        raise DimensionMismatch(f"matrix shape {m.shape} does not match {d_a}x{d_b} split")
    t = m.reshape(d_a, d_b, d_a, d_b)
    if over in ("A", "a"):
        return np.einsum("ikil->kl", t)
    if over in ("B", "b"):
        return np.einsum("ikjk->ij", t)
    raise ValueError(f"over must be 'A' or 'B', not {over!r}")


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL.eq_tol) -> bool:
    return m.shape[0] == m.shape[1] and float(np.max(np.abs(m - dagger(m)), initial=0.0)) <= tol


def hermitian_eig(m, tol: ToleranceConfig = DEFAULT_TOL):
    """Eigenvalues in descending order and the matching unitary of eigenvectors.

    Raises NotHermitian if ``m`` is not Hermitian within ``tol.eq_tol``.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"square matrix required, got {m.shape}")
    defect = float(np.max(np.abs(m - dagger(m)), initial=0.0))
    if defect > tol.eq_tol:
        raise NotHermitian(defect)
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    return w[::-1].copy(), v[:, ::-1].copy()


def _psd_eig(m, tol: ToleranceConfig):
    w, v = hermitian_eig(m, tol)
    if w.size and w[-1] < -tol.psd_tol:
        raise NotPsd(float(w[-1]))
    return w, v


def support_projection(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    w, v = _psd_eig(m, tol)
    keep = v[:, w > tol.rank_tol]
    return keep @ dagger(keep)


def support_isometry(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Columns form an orthonormal basis of the support, largest eigenvalue first."""
    w, v = _psd_eig(m, tol)
    return v[:, w > tol.rank_tol]


def psd_power(m, exponent: float, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Spectral power restricted to the support; eigenvalues below rank_tol map to 0.

    Only the exponents +1/2 and -1/2 are meaningful for this package, but any
    real exponent works the same way.
    """
    w, v = _psd_eig(m, tol)
    f = np.zeros_like(w)
    pos = w > tol.rank_tol
    f[pos] = w[pos] ** exponent
    return (v * f) @ dagger(v)


def numerical_rank(m, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    m = as_matrix(m)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol.rank_tol))


def swap_unitary(d_a: int, d_b: int) -> np.ndarray:
    """F with F(|x>|y>) = |y>|x>, mapping C^d_a (x) C^d_b onto C^d_b (x) C^d_a."""
    n = d_a * d_b
    f = np.zeros((n, n), dtype=complex)
    for x in range(d_a):
        for y in range(d_b):
            f[y * d_a + x, x * d_b + y] = 1.0
    return f


def permute_subsystems(m, dims, perm) -> np.ndarray:
    """Reorder tensor factors of a square operator.

    ``perm[k]`` names the old factor that becomes factor ``k``.
    """
    m = as_matrix(m)
    dims = list(dims)
    k = len(dims)
    t = m.reshape(dims + dims)
    t = t.transpose(list(perm) + [k + p for p in perm])
    n = int(np.prod(dims))
    return t.reshape(n, n)


def projection_range(p, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the range of a projection, chosen deterministically.

    Greedy column pivoting (largest residual first, lowest index on ties)
    with each vector's pivot entry made real positive. For a diagonal
    projection this returns standard basis vectors in index order.
    """
    p = as_matrix(p)
    rank = int(round(float(np.real(np.trace(p)))))
    cols = p.copy()
    basis = []
    for _ in range(rank):
        norms = np.linalg.norm(cols, axis=0)
        j = int(np.argmax(norms > norms.max() - 1e-12))
        if norms[j] <= tol.rank_tol:
            break
        v = cols[:, j] / norms[j]
        piv = int(np.argmax(np.abs(v) > np.abs(v).max() - 1e-12))
        v = v * (abs(v[piv]) / v[piv])
        basis.append(v)
        cols = cols - np.outer(v, np.conj(v) @ cols)
    if not basis:
        return np.zeros((p.shape[0], 0), dtype=complex)
    q = np.stack(basis, axis=1)
    order = np.argsort([int(np.argmax(np.abs(q[:, c]) > 1e-12)) for c in range(q.shape[1])], kind="stable")
    return q[:, order]


def orthonormal_span(vectors: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (columns) for the column span, singular-value cutoff ``tol``."""
    if vectors.shape[1] == 0:
        return vectors
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    return u[:, s > tol]


def nullspace(m: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the right nullspace of ``m``."""
    n = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(s > tol))
    return np.conj(vh[rank:]).T


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix of the given rank (Ginibre construction)."""
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def ket(index: int, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[index] = 1.0
    return v


def proj(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, np.conj(v))
