"""Small dense linear-algebra helpers for 2x2 and 4x4 complex matrices.

Everything operates on plain numpy arrays. Two-qubit matrices use the
computational basis order |00>, |01>, |10>, |11> with the first qubit as the
slow index, so ``rho.reshape(2, 2, 2, 2)`` has axes (i, k, j, l) for the
element <ik|rho|jl>.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

# Tolerances for density-matrix validation.
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-10

LN2 = np.log(2.0)

KET_0 = np.array([1.0, 0.0], dtype=complex)
KET_1 = np.array([0.0, 1.0], dtype=complex)

PAULI_Y = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)

# Bell vectors (|10> -/+ |01>)/sqrt(2); beta1 is the singlet.
BETA_1 = np.array([0.0, -1.0, 1.0, 0.0], dtype=complex) / np.sqrt(2.0)
BETA_2 = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / np.sqrt(2.0)
PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
PHI_MINUS = np.array([1.0, 0.0, 0.0, -1.0], dtype=complex) / np.sqrt(2.0)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose, batched over leading axes."""
    return np.conj(np.swapaxes(m, -1, -2))


def ket2dm(psi: np.ndarray) -> np.ndarray:
    """Projector |psi><psi| of a (possibly unnormalized) state vector."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def kron2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def herm(m: np.ndarray) -> np.ndarray:
    """Symmetrize to exact Hermiticity."""
    return 0.5 * (m + dagger(m))


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Partial transpose on the second qubit, batched over leading axes."""
    rho = np.asarray(rho)
    shape = rho.shape
    r4 = rho.reshape(shape[:-2] + (2, 2, 2, 2))
    # (i,k),(j,l) -> (i,l),(j,k): swap the two fast (second-qubit) axes.
    nd = r4.ndim
    perm = list(range(nd - 4)) + [nd - 4, nd - 1, nd - 2, nd - 3]
    return r4.transpose(perm).reshape(shape)


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    return bool(np.max(np.abs(m - dagger(m))) <= tol)


def assert_density_matrix(rho: np.ndarray, tol_herm: float = HERM_TOL,
                          tol_trace: float = TRACE_TOL, tol_psd: float = PSD_TOL) -> np.ndarray:
    """Validate Hermiticity, unit trace, and positivity; return the array.

    States failing validation are rejected rather than repaired.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 4):
        raise ValidationError(f"expected a 2x2 or 4x4 matrix, got shape {rho.shape}")
    if not is_hermitian(rho, tol_herm):
        raise ValidationError("matrix is not Hermitian within tolerance")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol_trace:
        raise ValidationError(f"trace {tr} differs from 1 beyond tolerance")
    w = np.linalg.eigvalsh(herm(rho))
    if w.min() < tol_psd:
        raise ValidationError(f"matrix has negative eigenvalue {w.min():.3e}")
    return rho


def is_density_matrix(rho: np.ndarray) -> bool:
    try:
        assert_density_matrix(rho)
    except ValidationError:
        return False
    return True


def is_ppt(rho: np.ndarray, tol: float = 1e-12) -> bool:
    """Positive partial transpose test (separability for two qubits)."""
    w = np.linalg.eigvalsh(herm(partial_transpose(rho)))
    return bool(w.min() >= -tol)


def binary_entropy(x) -> np.ndarray | float:
    """h(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 := 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for v in (x, 1.0 - x):
        mask = v > 0.0
        out = out - np.where(mask, v * np.log2(np.where(mask, v, 1.0)), 0.0)
    return out if out.ndim else float(out)


def entropy_bits(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits; eigenvalues below 1e-15 contribute zero."""
    w = np.linalg.eigvalsh(herm(rho))
    w = w[w > 1e-15]
    return float(-(w * np.log2(w)).sum())


def relative_entropy_bits(rho: np.ndarray, sigma: np.ndarray, clamp: float = 1e-14) -> float:
    """Kullback-Leibler divergence S(rho||sigma) in bits.

    Eigenvalues of sigma are clamped from below so the value stays finite for
    boundary states; with clamp ~1e-14 the distortion is negligible whenever
    supp(rho) is contained in supp(sigma).
    """
    lam, u = np.linalg.eigh(herm(sigma))
    lam = np.maximum(lam, clamp)
    rho_t = dagger(u) @ rho @ u
    cross = float(-np.real(np.diagonal(rho_t)) @ np.log2(lam))
    return cross - entropy_bits(rho)


def matrix_sqrt_psd(rho: np.ndarray) -> np.ndarray:
    """Square root of a PSD Hermitian matrix (negative round-off clipped)."""
    w, u = np.linalg.eigh(herm(rho))
    w = np.sqrt(np.clip(w, 0.0, None))
    return (u * w) @ dagger(u)


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    s = matrix_sqrt_psd(rho)
    w = np.linalg.eigvalsh(herm(s @ sigma @ s))
    return float(np.sqrt(np.clip(w, 0.0, None)).sum() ** 2)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    w = np.linalg.eigvalsh(herm(rho - sigma))
    return float(0.5 * np.abs(w).sum())


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, v.size + 1)
    cond = u - (css - 1.0) / idx > 0
    k = idx[cond][-1]
    theta = (css[cond][-1] - 1.0) / k
    return np.clip(v - theta, 0.0, None)


def project_to_density(m: np.ndarray) -> np.ndarray:
    """Frobenius-nearest density matrix: eigenvalues projected onto the simplex."""
    w, u = np.linalg.eigh(herm(m))
    w = project_to_simplex(w)
    return herm((u * w) @ dagger(u))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-induced random state (rank-limited if requested)."""
    k = rank or dim
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    m = g @ dagger(g)
    return herm(m / np.trace(m).real)


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase fixing."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
