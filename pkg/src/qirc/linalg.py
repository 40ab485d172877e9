"""Dense complex linear algebra primitives.

All quantum objects in this package are plain ``numpy`` arrays underneath;
this module provides the handful of operations everything else is built on:
tensor products, partial traces, validated Hermitian eigendecompositions,
spectral functions of positive semidefinite matrices, and Uhlmann fidelity.

Conventions: row-major storage, subsystem index 0 is the leftmost tensor
factor. Composite row index for dims (d0, d1, ...) is i0*d1*... + i1*... .
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .tolerances import EPS_HERM, EPS_PSD

# Dimensions beyond this are out of scope (dense storage only).
MAX_DIM = 4096


class HermitianEigen(NamedTuple):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    values: np.ndarray   # real, ascending
    vectors: np.ndarray  # columns are orthonormal eigenvectors


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def as_complex(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains non-finite entries")
    return m


def is_hermitian(m: np.ndarray, tol: float = EPS_HERM) -> bool:
    scale = max(1.0, frobenius(m))
    return frobenius(m - dagger(m)) <= tol * scale


def check_dims(dims: Sequence[int], dim: int) -> tuple[int, ...]:
    """Validate a subsystem dimension list against a total dimension."""
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise ValueError(f"subsystem dimensions must be positive, got {out}")
    if int(np.prod(out)) != dim:
        raise ValueError(f"dims {out} do not multiply to matrix dimension {dim}")
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product a ⊗ b with row-major index (i*rb + k, j*cb + l)."""
    a = as_complex(a)
    b = as_complex(b)
    if a.shape[0] * b.shape[0] > MAX_DIM or a.shape[1] * b.shape[1] > MAX_DIM:
        raise ValueError("tensor product dimension exceeds supported size")
    return np.kron(a, b)


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    out = None
    for f in factors:
        out = np.asarray(f, dtype=complex) if out is None else kron(out, f)
    if out is None:
        raise ValueError("empty factor list")
    return out


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not in ``keep``; kept factors stay in order."""
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dims = check_dims(dims, m.shape[0])
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep {keep} out of range for {n} subsystems")
    t = m.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out_axes = keep + [i + n for i in keep]
    reduced = np.einsum(t, row + col, out_axes)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return reduced.reshape(d_keep, d_keep)


def permute_subsystems(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: new subsystem k is old subsystem perm[k]."""
    m = as_complex(m)
    dims = check_dims(dims, m.shape[0])
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"perm {perm} is not a permutation of 0..{n - 1}")
    t = m.reshape(dims + dims)
    t = t.transpose(perm + [p + n for p in perm])
    return t.reshape(m.shape)


def hermitian_eigen(m: np.ndarray, tol: float = EPS_HERM) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix (symmetrized internally)."""
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m, tol):
        resid = frobenius(m - dagger(m)) / max(1.0, frobenius(m))
        raise ValueError(f"matrix is not Hermitian (residual {resid:.3e} > {tol:.1e})")
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    return HermitianEigen(values=w, vectors=v)


def psd_power(m: np.ndarray, exponent: float, support_cutoff: float = EPS_PSD) -> np.ndarray:
    """Spectral power of a PSD matrix, evaluated only on its support.

    Eigenvalues in (-EPS_PSD, 0) are clipped to zero; anything more negative
    is rejected. Eigenvalues at or below ``support_cutoff`` map to 0, which
    makes negative exponents act as pseudo-inverse powers.
    """
    eig = hermitian_eigen(m)
    w = eig.values
    if w[0] < -EPS_PSD:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    f = np.where(w > support_cutoff, w, 1.0) ** exponent
    f = np.where(w > support_cutoff, f, 0.0)
    return (eig.vectors * f) @ dagger(eig.vectors)


def support_projector(m: np.ndarray, support_cutoff: float = EPS_PSD) -> np.ndarray:
    """Projector onto the support (range) of a PSD matrix."""
    return psd_power(m, 0.0, support_cutoff)


def uhlmann_fidelity(rho, sigma) -> float:
    """F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, in [0, 1]."""
    r = as_complex(getattr(rho, "matrix", rho))
    s = as_complex(getattr(sigma, "matrix", sigma))
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    sqrt_r = psd_power(r, 0.5)
    inner = sqrt_r @ s @ sqrt_r
    w = np.linalg.eigvalsh((inner + dagger(inner)) / 2)
    root_sum = float(np.sqrt(np.clip(w, 0.0, None)).sum())
    return float(min(1.0, root_sum * root_sum))
