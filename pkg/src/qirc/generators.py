"""Hermitian generators defining the coherence task and its symmetry group."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import HermitianEigen


@dataclass(frozen=True)
class CoherenceGenerator:
    """Fixed Hermitian observable whose eigenbasis is the coherence basis.

    The eigendecomposition is cached because everything downstream (the
    Fisher information task, dephasing, commutant sampling) consumes it.
    A fully degenerate spectrum defines no task and is rejected.
    """

    h: np.ndarray
    eigen: HermitianEigen = None  # type: ignore[assignment]

    def __post_init__(self):
        h = linalg.as_complex(self.h)
        eig = linalg.hermitian_eigen(h)
        spread = float(eig.values[-1] - eig.values[0])
        if spread <= 1e-12 * max(1.0, abs(float(eig.values[-1]))):
            raise ValueError("generator spectrum is fully degenerate")
        h = h.copy()
        h.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "eigen", eig)

    @property
    def dim(self) -> int:
        return self.h.shape[0]

    @property
    def spread(self) -> float:
        return float(self.eigen.values[-1] - self.eigen.values[0])

    def eigenvalue_clusters(self, rtol: float = 1e-9) -> list[list[int]]:
        """Indices of (numerically) equal eigenvalues, ascending order."""
        w = self.eigen.values
        tol = rtol * max(1.0, self.spread)
        clusters: list[list[int]] = [[0]]
        for i in range(1, len(w)):
            if w[i] - w[clusters[-1][0]] <= tol:
                clusters[-1].append(i)
            else:
                clusters.append([i])
        return clusters


def sigma_z_generator() -> CoherenceGenerator:
    return CoherenceGenerator(np.diag([1.0, -1.0]).astype(complex))


def default_generator(d: int) -> CoherenceGenerator:
    """Equally spaced diagonal generator diag(d-1, d-3, ..., -(d-1)).

    Reduces to sigma_z for d = 2; the computational basis is the coherence
    basis in every dimension.
    """
    if d < 2:
        raise ValueError(f"generator needs dimension >= 2, got {d}")
    return CoherenceGenerator(np.diag([d - 1 - 2 * k for k in range(d)]).astype(complex))


def diagonal_generator(values) -> CoherenceGenerator:
    return CoherenceGenerator(np.diag(np.asarray(values, dtype=float)).astype(complex))
