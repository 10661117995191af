"""
Hermitian linear-algebra primitives.

Everything here operates on dense complex ``numpy`` arrays and returns new
arrays; inputs are never modified.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NotPSDError

__all__ = ["EigenSystem", "hermitian_eig", "psd_sqrt", "psd_project"]

# Negative eigenvalues down to this fraction of the largest one are treated
# as rounding noise and clipped.
PSD_TOLERANCE = 1e-10


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues (descending) and matching unit-norm eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T

    def clipped(self) -> "EigenSystem":
        """Same eigenvectors with negative eigenvalues set to zero."""
        return EigenSystem(np.clip(self.eigenvalues, 0.0, None), self.eigenvectors)

    def sqrt(self) -> np.ndarray:
        """Hermitian square root, clipping negative eigenvalues."""
        u = self.eigenvectors
        s = (u * np.sqrt(np.clip(self.eigenvalues, 0.0, None))) @ u.conj().T
        return 0.5 * (s + s.conj().T)


def _check_square(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise DomainError("matrix contains non-finite entries")
    return h


def _fix_phases(u: np.ndarray) -> np.ndarray:
    # Rotate each column so its largest-magnitude entry is real positive.
    # argmax returns the first index on ties.
    idx = np.argmax(np.abs(u), axis=0)
    pivots = u[idx, np.arange(u.shape[1])]
    phases = pivots / np.abs(pivots)
    return u / phases


def hermitian_eig(h) -> EigenSystem:
    """
    Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(H + H^H) / 2`` before factorization.
    Eigenvalues are returned in descending order and each eigenvector is
    rotated so that its largest-magnitude component is real and positive,
    which makes the output deterministic up to degenerate eigenspaces.

    Parameters
    ----------
    h : array_like, shape (M, M)
        Hermitian matrix.

    Returns
    -------
    EigenSystem
    """
    h = _check_square(h)
    h = 0.5 * (h + h.conj().T)
    w, u = np.linalg.eigh(h)
    w = w[::-1].copy()
    u = _fix_phases(u[:, ::-1])
    return EigenSystem(w, u)


def psd_project(h) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm (negative eigenvalues set to zero)."""
    out = hermitian_eig(h).clipped().reconstruct()
    return 0.5 * (out + out.conj().T)


def psd_sqrt(r) -> np.ndarray:
    """
    Hermitian PSD square root ``S`` with ``S @ S == R``.

    Parameters
    ----------
    r : array_like, shape (M, M)
        Hermitian positive semidefinite matrix.

    Raises
    ------
    NotPSDError
        If an eigenvalue is below ``-1e-10`` times the largest one.
    """
    es = hermitian_eig(r)
    w = es.eigenvalues
    scale = max(abs(w[0]), abs(w[-1]))
    if w[-1] < -PSD_TOLERANCE * scale:
        raise NotPSDError(f"smallest eigenvalue {w[-1]:.3e} is negative")
    return es.sqrt()
