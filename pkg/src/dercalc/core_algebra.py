"""Complex matrix arithmetic and the traceless hermitian basis of sl(n).

Matrices are dense numpy arrays of complex128.  ``build_basis`` constructs
the generalized Gell-Mann basis (which reduces to the Pauli matrices for
n = 2), its structure constants and the trace metric.  All equality
predicates share a configurable tolerance, overridable through the
``DERCALC_TOL`` environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSizeError, SizeMismatchError

DEFAULT_TOL = 1e-10


def default_tol() -> float:
    """Global comparison tolerance; DERCALC_TOL overrides the built-in default."""
    env = os.environ.get("DERCALC_TOL")
    return float(env) if env else DEFAULT_TOL


def resolve_tol(tol: float | None) -> float:
    return default_tol() if tol is None else tol


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SizeMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def is_hermitian(a: np.ndarray, tol: float | None = None) -> bool:
    a = as_matrix(a)
    return bool(np.max(np.abs(a - a.conj().T)) <= resolve_tol(tol))


def is_traceless(a: np.ndarray, tol: float | None = None) -> bool:
    return bool(abs(np.trace(as_matrix(a))) <= resolve_tol(tol))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[a, b] = ab - ba."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise SizeMismatchError(f"size mismatch {a.shape} vs {b.shape}")
    return a @ b - b @ a


def inner_derivation(gamma: np.ndarray, a: np.ndarray) -> np.ndarray:
    """The derivation ad_gamma applied to a, i.e. [gamma, a]."""
    return commutator(gamma, a)


def gellmann_matrices(n: int) -> list[np.ndarray]:
    """Generalized Gell-Mann basis of sl(n), in the standard ordering.

    For each d = 2..n the symmetric and antisymmetric pair matrices for
    column d come first, then the d-th diagonal matrix.  At n = 2 this is
    exactly (sigma_1, sigma_2, sigma_3); at n = 3 the eight Gell-Mann
    lambda matrices in their usual order.
    """
    if n < 2:
        raise InvalidSizeError(f"matrix size must be >= 2, got {n}")
    out: list[np.ndarray] = []
    for d in range(2, n + 1):
        for j in range(1, d):
            sym = np.zeros((n, n), dtype=complex)
            sym[j - 1, d - 1] = 1
            sym[d - 1, j - 1] = 1
            out.append(sym)
            asym = np.zeros((n, n), dtype=complex)
            asym[j - 1, d - 1] = -1j
            asym[d - 1, j - 1] = 1j
            out.append(asym)
        diag = np.zeros((n, n), dtype=complex)
        l = d - 1
        for j in range(l):
            diag[j, j] = 1
        diag[l, l] = -l
        out.append(diag * np.sqrt(2.0 / (l * (l + 1))))
    return out


@dataclass(frozen=True)
class AlgebraBasis:
    """Hermitian traceless basis {E_k} of sl(n) with derived tensors.

    C[k, l, m] is the coefficient of E_m in [E_k, E_l] (purely imaginary for
    a hermitian basis); g[k, l] = tr(E_k E_l)/n is the trace metric and
    det_g its determinant.
    """

    n: int
    E: tuple[np.ndarray, ...]
    C: np.ndarray
    g: np.ndarray
    det_g: float

    @property
    def dim(self) -> int:
        return self.n * self.n - 1


def build_basis(n: int) -> AlgebraBasis:
    """Construct the Gell-Mann basis of sl(n) with structure constants and metric."""
    E = gellmann_matrices(n)
    N = len(E)
    g = np.empty((N, N), dtype=float)
    for k in range(N):
        for l in range(k, N):
            v = np.trace(E[k] @ E[l]) / n
            g[k, l] = g[l, k] = v.real
    # C from the metric: tr([E_k,E_l] E_m) = n * C^{m'}_{kl} g_{m'm}
    C = np.zeros((N, N, N), dtype=complex)
    for k in range(N):
        for l in range(k + 1, N):
            rhs = np.array([np.trace(commutator(E[k], E[l]) @ E[m]) / n for m in range(N)])
            coeff = np.linalg.solve(g, rhs)
            C[k, l, :] = coeff
            C[l, k, :] = -coeff
    return AlgebraBasis(n=n, E=tuple(E), C=C, g=g, det_g=float(np.linalg.det(g)))


def expand_traceless(basis: AlgebraBasis, a: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Coefficients c with a = sum_k c_k E_k, for traceless a."""
    a = as_matrix(a)
    if not is_traceless(a, tol):
        raise SizeMismatchError("matrix is not traceless within tolerance")
    rhs = np.array([np.trace(a @ Ek) / basis.n for Ek in basis.E])
    return np.linalg.solve(basis.g, rhs)
