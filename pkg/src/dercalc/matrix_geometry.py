"""The derivation calculus of the full matrix algebra M_n.

The frame consists of the n^2 - 1 real inner derivations d_k = ad(i E_k)
attached to a hermitian traceless basis.  Because the E_k are hermitian,
the bracket coefficients of the frame are i times the structure constants
of the E_k themselves (and real).  This module provides the canonical
1-form, the trace integration of top-degree forms, and the Betti numbers
of the complex, computed from ranks of the differential's coefficient
matrices degree by degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .core_algebra import AlgebraBasis, build_basis, resolve_tol
from .derivation_calculus import DerivationFrame, Form, _sort_sign
from .errors import CapExceededError, InvalidSizeError

RANK_THRESHOLD = 1e-8  # relative singular-value cutoff for rank decisions
DEFAULT_DIM_CAP = 2304  # total complex dimension 9 * 2^8, i.e. n <= 3


@dataclass(frozen=True)
class MatrixFrame:
    """Basis plus the derivation frame d_k = ad(i E_k) it generates."""

    basis: AlgebraBasis
    frame: DerivationFrame


def build_matrix_frame(n: int | AlgebraBasis) -> MatrixFrame:
    basis = n if isinstance(n, AlgebraBasis) else build_basis(n)
    nn = basis.n
    iE = tuple(1j * Ek for Ek in basis.E)

    def act(k: int, a: np.ndarray) -> np.ndarray:
        return iE[k] @ a - a @ iE[k]

    frame = DerivationFrame(
        size=basis.dim,
        brackets=1j * basis.C,
        act=act,
        mul=lambda a, b: a @ b,
        zero=np.zeros((nn, nn), dtype=complex),
        unit=np.eye(nn, dtype=complex),
        norm=lambda a: float(np.max(np.abs(a))) if np.asarray(a).size else 0.0,
        labels=tuple(f"d{k + 1}" for k in range(basis.dim)),
        key=f"matrix:{nn}",
    )
    return MatrixFrame(basis=basis, frame=frame)


def canonical_itheta(mf: MatrixFrame) -> Form:
    """The 1-form sending ad_gamma to the traceless part of gamma.

    On the frame it evaluates to i E_k, so it expands as sum_k (i E_k) theta^k.
    """
    return Form(mf.frame, {(k,): 1j * Ek for k, Ek in enumerate(mf.basis.E)})


@dataclass(frozen=True)
class IntegrationConfig:
    """Normalization sqrt|g| used to read off the top-degree coefficient."""

    sqrt_det_g: float

    @staticmethod
    def from_basis(basis: AlgebraBasis) -> "IntegrationConfig":
        return IntegrationConfig(sqrt_det_g=float(np.sqrt(basis.det_g)))


def nc_integrate(omega: Form, cfg: IntegrationConfig, mf: MatrixFrame) -> complex:
    """Trace integration: tr(a)/n for the top component a sqrt|g| theta^1...theta^N,
    zero for everything below top degree."""
    top = tuple(range(mf.frame.size))
    coeff = omega.terms.get(top)
    if coeff is None:
        return 0.0 + 0.0j
    a = coeff / cfg.sqrt_det_g
    return complex(np.trace(a) / mf.basis.n)


def _ad_matrices(mf: MatrixFrame) -> list[np.ndarray]:
    """Row-major matrix of a -> [iE_k, a] acting on vec(a)."""
    n = mf.basis.n
    eye = np.eye(n, dtype=complex)
    out = []
    for Ek in mf.basis.E:
        G = 1j * Ek
        out.append(np.kron(G, eye) - np.kron(eye, G.T))
    return out


def differential_matrix(mf: MatrixFrame, p: int) -> np.ndarray:
    """Coefficient matrix of the differential from degree p to degree p + 1.

    Basis ordering: for each increasing index tuple (enumerated in
    lexicographic order) the n^2 entries of the matrix coefficient in
    row-major vec order.
    """
    N = mf.frame.size
    n2 = mf.basis.n ** 2
    f = mf.frame.brackets
    ad = _ad_matrices(mf)
    cols = list(combinations(range(N), p))
    rows = list(combinations(range(N), p + 1))
    col_of = {K: i for i, K in enumerate(cols)}
    D = np.zeros((n2 * len(rows), n2 * len(cols)), dtype=complex)
    eye = np.eye(n2, dtype=complex)
    for r, L in enumerate(rows):
        rb = slice(r * n2, (r + 1) * n2)
        for i in range(p + 1):
            rest = L[:i] + L[i + 1:]
            c = col_of[rest]
            block = ad[L[i]] if i % 2 == 0 else -ad[L[i]]
            D[rb, c * n2:(c + 1) * n2] += block
        for i in range(p + 1):
            for j in range(i + 1, p + 1):
                rest = L[:i] + L[i + 1:j] + L[j + 1:]
                for cidx in range(N):
                    fc = f[L[i], L[j], cidx]
                    if fc == 0:
                        continue
                    idx, sign = _sort_sign((cidx,) + rest)
                    if sign == 0:
                        continue
                    c = col_of[idx]
                    s = sign if (i + j) % 2 == 0 else -sign
                    D[rb, c * n2:(c + 1) * n2] += (s * fc) * eye
    return D


def _rank(D: np.ndarray, threshold: float = RANK_THRESHOLD) -> int:
    if D.size == 0:
        return 0
    s = np.linalg.svd(D, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > threshold * s[0]))


def cohomology_betti(mf: MatrixFrame, max_degree: int | None = None,
                     dim_cap: int = DEFAULT_DIM_CAP,
                     threshold: float = RANK_THRESHOLD) -> list[int]:
    """Betti numbers of the matrix calculus up to max_degree (default: top).

    dim H^k = dim Omega^k - rank d_k - rank d_{k-1}.  The total complex
    dimension n^2 * 2^(n^2-1) must stay under dim_cap.
    """
    N = mf.frame.size
    n2 = mf.basis.n ** 2
    top = N if max_degree is None else max_degree
    if top > N:
        raise InvalidSizeError(f"max degree {top} exceeds top degree {N}")
    total = n2 * 2 ** N
    if total > dim_cap:
        raise CapExceededError(
            f"complex dimension {total} exceeds cap {dim_cap}; raise dim_cap explicitly")
    ranks = [_rank(differential_matrix(mf, p), threshold) for p in range(top + 1)]
    betti = []
    for k in range(top + 1):
        dim_k = n2 * comb(N, k)
        prev = ranks[k - 1] if k > 0 else 0
        betti.append(dim_k - ranks[k] - prev)
    return betti
