"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from dercalc import MoyalPoly, PolyMatrix
from dercalc.derivation_calculus import Form

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def random_matrix(rng, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_invertible(rng, n: int) -> np.ndarray:
    while True:
        g = random_matrix(rng, n)
        s = np.linalg.svd(g, compute_uv=False)
        if s[-1] > 1e-3 * s[0]:
            return g


def random_polymatrix(rng, m: int, n: int, deg: int = 2, nterms: int = 3) -> PolyMatrix:
    terms = {}
    for _ in range(nterms):
        e = tuple(int(rng.integers(0, deg + 1)) for _ in range(m))
        terms[e] = random_matrix(rng, n)
    return PolyMatrix(m, n, terms)


def random_moyal(rng, deg: int = 3, nterms: int = 4) -> MoyalPoly:
    terms = {}
    for _ in range(nterms):
        e1 = int(rng.integers(0, deg + 1))
        e2 = int(rng.integers(0, deg + 1 - e1))
        terms[(e1, e2)] = complex(rng.standard_normal(), rng.standard_normal())
    return MoyalPoly(terms)


def coeff_factory(frame, rng):
    """Random coefficient generator matching a frame's algebra."""
    kind, _, arg = frame.key.partition(":")
    if kind == "matrix":
        n = int(arg)
        return lambda: random_matrix(rng, n)
    if kind == "mixed":
        m, n = (int(x) for x in arg.split(","))
        return lambda: random_polymatrix(rng, m, n)
    if kind == "isp":
        return lambda: random_moyal(rng)
    raise ValueError(frame.key)


def random_form(frame, rng, degree: int | None = None, nterms: int = 3) -> Form:
    make = coeff_factory(frame, rng)
    if degree is None:
        degree = int(rng.integers(0, frame.size + 1))
    keys = list(combinations(range(frame.size), degree))
    picked = [keys[int(rng.integers(0, len(keys)))] for _ in range(min(nterms, len(keys)))]
    return Form(frame, {k: make() for k in picked})


def spin_frame_matrices(r: int) -> tuple[np.ndarray, ...]:
    """Images of the n = 2 frame generators in the spin-(r-1)/2 representation.

    With hermitian angular momentum matrices J_k, the map sigma_k -> 2 J_k is
    a Lie algebra isomorphism, so A_k = 2i J_k satisfies the frame bracket
    relations [A_k, A_l] = f_kl^m A_m and yields a flat module connection.
    """
    j = (r - 1) / 2
    mvals = [j - k for k in range(r)]
    Jz = np.diag(mvals).astype(complex)
    Jp = np.zeros((r, r), dtype=complex)
    for k in range(r - 1):
        m = mvals[k + 1]
        Jp[k, k + 1] = np.sqrt(j * (j + 1) - m * (m + 1))
    Jm = Jp.conj().T
    Jx = (Jp + Jm) / 2.0
    Jy = (Jp - Jm) / 2.0j
    return tuple(2.0j * J for J in (Jx, Jy, Jz))


def exterior_betti(generator_degrees: list[int], top: int) -> list[int]:
    """Betti numbers of a free graded-commutative exterior algebra on odd
    generators: coefficients of prod (1 + t^d)."""
    poly = [1]
    for d in generator_degrees:
        new = [0] * (len(poly) + d)
        for i, c in enumerate(poly):
            new[i] += c
            new[i + d] += c
        poly = new
    poly = poly + [0] * max(0, top + 1 - len(poly))
    return poly[:top + 1]
