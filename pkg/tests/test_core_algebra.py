"""Basis construction, structure constants, metric and matrix predicates."""

import numpy as np
import pytest

from dercalc import (build_basis, commutator, expand_traceless, inner_derivation,
                     is_hermitian, is_traceless)
from dercalc.errors import InvalidSizeError, SizeMismatchError
from support import PAULI, random_matrix


def test_build_basis_n2_is_pauli():
    basis = build_basis(2)
    assert basis.dim == 3
    for Ek, sigma in zip(basis.E, PAULI):
        assert np.allclose(Ek, sigma, atol=1e-14)
        assert is_hermitian(Ek)
        assert is_traceless(Ek)


def test_pauli_metric_is_identity():
    # independent oracle: (1/2) tr(sigma_k sigma_l) computed on frozen matrices
    expected = np.array([[np.trace(a @ b).real / 2 for b in PAULI] for a in PAULI])
    assert np.allclose(expected, np.eye(3), atol=1e-14)
    basis = build_basis(2)
    assert np.allclose(basis.g, np.eye(3), atol=1e-12)
    assert abs(basis.det_g - 1.0) < 1e-12


def test_basis_n3_diagonal_metric():
    basis = build_basis(3)
    assert basis.dim == 8
    for Ek in basis.E:
        assert is_hermitian(Ek)
        assert is_traceless(Ek)
    # Gell-Mann normalization: tr(E_k E_l) = 2 delta_kl, so g = (2/3) I
    assert np.allclose(basis.g, (2.0 / 3.0) * np.eye(8), atol=1e-12)


def test_build_basis_rejects_small_n():
    with pytest.raises(InvalidSizeError):
        build_basis(1)


def test_structure_constants_reconstruct_commutators():
    for n in (2, 3):
        basis = build_basis(n)
        N = basis.dim
        for k in range(N):
            for l in range(N):
                rebuilt = sum(basis.C[k, l, m] * basis.E[m] for m in range(N))
                assert np.max(np.abs(commutator(basis.E[k], basis.E[l]) - rebuilt)) < 1e-10


def test_structure_constants_antisymmetric_and_jacobi():
    for n in (2, 3):
        C = build_basis(n).C
        assert np.max(np.abs(C + C.transpose(1, 0, 2))) < 1e-12
        N = C.shape[0]
        jac = np.einsum("klp,pmq->klmq", C, C)
        total = jac + np.einsum("lmp,pkq->klmq", C, C) + np.einsum("mkp,plq->klmq", C, C)
        assert np.max(np.abs(total)) < 1e-12


def test_commutator_examples():
    rng = np.random.default_rng(0)
    a = random_matrix(rng, 3)
    assert np.max(np.abs(commutator(a, a))) == 0.0
    assert np.max(np.abs(commutator(np.eye(3), a))) == 0.0
    # frozen oracle: sigma_1 sigma_2 - sigma_2 sigma_1 = 2i sigma_3
    assert np.allclose(commutator(PAULI[0], PAULI[1]), 2j * PAULI[2], atol=1e-14)


def test_commutator_size_mismatch():
    with pytest.raises(SizeMismatchError):
        commutator(np.eye(2), np.eye(3))


def test_commutator_traceless():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b = random_matrix(rng, 3), random_matrix(rng, 3)
        assert abs(np.trace(commutator(a, b))) < 1e-12


def test_inner_derivation_leibniz_and_center():
    rng = np.random.default_rng(2)
    gamma = random_matrix(rng, 3)
    for _ in range(10):
        a, b = random_matrix(rng, 3), random_matrix(rng, 3)
        lhs = inner_derivation(gamma, a @ b)
        rhs = inner_derivation(gamma, a) @ b + a @ inner_derivation(gamma, b)
        assert np.max(np.abs(lhs - rhs)) < 1e-12
        assert np.max(np.abs(inner_derivation(np.eye(3), a))) == 0.0


def test_inner_derivation_pauli_value():
    # [i sigma_1, sigma_2] = i (2i sigma_3) = -2 sigma_3
    basis = build_basis(2)
    got = inner_derivation(1j * basis.E[0], basis.E[1])
    assert np.allclose(got, -2 * basis.E[2], atol=1e-14)


def test_expand_traceless_reconstruction():
    rng = np.random.default_rng(3)
    for n in (2, 3):
        basis = build_basis(n)
        a = random_matrix(rng, n)
        a = a - np.trace(a) / n * np.eye(n)
        coeff = expand_traceless(basis, a)
        rebuilt = sum(c * Ek for c, Ek in zip(coeff, basis.E))
        assert np.max(np.abs(a - rebuilt)) < 1e-10
