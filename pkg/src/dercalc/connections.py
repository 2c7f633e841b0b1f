"""Noncommutative connections, curvature and gauge transformations.

Two kinds of connection data appear here: a connection on the module A
itself, given by a 1-form (the value of the covariant derivative on the
unit), and a connection on the r x n matrix module over M_n, given by its
component matrices A_k in M_r relative to the canonical flat connection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_algebra import resolve_tol
from .derivation_calculus import Form, koszul_d, wedge
from .errors import NotFlatError, NotInvertibleError, SizeMismatchError
from .matrix_geometry import MatrixFrame

INVERTIBILITY_THRESHOLD = 1e-8  # reject g when s_min < threshold * s_max
INTERTWINER_TRIALS = 20


@dataclass(frozen=True)
class ConnectionOnA:
    """Connection on the right module A, determined by its 1-form."""

    omega: Form

    def __post_init__(self):
        if self.omega.degrees() not in ([], [1]):
            raise SizeMismatchError("connection form must be homogeneous of degree 1")

    def covariant_derivative(self, a: int, m):
        """Apply the covariant derivative along frame direction a to module element m."""
        frame = self.omega.frame
        return frame.act(a, m) + frame.mul(self.omega.evaluate(a), m)


def curvature_on_A(c: ConnectionOnA) -> Form:
    """Curvature 2-form: d omega + omega ^ omega (the wedge square of a
    1-form evaluates to the commutator of its values)."""
    return koszul_d(c.omega) + wedge(c.omega, c.omega)


def _check_invertible(g: np.ndarray) -> np.ndarray:
    g = np.asarray(g, dtype=complex)
    s = np.linalg.svd(g, compute_uv=False)
    if s[0] == 0.0 or s[-1] < INVERTIBILITY_THRESHOLD * s[0]:
        raise NotInvertibleError("gauge element is singular within tolerance")
    return np.linalg.inv(g)


def gauge_transform(c: ConnectionOnA, g: np.ndarray) -> ConnectionOnA:
    """omega -> g^-1 omega g + g^-1 dg for an invertible algebra element g."""
    frame = c.omega.frame
    g = np.asarray(g, dtype=complex)
    ginv = _check_invertible(g)
    conjugated = c.omega.map_coeffs(lambda v: ginv @ v @ g)
    dg = koszul_d(Form.of_element(frame, g))
    return ConnectionOnA(conjugated + dg.map_coeffs(lambda v: ginv @ v))


@dataclass(frozen=True)
class ModuleConnection:
    """Connection on the r x n matrix module, as components A_k in M_r."""

    r: int
    A: tuple[np.ndarray, ...]

    @staticmethod
    def of(matrices) -> "ModuleConnection":
        A = tuple(np.asarray(a, dtype=complex) for a in matrices)
        r = A[0].shape[0]
        for a in A:
            if a.shape != (r, r):
                raise SizeMismatchError("all connection components must be r x r")
        return ModuleConnection(r=r, A=A)


def module_curvature(mc: ModuleConnection, mf: MatrixFrame) -> Form:
    """Curvature components F_kl = [A_k, A_l] - f_kl^m A_m over increasing (k, l).

    The returned Form carries M_r coefficients over the matrix frame; it is
    a value object (frame actions do not apply to foreign coefficients).
    F vanishes exactly when k -> A_k is a representation of the frame's
    bracket relations.
    """
    N = mf.frame.size
    if len(mc.A) != N:
        raise SizeMismatchError(f"expected {N} components, got {len(mc.A)}")
    f = mf.frame.brackets
    terms = {}
    for k in range(N):
        for l in range(k + 1, N):
            F = mc.A[k] @ mc.A[l] - mc.A[l] @ mc.A[k]
            for m in range(N):
                if f[k, l, m] != 0:
                    F = F - f[k, l, m] * mc.A[m]
            terms[(k, l)] = F
    return Form(mf.frame, terms)


def is_flat(mc: ModuleConnection, mf: MatrixFrame, tol: float | None = None) -> bool:
    return module_curvature(mc, mf).is_zero(tol)


def flat_gauge_equivalent(mc1: ModuleConnection, mc2: ModuleConnection,
                          mf: MatrixFrame, tol: float | None = None,
                          trials: int = INTERTWINER_TRIALS) -> bool:
    """Whether two flat connections lie on the same gauge orbit.

    Equivalent to the equivalence of the induced representations: solves the
    linear intertwiner system S A_k = A'_k S and samples the nullspace for
    an invertible element.  Generic sampling decides invertibility with
    probability one; a bounded number of trials is a documented limitation.
    """
    for mc in (mc1, mc2):
        if not is_flat(mc, mf, tol):
            raise NotFlatError("flat_gauge_equivalent requires flat connections")
    if mc1.r != mc2.r:
        return False
    r = mc1.r
    eye = np.eye(r, dtype=complex)
    # vec(S A_k - A'_k S) = (A_k^T (x) I - I (x) A'_k) vec(S), row-major vec
    blocks = [np.kron(eye, Ak.T) - np.kron(Bk, eye)
              for Ak, Bk in zip(mc1.A, mc2.A)]
    system = np.vstack(blocks)
    _, s, vh = np.linalg.svd(system)
    cutoff = INVERTIBILITY_THRESHOLD * (s[0] if s.size and s[0] > 0 else 1.0)
    null = vh[np.sum(s > cutoff):].conj().T
    if null.shape[1] == 0:
        return False
    rng = np.random.default_rng(0)
    for _ in range(trials):
        coeff = rng.standard_normal(null.shape[1]) + 1j * rng.standard_normal(null.shape[1])
        S = (null @ coeff).reshape(r, r)
        sv = np.linalg.svd(S, compute_uv=False)
        if sv[0] > 0 and sv[-1] > INVERTIBILITY_THRESHOLD * sv[0]:
            return True
    return False


def hermitian_compatible(mc: ModuleConnection, mf: MatrixFrame,
                         tol: float | None = None, samples: int = 12,
                         seed: int = 7) -> bool:
    """Compatibility with the hermitian pairing <m1, m2> = m1* m2.

    Checks X<m1, m2> = <D_X m1, m2> + <m1, D_X m2> for the real frame
    derivations on random module elements, where D is the canonical flat
    connection shifted by the components A_k (which act by left
    multiplication, the canonical part by right multiplication).
    """
    n = mf.basis.n
    r = mc.r
    iE = [1j * Ek for Ek in mf.basis.E]
    rng = np.random.default_rng(seed)
    tol = resolve_tol(tol)

    def nabla(k, m):
        return -m @ iE[k] + mc.A[k] @ m

    for _ in range(samples):
        m1 = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
        m2 = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
        pairing = m1.conj().T @ m2
        for k in range(mf.frame.size):
            lhs = iE[k] @ pairing - pairing @ iE[k]
            rhs = nabla(k, m1).conj().T @ m2 + m1.conj().T @ nabla(k, m2)
            scale = max(1.0, float(np.max(np.abs(pairing))))
            if np.max(np.abs(lhs - rhs)) > tol * scale:
                return False
    return True
