"""Graded differential calculus over a finite frame of derivations.

A ``DerivationFrame`` bundles N derivations X_0..X_{N-1} of some unital
algebra together with their (constant, central) bracket coefficients
f[a, b, c], meaning [X_a, X_b] = sum_c f[a, b, c] X_c, and the handful of
algebra operations the calculus needs (product, zero, unit, a max-entry
norm).  The algebra elements themselves are opaque to this module: numpy
matrices, matrix-valued polynomials and star-product polynomials all work,
as long as they support +, -, and scalar *.

A ``Form`` of degree p is stored as a map from strictly increasing p-tuples
of frame indices to algebra coefficients.  Evaluation on arbitrary index
tuples antisymmetrizes (sign of the sorting permutation, zero on repeats),
so the stored data determines the full antisymmetric multilinear map.  The
graded product is computed as a signed shuffle sum over disjoint index
tuples; on this storage that is identical to the 1/(p! q!)-normalized sum
over all permutations, with no overcounting factors left to divide out.

The differential follows the Koszul formula: a sum of frame actions on
coefficients with one argument removed, plus bracket insertions expanded
through f.  Interior products and Lie derivatives complete the Cartan
operation.
"""

from __future__ import annotations

from itertools import combinations, permutations
from math import factorial
from typing import Any, Callable, NamedTuple

import numpy as np

from .core_algebra import resolve_tol
from .errors import FrameMismatchError


class DerivationFrame:
    """A finite list of derivations with constant bracket coefficients.

    Parameters
    ----------
    size : number of frame derivations N.
    brackets : complex array of shape (N, N, N); brackets[a, b, c] is the
        X_c-coefficient of [X_a, X_b].  Antisymmetric in (a, b).
    act : callable (index, element) -> element applying X_a.
    mul : the algebra product.
    zero, unit : the additive and multiplicative neutral elements.
    norm : max-entry magnitude, used by every tolerance check.
    labels : optional display names for the derivations.
    key : identity string; forms interoperate only between frames with
        equal keys.
    """

    def __init__(self, size: int, brackets, act: Callable[[int, Any], Any],
                 mul: Callable[[Any, Any], Any], zero: Any, unit: Any,
                 norm: Callable[[Any], float], labels: tuple[str, ...] = (),
                 key: str = ""):
        self.size = size
        self.brackets = np.asarray(brackets, dtype=complex).reshape(size, size, size)
        self.act = act
        self.mul = mul
        self.zero = zero
        self.unit = unit
        self.norm = norm
        self.labels = labels or tuple(f"X{a}" for a in range(size))
        self.key = key or f"frame:{id(self)}"

    def compatible(self, other: "DerivationFrame") -> bool:
        return self is other or self.key == other.key

    def __repr__(self) -> str:
        return f"DerivationFrame(size={self.size}, key={self.key!r})"


def _sort_sign(indices: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Sorted tuple and permutation sign; sign 0 when an index repeats."""
    if len(set(indices)) != len(indices):
        return indices, 0
    inversions = sum(1 for i in range(len(indices)) for j in range(i + 1, len(indices))
                     if indices[i] > indices[j])
    return tuple(sorted(indices)), -1 if inversions % 2 else 1


class Form:
    """A (possibly mixed-degree) element of the graded calculus over a frame.

    ``terms`` maps strictly increasing index tuples to algebra coefficients;
    the tuple length is the degree of that component.  Forms are immutable
    by convention: every operation returns a new Form.
    """

    __slots__ = ("frame", "terms")

    def __init__(self, frame: DerivationFrame, terms: dict[tuple[int, ...], Any]):
        self.frame = frame
        self.terms = {k: v for k, v in terms.items() if frame.norm(v) != 0.0}

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(frame: DerivationFrame) -> "Form":
        return Form(frame, {})

    @staticmethod
    def of_element(frame: DerivationFrame, a: Any) -> "Form":
        """Degree-0 form wrapping an algebra element."""
        return Form(frame, {(): a})

    @staticmethod
    def single(frame: DerivationFrame, indices: tuple[int, ...], coeff: Any) -> "Form":
        idx, sign = _sort_sign(tuple(indices))
        if sign == 0:
            return Form(frame, {})
        return Form(frame, {idx: coeff if sign == 1 else -coeff})

    @staticmethod
    def dual_basis(frame: DerivationFrame, k: int) -> "Form":
        """The basis 1-form theta^k with theta^k(X_a) = delta_{ka} * unit."""
        if not 0 <= k < frame.size:
            raise IndexError(f"frame index {k} out of range 0..{frame.size - 1}")
        return Form(frame, {(k,): frame.unit})

    # -- structure ----------------------------------------------------

    def degrees(self) -> list[int]:
        return sorted({len(k) for k in self.terms})

    def homogeneous(self, p: int) -> "Form":
        return Form(self.frame, {k: v for k, v in self.terms.items() if len(k) == p})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def max_norm(self) -> float:
        return max((self.frame.norm(v) for v in self.terms.values()), default=0.0)

    def is_zero(self, tol: float | None = None) -> bool:
        return self.max_norm() <= resolve_tol(tol)

    def map_coeffs(self, fn: Callable[[Any], Any]) -> "Form":
        return Form(self.frame, {k: fn(v) for k, v in self.terms.items()})

    # -- vector space operations --------------------------------------

    def _check(self, other: "Form") -> None:
        if not self.frame.compatible(other.frame):
            raise FrameMismatchError(f"{self.frame.key} vs {other.frame.key}")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return Form(self.frame, out)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return self.map_coeffs(lambda v: -v)

    def __mul__(self, c) -> "Form":
        return self.map_coeffs(lambda v: c * v)

    __rmul__ = __mul__

    # -- evaluation ----------------------------------------------------

    def evaluate(self, *indices: int) -> Any:
        """Value on the frame derivations X_{i1}, ..., X_{ip} (antisymmetrized)."""
        idx, sign = _sort_sign(tuple(indices))
        if sign == 0:
            return self.frame.zero
        v = self.terms.get(idx)
        if v is None:
            return self.frame.zero
        return v if sign == 1 else -v

    def evaluate_linear(self, *args) -> Any:
        """Value on central-coefficient combinations of frame derivations.

        Each argument is a sequence of (coefficient, index) pairs standing
        for sum_a c_a X_{i_a}; scalars multiply directly, algebra-embedded
        central elements multiply through the frame product.
        """
        total = self.frame.zero
        def expand(pos: int, chosen: tuple[int, ...], coeffs: tuple) -> Any:
            nonlocal total
            if pos == len(args):
                v = self.evaluate(*chosen)
                for c in coeffs:
                    v = c * v if np.isscalar(c) else self.frame.mul(c, v)
                total = total + v
                return
            for c, i in args[pos]:
                expand(pos + 1, chosen + (i,), coeffs + (c,))
        expand(0, (), ())
        return total

    def __repr__(self) -> str:
        keys = ", ".join(str(k) for k in sorted(self.terms))
        return f"Form({self.frame.key}; [{keys}])"


def _merge_sign(I: tuple[int, ...], J: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Sorted union of two disjoint increasing tuples with the shuffle sign."""
    return _sort_sign(I + J)


def wedge(omega: Form, eta: Form) -> Form:
    """Graded product.  Reduces to the algebra product in degree 0."""
    omega._check(eta)
    frame = omega.frame
    out: dict[tuple[int, ...], Any] = {}
    for I, a in omega.terms.items():
        for J, b in eta.terms.items():
            K, sign = _merge_sign(I, J)
            if sign == 0:
                continue
            v = frame.mul(a, b)
            if sign < 0:
                v = -v
            out[K] = out[K] + v if K in out else v
    return Form(frame, out)


def koszul_d(omega: Form) -> Form:
    """The degree +1 differential.

    (d w)(X_0..X_p) = sum_i (-1)^i X_i w(.. no i ..)
                    + sum_{i<j} (-1)^{i+j} w([X_i, X_j], .. no i, j ..),
    with the bracket expanded through the frame coefficients.
    """
    frame = omega.frame
    N = frame.size
    f = frame.brackets
    out: dict[tuple[int, ...], Any] = {}
    for p in omega.degrees():
        part = {k: v for k, v in omega.terms.items() if len(k) == p}
        if not part:
            continue
        for L in combinations(range(N), p + 1):
            total = None
            for i in range(p + 1):
                rest = L[:i] + L[i + 1:]
                coeff = part.get(rest)
                if coeff is None:
                    continue
                v = frame.act(L[i], coeff)
                if i % 2:
                    v = -v
                total = v if total is None else total + v
            for i in range(p + 1):
                for j in range(i + 1, p + 1):
                    rest = L[:i] + L[i + 1:j] + L[j + 1:]
                    for c in range(N):
                        fc = f[L[i], L[j], c]
                        if fc == 0:
                            continue
                        idx, sign = _sort_sign((c,) + rest)
                        if sign == 0:
                            continue
                        coeff = part.get(idx)
                        if coeff is None:
                            continue
                        s = sign if (i + j) % 2 == 0 else -sign
                        v = (s * fc) * coeff
                        total = v if total is None else total + v
            if total is not None:
                out[L] = out[L] + total if L in out else total
    return Form(frame, out)


def interior(a: int, omega: Form) -> Form:
    """Contraction with the frame derivation X_a; zero on degree 0."""
    frame = omega.frame
    if not 0 <= a < frame.size:
        raise IndexError(f"frame index {a} out of range 0..{frame.size - 1}")
    out: dict[tuple[int, ...], Any] = {}
    for K, v in omega.terms.items():
        if a not in K:
            continue
        t = K.index(a)
        rest = K[:t] + K[t + 1:]
        w = v if t % 2 == 0 else -v
        out[rest] = out[rest] + w if rest in out else w
    return Form(frame, out)


def lie_derivative(a: int, omega: Form) -> Form:
    """L_a = i_a d + d i_a (degree 0)."""
    return interior(a, koszul_d(omega)) + koszul_d(interior(a, omega))


class SubspaceFlags(NamedTuple):
    horizontal: bool
    invariant: bool
    basic: bool


def operation_subspaces(sub: list[int], omega: Form, tol: float | None = None) -> SubspaceFlags:
    """Membership of omega in the horizontal/invariant/basic subspaces of
    the Cartan operation generated by the frame derivations in ``sub``."""
    horizontal = all(interior(a, omega).is_zero(tol) for a in sub)
    invariant = all(lie_derivative(a, omega).is_zero(tol) for a in sub)
    return SubspaceFlags(horizontal, invariant, horizontal and invariant)


def wedge_by_permutation_sum(omega: Form, eta: Form, p: int, q: int,
                             indices: tuple[int, ...]) -> Any:
    """Direct 1/(p! q!)-normalized permutation sum for (omega eta)(X_indices).

    Brute-force reference used to validate the shuffle implementation;
    omega and eta must be homogeneous of degrees p and q.
    """
    frame = omega.frame
    total = frame.zero
    for sigma in permutations(range(p + q)):
        perm = tuple(indices[s] for s in sigma)
        _, sign = _sort_sign(sigma)
        a = omega.evaluate(*perm[:p])
        b = eta.evaluate(*perm[p:])
        v = frame.mul(a, b)
        total = total + (v if sign == 1 else -v)
    return (1.0 / (factorial(p) * factorial(q))) * total
