"""Matrix-valued polynomial functions on R^m and their mixed calculus.

The algebra is modeled by finitely supported polynomials with n x n complex
matrix coefficients; differentiation and box integration are then exact.
The derivation frame joins m coordinate derivatives with the n^2 - 1 inner
matrix derivations, giving a differential that splits into a de Rham part
and a purely matrix part, and a curvature that splits by bidegree into
Yang-Mills, covariant-derivative and potential pieces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_algebra import AlgebraBasis, build_basis
from .derivation_calculus import DerivationFrame, Form, koszul_d
from .errors import CapExceededError, InvalidParameterError, SizeMismatchError
from .matrix_geometry import IntegrationConfig


class PolyMatrix:
    """Polynomial in m real variables with n x n complex matrix coefficients.

    terms maps exponent tuples to coefficient matrices; zero coefficients
    are dropped.  The product combines polynomial convolution with the
    matrix product, so it is associative but not commutative.
    """

    __slots__ = ("m", "n", "terms")

    def __init__(self, m: int, n: int, terms: dict[tuple[int, ...], np.ndarray]):
        self.m = m
        self.n = n
        self.terms = {}
        for e, M in terms.items():
            M = np.asarray(M, dtype=complex)
            if M.shape != (n, n):
                raise SizeMismatchError(f"coefficient shape {M.shape}, expected {(n, n)}")
            if len(e) != m:
                raise SizeMismatchError(f"exponent length {len(e)}, expected {m}")
            if np.any(M != 0):
                self.terms[tuple(int(x) for x in e)] = M

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(m: int, n: int) -> "PolyMatrix":
        return PolyMatrix(m, n, {})

    @staticmethod
    def constant(m: int, M) -> "PolyMatrix":
        M = np.asarray(M, dtype=complex)
        return PolyMatrix(m, M.shape[0], {(0,) * m: M})

    @staticmethod
    def scalar(m: int, n: int, coeffs: dict[tuple[int, ...], complex]) -> "PolyMatrix":
        """Central element: scalar polynomial times the identity matrix."""
        eye = np.eye(n, dtype=complex)
        return PolyMatrix(m, n, {e: c * eye for e, c in coeffs.items()})

    @staticmethod
    def monomial(m: int, exponents: tuple[int, ...], M) -> "PolyMatrix":
        M = np.asarray(M, dtype=complex)
        return PolyMatrix(m, M.shape[0], {tuple(exponents): M})

    # -- ring operations -----------------------------------------------

    def _like(self, other: "PolyMatrix") -> None:
        if self.m != other.m or self.n != other.n:
            raise SizeMismatchError("mixed variable counts or matrix sizes")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._like(other)
        out = dict(self.terms)
        for e, M in other.terms.items():
            out[e] = out[e] + M if e in out else M
        return PolyMatrix(self.m, self.n, out)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(self.m, self.n, {e: -M for e, M in self.terms.items()})

    def __mul__(self, other):
        if np.isscalar(other):
            return PolyMatrix(self.m, self.n, {e: other * M for e, M in self.terms.items()})
        self._like(other)
        out: dict[tuple[int, ...], np.ndarray] = {}
        for e1, M1 in self.terms.items():
            for e2, M2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                P = M1 @ M2
                out[e] = out[e] + P if e in out else P
        return PolyMatrix(self.m, self.n, out)

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return NotImplemented

    # -- calculus helpers ----------------------------------------------

    def partial(self, mu: int) -> "PolyMatrix":
        """Exact derivative with respect to the mu-th variable."""
        out = {}
        for e, M in self.terms.items():
            if e[mu] > 0:
                de = e[:mu] + (e[mu] - 1,) + e[mu + 1:]
                v = e[mu] * M
                out[de] = out[de] + v if de in out else v
        return PolyMatrix(self.m, self.n, out)

    def adjoint(self) -> "PolyMatrix":
        """Coefficient-wise conjugate transpose (variables are real)."""
        return PolyMatrix(self.m, self.n, {e: M.conj().T for e, M in self.terms.items()})

    def trace(self) -> "PolyMatrix":
        """Scalar polynomial of matrix traces, as a 1 x 1 PolyMatrix."""
        return PolyMatrix(self.m, 1, {e: np.array([[np.trace(M)]]) for e, M in self.terms.items()})

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def max_norm(self) -> float:
        return max((float(np.max(np.abs(M))) for M in self.terms.values()), default=0.0)

    def __repr__(self) -> str:
        return f"PolyMatrix(m={self.m}, n={self.n}, {len(self.terms)} terms)"


def integrate_box(p: PolyMatrix, box: list[tuple[float, float]]) -> complex:
    """Exact integral of a scalar (1 x 1) polynomial over a coordinate box."""
    if p.n != 1:
        raise SizeMismatchError("integrate_box expects a scalar polynomial")
    total = 0.0 + 0.0j
    for e, M in p.terms.items():
        factor = 1.0
        for mu, k in enumerate(e):
            lo, hi = box[mu]
            factor *= (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)
        total += complex(M[0, 0]) * factor
    return total


@dataclass(frozen=True)
class MixedFrame:
    """m coordinate derivations followed by the n^2 - 1 inner matrix ones."""

    m: int
    basis: AlgebraBasis
    frame: DerivationFrame

    @property
    def spatial(self) -> range:
        return range(self.m)

    @property
    def inner(self) -> range:
        return range(self.m, self.m + self.basis.dim)

    def bidegree(self, key: tuple[int, ...]) -> tuple[int, int]:
        s = sum(1 for i in key if i < self.m)
        return s, len(key) - s


def build_mixed_frame(m: int, n: int | AlgebraBasis) -> MixedFrame:
    basis = n if isinstance(n, AlgebraBasis) else build_basis(n)
    nn = basis.n
    N = m + basis.dim
    iE_const = [PolyMatrix.constant(m, 1j * Ek) for Ek in basis.E]

    def act(a: int, p: PolyMatrix) -> PolyMatrix:
        if a < m:
            return p.partial(a)
        c = iE_const[a - m]
        return c * p - p * c

    f = np.zeros((N, N, N), dtype=complex)
    f[m:, m:, m:] = 1j * basis.C
    frame = DerivationFrame(
        size=N,
        brackets=f,
        act=act,
        mul=lambda a, b: a * b,
        zero=PolyMatrix.zero(m, nn),
        unit=PolyMatrix.constant(m, np.eye(nn)),
        norm=lambda p: p.max_norm(),
        labels=tuple(f"dx{mu + 1}" for mu in range(m))
        + tuple(f"d{k + 1}" for k in range(basis.dim)),
        key=f"mixed:{m},{nn}",
    )
    return MixedFrame(m=m, basis=basis, frame=frame)


def hat_d(omega: Form) -> Form:
    """Differential of the mixed frame: de Rham part plus matrix part."""
    return koszul_d(omega)


def splitting_itheta(mf: MixedFrame) -> Form:
    """The 1-form vanishing on coordinate derivations and picking out the
    matrix part of inner ones; splits derivations into spatial + inner."""
    return Form(mf.frame, {(mf.m + k,): PolyMatrix.constant(mf.m, 1j * Ek)
                           for k, Ek in enumerate(mf.basis.E)})


def curvature_trigrade(curv: Form, mf: MixedFrame) -> tuple[Form, Form, Form]:
    """Split a degree-2 form by bidegree: (spatial-spatial, spatial-inner,
    inner-inner) = (Yang-Mills, covariant derivative, potential) parts."""
    parts: dict[tuple[int, int], dict] = {(2, 0): {}, (1, 1): {}, (0, 2): {}}
    for key, v in curv.terms.items():
        parts[mf.bidegree(key)][key] = v
    return (Form(mf.frame, parts[(2, 0)]),
            Form(mf.frame, parts[(1, 1)]),
            Form(mf.frame, parts[(0, 2)]))


@dataclass(frozen=True)
class WeightedMetric:
    """Block metric: spatial h on coordinate directions, (1/lam^2) g on
    inner ones; lam sets the relative weight of the two blocks."""

    h: np.ndarray
    g: np.ndarray
    lam: float

    @staticmethod
    def of(mf: MixedFrame, lam: float, h=None) -> "WeightedMetric":
        if lam <= 0:
            raise InvalidParameterError("weight must be positive")
        h = np.eye(mf.m) if h is None else np.asarray(h, dtype=float)
        if h.shape != (mf.m, mf.m) or np.max(np.abs(h - h.T)) > 0 or np.any(np.linalg.eigvalsh(h) <= 0):
            raise InvalidParameterError("spatial metric must be symmetric positive definite")
        return WeightedMetric(h=h, g=mf.basis.g, lam=float(lam))

    def inverse_weights(self, mf: MixedFrame) -> np.ndarray:
        """Block-diagonal inverse metric used to contract form indices."""
        N = mf.frame.size
        W = np.zeros((N, N))
        W[:mf.m, :mf.m] = np.linalg.inv(self.h)
        W[mf.m:, mf.m:] = self.lam ** 2 * np.linalg.inv(self.g)
        return W


def ymh_action(c, wm: WeightedMetric, mf: MixedFrame,
               box: list[tuple[float, float]] | None = None,
               degree_cap: int = 6) -> float:
    """Gauge-invariant action of a connection on the mixed calculus.

    Convention used here: the curvature 2-form is contracted with the
    antisymmetrized square of the block-diagonal inverse metric (so the
    inner-inner part carries lam^4, the mixed part lam^2), traced with the
    1/n normalization and integrated exactly over the box (default the unit
    box).  Connection coefficients above degree_cap are rejected.
    """
    from .connections import ConnectionOnA, curvature_on_A

    if not isinstance(c, ConnectionOnA):
        c = ConnectionOnA(c)
    if box is None:
        box = [(0.0, 1.0)] * mf.m
    worst = max((v.total_degree() for v in c.omega.terms.values()), default=0)
    if worst > degree_cap:
        raise CapExceededError(f"connection coefficient degree {worst} exceeds cap {degree_cap}")
    F = curvature_on_A(c)
    W = wm.inverse_weights(mf)
    n = mf.basis.n
    pairs = sorted(F.terms.keys())
    total = 0.0 + 0.0j
    for (a, b) in pairs:
        Fab = F.terms[(a, b)]
        for (ap, bp) in pairs:
            weight = W[a, ap] * W[b, bp] - W[a, bp] * W[b, ap]
            if weight == 0:
                continue
            density = (Fab * F.terms[(ap, bp)].adjoint()).trace()
            total += weight * integrate_box(density, box) / n
    return float(total.real)


def nc_integrate_mixed(omega: Form, mf: MixedFrame,
                       cfg: IntegrationConfig | None = None) -> Form:
    """Integrate out the matrix directions of a mixed form.

    Components containing the full inner index block map to spatial forms
    with scalar coefficients tr(a) / (n sqrt|g|); everything else integrates
    to zero.  The result lives over the spatial frame, and intertwines the
    mixed differential with the de Rham one.
    """
    if cfg is None:
        cfg = IntegrationConfig.from_basis(mf.basis)
    inner_all = tuple(mf.inner)
    sframe = spatial_frame(mf.m)
    out = {}
    for key, v in omega.terms.items():
        if key[len(key) - len(inner_all):] != inner_all:
            continue
        spatial_key = key[:len(key) - len(inner_all)]
        out[spatial_key] = v.trace() * (1.0 / (mf.basis.n * cfg.sqrt_det_g))
    return Form(sframe, out)


def spatial_frame(m: int) -> DerivationFrame:
    """Coordinate derivations acting on scalar polynomials (de Rham model)."""
    return DerivationFrame(
        size=m,
        brackets=np.zeros((m, m, m)),
        act=lambda mu, p: p.partial(mu),
        mul=lambda a, b: a * b,
        zero=PolyMatrix.zero(m, 1),
        unit=PolyMatrix.constant(m, np.eye(1)),
        norm=lambda p: p.max_norm(),
        labels=tuple(f"dx{mu + 1}" for mu in range(m)),
        key=f"spatial:{m}",
    )
