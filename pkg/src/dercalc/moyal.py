"""Polynomial model of the deformed plane with the star product.

Polynomials in x1, x2 carry the derivative-expansion product associated to
the antisymmetric deformation matrix theta * [[0, -1], [1, 0]]; on
polynomials the expansion is a finite sum that truncates at the smaller of
the two degrees.  The five inner derivations generated by polynomials of
degree <= 2 (two translations, three symplectic rotations) form a closed
frame whose brackets come from the Poisson bracket, and they support the
canonical 1-form whose commutator reproduces the differential.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .derivation_calculus import DerivationFrame, Form
from .errors import InputFormatError, InvalidParameterError


@dataclass(frozen=True)
class MoyalConfig:
    """Deformation data: theta != 0, the matrix Theta and its inverse."""

    theta: float

    def __post_init__(self):
        if self.theta == 0:
            raise InvalidParameterError("deformation parameter must be nonzero")

    @property
    def Theta(self) -> np.ndarray:
        return self.theta * np.array([[0.0, -1.0], [1.0, 0.0]])

    @property
    def Theta_inv(self) -> np.ndarray:
        return (1.0 / self.theta) * np.array([[0.0, 1.0], [-1.0, 0.0]])


class MoyalPoly:
    """Complex-coefficient polynomial in x1, x2 (finitely supported).

    The plain * operator is the commutative coefficient product; the
    deformed product lives in :func:`star`.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], complex]):
        self.terms = {}
        for e, c in terms.items():
            c = complex(c)
            if c != 0:
                self.terms[(int(e[0]), int(e[1]))] = c

    @staticmethod
    def zero() -> "MoyalPoly":
        return MoyalPoly({})

    @staticmethod
    def one() -> "MoyalPoly":
        return MoyalPoly({(0, 0): 1.0})

    @staticmethod
    def constant(c: complex) -> "MoyalPoly":
        return MoyalPoly({(0, 0): c})

    @staticmethod
    def x(mu: int) -> "MoyalPoly":
        """The coordinate x1 (mu = 0) or x2 (mu = 1)."""
        return MoyalPoly({(1, 0) if mu == 0 else (0, 1): 1.0})

    def __add__(self, other: "MoyalPoly") -> "MoyalPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0.0) + c
        return MoyalPoly(out)

    def __sub__(self, other: "MoyalPoly") -> "MoyalPoly":
        return self + (-other)

    def __neg__(self) -> "MoyalPoly":
        return MoyalPoly({e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if np.isscalar(other):
            return MoyalPoly({e: other * c for e, c in self.terms.items()})
        out: dict[tuple[int, int], complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1])
                out[e] = out.get(e, 0.0) + c1 * c2
        return MoyalPoly(out)

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return NotImplemented

    def partial(self, mu: int) -> "MoyalPoly":
        out = {}
        for (e1, e2), c in self.terms.items():
            if mu == 0 and e1 > 0:
                out[(e1 - 1, e2)] = out.get((e1 - 1, e2), 0.0) + e1 * c
            elif mu == 1 and e2 > 0:
                out[(e1, e2 - 1)] = out.get((e1, e2 - 1), 0.0) + e2 * c
        return MoyalPoly(out)

    def degree(self) -> int:
        return max((e1 + e2 for e1, e2 in self.terms), default=0)

    def constant_part(self) -> complex:
        return self.terms.get((0, 0), 0.0 + 0.0j)

    def drop_constant(self) -> "MoyalPoly":
        return MoyalPoly({e: c for e, c in self.terms.items() if e != (0, 0)})

    def max_norm(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __repr__(self) -> str:
        return f"MoyalPoly({format_poly(self)!r})"


def star(P: MoyalPoly, Q: MoyalPoly, cfg: MoyalConfig) -> MoyalPoly:
    """Deformed product as the finite derivative expansion.

    The order-j term carries (i theta / 2)^j / j! and sums the j-fold split
    of derivatives between the factors with alternating sign; order 0 is the
    plain product, and all orders beyond min(deg P, deg Q) vanish.
    """
    jmax = min(P.degree(), Q.degree())
    # iterated derivative tables: dP[s][t] = d1^s d2^t P
    dP = {(0, 0): P}
    dQ = {(0, 0): Q}
    for table, base in ((dP, P), (dQ, Q)):
        for s in range(jmax + 1):
            for t in range(jmax + 1 - s):
                if (s, t) == (0, 0):
                    continue
                if t > 0:
                    table[(s, t)] = table[(s, t - 1)].partial(1)
                else:
                    table[(s, t)] = table[(s - 1, 0)].partial(0)
    total = P * Q
    half_i_theta = 0.5j * cfg.theta
    for j in range(1, jmax + 1):
        scale = half_i_theta ** j
        for s in range(j + 1):
            coeff = scale * float(Fraction(comb(j, s), factorial(j))) * (-1) ** s
            total = total + coeff * (dP[(s, j - s)] * dQ[(j - s, s)])
    return total


def star_commutator(P: MoyalPoly, Q: MoyalPoly, cfg: MoyalConfig) -> MoyalPoly:
    return star(P, Q, cfg) - star(Q, P, cfg)


def poisson_bracket(P: MoyalPoly, Q: MoyalPoly, cfg: MoyalConfig) -> MoyalPoly:
    """i Theta^{mu nu} (d_mu P)(d_nu Q); normalized so that it agrees with
    the star commutator on polynomials of degree <= 2."""
    t = cfg.theta
    return (1j * t) * (P.partial(1) * Q.partial(0) - P.partial(0) * Q.partial(1))


@dataclass(frozen=True)
class IspFrame:
    """Translations plus symplectic rotations acting by star commutators."""

    cfg: MoyalConfig
    generators: tuple[MoyalPoly, ...]
    frame: DerivationFrame

    TRANSLATIONS = (0, 1)
    ROTATIONS = (2, 3, 4)


# monomial coordinates used to expand degree <= 2 polynomials on the generators
_QUAD_MONOMIALS = ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


def build_isp_frame(cfg: MoyalConfig) -> IspFrame:
    """The five-generator frame: x-translations P_mu = -i Theta^{-1}_{mu nu} x^nu
    and the rotations generated by x1^2, x2^2, x1 x2."""
    Ti = cfg.Theta_inv
    gens = (
        MoyalPoly({(0, 1): -1j * Ti[0, 1]}),
        MoyalPoly({(1, 0): -1j * Ti[1, 0]}),
        MoyalPoly({(2, 0): 1.0}),
        MoyalPoly({(0, 2): 1.0}),
        MoyalPoly({(1, 1): 1.0}),
    )
    # expansion matrix: column a holds generator a's coordinates on the monomials
    M = np.zeros((5, 5), dtype=complex)
    for col, g in enumerate(gens):
        for row, mono in enumerate(_QUAD_MONOMIALS):
            M[row, col] = g.terms.get(mono, 0.0)
    f = np.zeros((5, 5, 5), dtype=complex)
    for a in range(5):
        for b in range(a + 1, 5):
            bracket = star_commutator(gens[a], gens[b], cfg).drop_constant()
            rhs = np.array([bracket.terms.get(mono, 0.0) for mono in _QUAD_MONOMIALS])
            coeff = np.linalg.solve(M, rhs)
            f[a, b, :] = coeff
            f[b, a, :] = -coeff
            recovered = sum((coeff[c] * gens[c] for c in range(5)), MoyalPoly.zero())
            assert (recovered - bracket).max_norm() < 1e-12

    def act(a: int, Q: MoyalPoly) -> MoyalPoly:
        return star_commutator(gens[a], Q, cfg)

    frame = DerivationFrame(
        size=5,
        brackets=f,
        act=act,
        mul=lambda p, q: star(p, q, cfg),
        zero=MoyalPoly.zero(),
        unit=MoyalPoly.one(),
        norm=lambda p: p.max_norm(),
        labels=("P1", "P2", "x1^2", "x2^2", "x1*x2"),
        key=f"isp:{cfg.theta!r}",
    )
    return IspFrame(cfg=cfg, generators=gens, frame=frame)


def canonical_eta(isp: IspFrame) -> Form:
    """The 1-form sending each frame derivation to its generating polynomial
    (constant part removed); its commutator reproduces the differential in
    degree 0."""
    return Form(isp.frame, {(a,): g.drop_constant() for a, g in enumerate(isp.generators)})


def canonical_curvature(isp: IspFrame) -> Form:
    """Curvature of the canonical connection: eta([X, Y]) - [eta(X), eta(Y)]
    componentwise.  Nonzero only on the translation pair, where it is the
    constant -i / theta."""
    eta = canonical_eta(isp)
    f = isp.frame.brackets
    out = {}
    for a in range(5):
        for b in range(a + 1, 5):
            v = MoyalPoly.zero()
            for c in range(5):
                if f[a, b, c] != 0:
                    v = v + f[a, b, c] * eta.terms[(c,)]
            v = v - star_commutator(isp.generators[a], isp.generators[b], isp.cfg)
            out[(a, b)] = v
    return Form(isp.frame, out)


# ---------------------------------------------------------------------------
# text syntax: e.g. "(2+3i)*x1^2*x2 + x1 - 0.5i"
# ---------------------------------------------------------------------------

_VAR_RE = re.compile(r"^x([12])(?:\^([0-9]+))?$")


def _parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    if s in ("i", "+i"):
        return 1j
    if s == "-i":
        return -1j
    s = re.sub(r"(?<![0-9.])i", "1j", s).replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise InputFormatError(f"cannot parse number {text!r}") from None


def _split_terms(text: str) -> list[str]:
    """Split into signed terms at paren depth 0; signs after e/E (scientific
    notation), '*', '(' or '^' stay attached to what follows."""
    parts, depth, cur, prev = [], 0, "", ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InputFormatError("unbalanced parentheses")
        if depth == 0 and ch in "+-" and cur.strip() and prev not in "eE(*^+-":
            parts.append(cur)
            cur = ch
        else:
            cur += ch
        if not ch.isspace():
            prev = ch
    if depth != 0:
        raise InputFormatError("unbalanced parentheses")
    parts.append(cur)
    return parts


def parse_poly(text: str) -> MoyalPoly:
    """Parse the CLI polynomial syntax into a MoyalPoly."""
    text = text.strip()
    if not text:
        raise InputFormatError("empty polynomial")
    total = MoyalPoly.zero()
    for raw in _split_terms(text):
        raw = raw.strip()
        if not raw:
            continue
        sign = 1.0
        while raw and raw[0] in "+-":
            if raw[0] == "-":
                sign = -sign
            raw = raw[1:].strip()
        if not raw:
            raise InputFormatError("dangling sign")
        value = MoyalPoly.constant(sign)
        for factor in _split_factors(raw):
            value = value * _parse_factor(factor)
        total = total + value
    return total


def _split_factors(term: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in term:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch == "*":
            parts.append(cur)
            cur = ""
            continue
        cur += ch
    parts.append(cur)
    out = [p.strip() for p in parts]
    if any(not p for p in out):
        raise InputFormatError(f"empty factor in term {term!r}")
    return out


def _parse_factor(text: str) -> MoyalPoly:
    text = text.strip()
    m = _VAR_RE.match(text)
    if m:
        mu = int(m.group(1)) - 1
        power = int(m.group(2)) if m.group(2) else 1
        out = MoyalPoly.one()
        for _ in range(power):
            out = out * MoyalPoly.x(mu)
        return out
    if text.startswith("(") and text.endswith(")"):
        return MoyalPoly.constant(_parse_complex(text[1:-1]))
    return MoyalPoly.constant(_parse_complex(text))


def _fmt_float(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def format_poly(p: MoyalPoly) -> str:
    """Deterministic text form: terms by descending total degree, then x1
    power; unit coefficients omitted; pure-imaginary coefficients suffixed i."""
    if not p.terms:
        return "0"
    pieces = []
    for e in sorted(p.terms, key=lambda e: (-(e[0] + e[1]), -e[0])):
        c = p.terms[e]
        mono = "*".join(
            ([f"x1^{e[0]}" if e[0] > 1 else "x1"] if e[0] else [])
            + ([f"x2^{e[1]}" if e[1] > 1 else "x2"] if e[1] else []))
        re_, im_ = c.real, c.imag
        if im_ == 0:
            negative, body = re_ < 0, _fmt_float(abs(re_))
            if mono and body == "1":
                body = ""
        elif re_ == 0:
            negative, mag = im_ < 0, abs(im_)
            body = "i" if mag == 1 else _fmt_float(mag) + "i"
        else:
            negative = False
            im_sign = "+" if im_ >= 0 else "-"
            body = f"({_fmt_float(re_)}{im_sign}{_fmt_float(abs(im_))}i)"
        text = body + ("*" if body and mono else "") + mono
        pieces.append(("-" if negative else "+", text or "1"))
    sign0, text0 = pieces[0]
    out = ("-" if sign0 == "-" else "") + text0
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out
