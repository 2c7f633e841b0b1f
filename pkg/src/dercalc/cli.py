"""Command-line interface.

Every subcommand writes its result to stdout (JSON with --json, a terse
text rendering otherwise where one exists) and diagnostics to stderr.
Exit codes: 0 success, 1 domain error, 2 malformed input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import matrix_functions as mfn
from .connections import (ConnectionOnA, curvature_on_A, flat_gauge_equivalent,
                          gauge_transform, module_curvature)
from .core_algebra import build_basis, default_tol
from .derivation_calculus import Form, koszul_d, wedge
from .errors import CalculusError, InputFormatError
from .matrix_geometry import (IntegrationConfig, build_matrix_frame,
                              cohomology_betti, nc_integrate)
from .moyal import (MoyalConfig, build_isp_frame, canonical_curvature,
                    format_poly, parse_poly, star)
from .serialize import (decode_connection, decode_form, decode_matrix,
                        encode_basis, encode_connection, encode_form,
                        encode_matrix, encode_moyal_poly)


def _emit(doc) -> None:
    print(json.dumps(doc, sort_keys=True))


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputFormatError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON in {path}: {exc}") from None


def _cmd_basis(args) -> int:
    _emit(encode_basis(build_basis(args.n)))
    return 0


def _cmd_d(args) -> int:
    _, form = decode_form(_load(args.input))
    _emit(encode_form(koszul_d(form)))
    return 0


def _cmd_wedge(args) -> int:
    _, a = decode_form(_load(args.a))
    _, b = decode_form(_load(args.b))
    _emit(encode_form(wedge(a, b)))
    return 0


def _cmd_cohomology(args) -> int:
    mf = build_matrix_frame(args.n)
    _emit(cohomology_betti(mf))
    return 0


def _cmd_curvature(args) -> int:
    kind, conn, mf = decode_connection(_load(args.input))
    if kind == "onA":
        _emit(encode_form(curvature_on_A(conn)))
    else:
        _emit(encode_form(module_curvature(conn, mf)))
    return 0


def _cmd_gauge(args) -> int:
    kind, conn, mf = decode_connection(_load(args.input))
    if kind != "onA":
        raise InputFormatError("gauge transformation expects an onA connection")
    g = decode_matrix(_load(args.g))
    _emit(encode_connection(gauge_transform(conn, g)))
    return 0


def _cmd_flat_equiv(args) -> int:
    kind_a, ca, mf = decode_connection(_load(args.a))
    kind_b, cb, mf_b = decode_connection(_load(args.b))
    if kind_a != "module" or kind_b != "module":
        raise InputFormatError("flat-equiv expects module connections")
    if mf.basis.n != mf_b.basis.n:
        raise InputFormatError("connections live over different matrix sizes")
    equivalent = flat_gauge_equivalent(ca, cb, mf, tol=args.tol)
    if args.json:
        _emit({"equivalent": equivalent})
    else:
        print("equivalent" if equivalent else "not equivalent")
    return 0


def _cmd_integrate(args) -> int:
    owner, form = decode_form(_load(args.input))
    if not form.frame.key.startswith("matrix:"):
        raise InputFormatError("integrate expects a form over a matrix frame")
    value = complex(nc_integrate(form, IntegrationConfig.from_basis(owner.basis), owner))
    _emit({"im": value.imag, "re": value.real})
    return 0


def _cmd_ymh(args) -> int:
    mfm = mfn.build_mixed_frame(args.m, args.n)
    wm = mfn.WeightedMetric.of(mfm, args.lam)
    omega = _demo_connection_form(mfm)
    conn = ConnectionOnA(omega)
    F = curvature_on_A(conn)
    f20, f11, f02 = mfn.curvature_trigrade(F, mfm)
    action = mfn.ymh_action(conn, wm, mfm)
    doc = {
        "action": action,
        "f02_norm": f02.max_norm(),
        "f11_norm": f11.max_norm(),
        "f20_norm": f20.max_norm(),
        "lambda": args.lam,
    }
    if args.json:
        _emit(doc)
    else:
        print(json.dumps(doc, sort_keys=True, indent=2))
    return 0


def _demo_connection_form(mfm) -> Form:
    """Fixed demo connection: canonical inner part plus a linear spatial
    part and a constant inner deformation."""
    m, basis = mfm.m, mfm.basis
    terms = {}
    for mu in range(m):
        coords = (0,) * mu + (1,) + (0,) * (m - mu - 1)
        terms[(mu,)] = mfn.PolyMatrix.monomial(m, coords, 0.3j * basis.E[mu % basis.dim])
    for k in range(basis.dim):
        inner = -1j * basis.E[k]
        if k == 0:
            inner = inner + 0.2j * basis.E[1 % basis.dim]
        terms[(m + k,)] = mfn.PolyMatrix.constant(m, inner)
    return Form(mfm.frame, terms)


def _cmd_moyal_star(args) -> int:
    cfg = MoyalConfig(args.theta)
    P = parse_poly(args.P)
    Q = parse_poly(args.Q)
    R = star(P, Q, cfg)
    if args.json:
        _emit({"text": format_poly(R), **encode_moyal_poly(R)})
    else:
        print(format_poly(R))
    return 0


def _cmd_moyal_curvature(args) -> int:
    cfg = MoyalConfig(args.theta)
    isp = build_isp_frame(cfg)
    curv = canonical_curvature(isp)
    components = [{"indices": list(k), "poly": encode_moyal_poly(curv.terms[k]),
                   "text": format_poly(curv.terms[k])}
                  for k in sorted(curv.terms)]
    if args.json:
        _emit({"components": components, "theta": args.theta})
    else:
        for comp in components:
            a, b = comp["indices"]
            print(f"({isp.frame.labels[a]}, {isp.frame.labels[b]}): {comp['text']}")
        if not components:
            print("0")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dercalc",
        description="Derivation-based differential calculus on matrix and Moyal algebras")
    parser.add_argument("--tol", type=float, default=None,
                        help="comparison tolerance (default DERCALC_TOL or 1e-10)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="export the hermitian traceless basis of sl(n)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=_cmd_basis)

    p = sub.add_parser("d", help="apply the differential to a form file")
    p.add_argument("--input", required=True)
    p.set_defaults(fn=_cmd_d)

    p = sub.add_parser("wedge", help="graded product of two form files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(fn=_cmd_wedge)

    p = sub.add_parser("cohomology", help="Betti numbers of the matrix calculus")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=_cmd_cohomology)

    p = sub.add_parser("curvature", help="curvature of a connection file")
    p.add_argument("--input", required=True)
    p.set_defaults(fn=_cmd_curvature)

    p = sub.add_parser("gauge", help="gauge-transform an onA connection")
    p.add_argument("--input", required=True)
    p.add_argument("--g", required=True, help="matrix file of the gauge element")
    p.set_defaults(fn=_cmd_gauge)

    p = sub.add_parser("flat-equiv", help="gauge equivalence of two flat module connections")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_flat_equiv)

    p = sub.add_parser("integrate", help="noncommutative integral of a matrix-frame form")
    p.add_argument("--input", required=True)
    p.set_defaults(fn=_cmd_integrate)

    p = sub.add_parser("ymh", help="Yang-Mills-Higgs demo action")
    p.add_argument("mode", choices=["demo"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_ymh)

    p = sub.add_parser("moyal", help="star-product computations")
    msub = p.add_subparsers(dest="moyal_command", required=True)
    ps = msub.add_parser("star", help="star product of two polynomials")
    ps.add_argument("--theta", type=float, required=True)
    ps.add_argument("P")
    ps.add_argument("Q")
    ps.add_argument("--json", action="store_true")
    ps.set_defaults(fn=_cmd_moyal_star)
    pc = msub.add_parser("curvature", help="curvature of the canonical connection")
    pc.add_argument("--theta", type=float, required=True)
    pc.add_argument("--json", action="store_true")
    pc.set_defaults(fn=_cmd_moyal_curvature)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CalculusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
