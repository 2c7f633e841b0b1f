"""JSON codecs for the stable on-disk formats.

Complex numbers are {"re": float, "im": float}.  Term lists are emitted in
lexicographic index/exponent order so that repeated exports are
byte-identical.  Frames are referenced by id strings: "matrix:<n>",
"mixed:<m>,<n>", "isp:<theta>".
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .connections import ConnectionOnA, ModuleConnection
from .derivation_calculus import Form
from .errors import InputFormatError
from .matrix_functions import MixedFrame, PolyMatrix, build_mixed_frame
from .matrix_geometry import MatrixFrame, build_matrix_frame
from .moyal import IspFrame, MoyalConfig, MoyalPoly, build_isp_frame


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _decode_cplx(obj) -> complex:
    try:
        return complex(obj["re"], obj["im"])
    except (TypeError, KeyError):
        raise InputFormatError(f"expected a complex object, got {obj!r}") from None


def encode_matrix(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"n": a.shape[0], "re": a.real.tolist(), "im": a.imag.tolist()}


def decode_matrix(obj) -> np.ndarray:
    try:
        n = int(obj["n"])
        re_, im_ = np.asarray(obj["re"], float), np.asarray(obj["im"], float)
    except (TypeError, KeyError, ValueError):
        raise InputFormatError(f"malformed matrix object: {obj!r}") from None
    if re_.shape != (n, n) or im_.shape != (n, n):
        raise InputFormatError(f"matrix entries do not match size {n}")
    return re_ + 1j * im_


def encode_basis(basis) -> dict:
    N = basis.dim
    return {
        "n": basis.n,
        "E": [encode_matrix(Ek) for Ek in basis.E],
        "C": [[[_cplx(basis.C[k, l, m]) for m in range(N)] for l in range(N)]
              for k in range(N)],
        "g": basis.g.tolist(),
    }


def encode_polymatrix(p: PolyMatrix) -> dict:
    return {"m": p.m,
            "terms": [{"exp": list(e), "coeff": encode_matrix(p.terms[e])}
                      for e in sorted(p.terms)]}


def decode_polymatrix(obj, n: int | None = None) -> PolyMatrix:
    try:
        m = int(obj["m"])
        items = [(tuple(int(x) for x in t["exp"]), decode_matrix(t["coeff"]))
                 for t in obj["terms"]]
    except (TypeError, KeyError, ValueError):
        raise InputFormatError(f"malformed polynomial object: {obj!r}") from None
    if not items:
        if n is None:
            raise InputFormatError("empty polynomial without a declared matrix size")
        return PolyMatrix.zero(m, n)
    return PolyMatrix(m, items[0][1].shape[0], dict(items))


def encode_moyal_poly(p: MoyalPoly) -> dict:
    return {"terms": [{"exp": list(e), **_cplx(p.terms[e])} for e in sorted(p.terms)]}


def decode_moyal_poly(obj) -> MoyalPoly:
    try:
        return MoyalPoly({(int(t["exp"][0]), int(t["exp"][1])): complex(t["re"], t["im"])
                          for t in obj["terms"]})
    except (TypeError, KeyError, ValueError, IndexError):
        raise InputFormatError(f"malformed polynomial object: {obj!r}") from None


# -- frames ------------------------------------------------------------


def frame_from_id(fid: str):
    """Instantiate the frame named by an id string.

    Returns (owner, frame, coeff_encoder, coeff_decoder) where owner is the
    MatrixFrame / MixedFrame / IspFrame that carries the frame.
    """
    try:
        kind, _, arg = fid.partition(":")
        if kind == "matrix":
            mf = build_matrix_frame(int(arg))
            return mf, mf.frame, encode_matrix, lambda o: decode_matrix(o)
        if kind == "mixed":
            m_str, n_str = arg.split(",")
            mfm = build_mixed_frame(int(m_str), int(n_str))
            return (mfm, mfm.frame, encode_polymatrix,
                    lambda o: decode_polymatrix(o, n=mfm.basis.n))
        if kind == "isp":
            isp = build_isp_frame(MoyalConfig(float(arg)))
            return isp, isp.frame, encode_moyal_poly, decode_moyal_poly
    except (ValueError, TypeError):
        pass
    raise InputFormatError(f"unknown frame id {fid!r}")


def _coeff_encoder(frame_key: str):
    kind = frame_key.partition(":")[0]
    if kind == "matrix":
        return encode_matrix
    if kind in ("mixed", "spatial"):
        return encode_polymatrix
    if kind == "isp":
        return encode_moyal_poly
    raise InputFormatError(f"cannot serialize forms over frame {frame_key!r}")


def encode_form(form: Form) -> dict:
    enc = _coeff_encoder(form.frame.key)
    return {"frame": form.frame.key,
            "components": [{"degree": len(k), "indices": list(k), "coeff": enc(form.terms[k])}
                           for k in sorted(form.terms, key=lambda k: (len(k), k))]}


def decode_form(obj) -> tuple[Any, Form]:
    """Decode a form; returns (frame owner, form)."""
    try:
        fid = obj["frame"]
        components = obj["components"]
    except (TypeError, KeyError):
        raise InputFormatError(f"malformed form object: {obj!r}") from None
    owner, frame, _, dec = frame_from_id(fid)
    terms = {}
    for comp in components:
        try:
            indices = tuple(int(i) for i in comp["indices"])
            degree = int(comp["degree"])
            coeff = dec(comp["coeff"])
        except (TypeError, KeyError, ValueError):
            raise InputFormatError(f"malformed form component: {comp!r}") from None
        if degree != len(indices):
            raise InputFormatError(f"degree {degree} does not match indices {indices}")
        if list(indices) != sorted(set(indices)):
            raise InputFormatError(f"indices must be strictly increasing, got {indices}")
        if any(i < 0 or i >= frame.size for i in indices):
            raise InputFormatError(f"frame index out of range in {indices}")
        terms[indices] = terms[indices] + coeff if indices in terms else coeff
    return owner, Form(frame, terms)


def encode_connection(conn) -> dict:
    if isinstance(conn, ModuleConnection):
        return {"type": "module", "r": conn.r,
                "A": [encode_matrix(a) for a in conn.A]}
    omega = conn.omega if isinstance(conn, ConnectionOnA) else conn
    n = int(omega.frame.key.partition(":")[2])
    return {"type": "onA", "r": n,
            "A": [encode_matrix(omega.evaluate(k)) for k in range(omega.frame.size)]}


def decode_connection(obj):
    """Decode a connection file; returns ("onA", ConnectionOnA, MatrixFrame)
    or ("module", ModuleConnection, MatrixFrame)."""
    try:
        kind = obj["type"]
        A = [decode_matrix(a) for a in obj["A"]]
    except (TypeError, KeyError):
        raise InputFormatError(f"malformed connection object: {obj!r}") from None
    n2 = len(A) + 1
    n = int(round(np.sqrt(n2)))
    if n * n != n2 or n < 2:
        raise InputFormatError(f"{len(A)} components do not fit any frame size n^2 - 1")
    mf = build_matrix_frame(n)
    if kind == "onA":
        for a in A:
            if a.shape != (n, n):
                raise InputFormatError("onA connection coefficients must be n x n")
        omega = Form(mf.frame, {(k,): A[k] for k in range(len(A))})
        return "onA", ConnectionOnA(omega), mf
    if kind == "module":
        return "module", ModuleConnection.of(A), mf
    raise InputFormatError(f"unknown connection type {kind!r}")
