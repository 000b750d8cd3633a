"""JSON file formats: matrices, spectral operators, crossing data and reports.

Complex numbers are ``[re, im]`` pairs everywhere except inside expression
strings. Every loader validates against the bundled JSON schema first and
reports problems with a JSON-pointer path.
"""

import hashlib
import json
import math
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np

from . import __version__
from . import expr as exprfn
from .errors import BaxterError, MissingSample, SchemaError
from .properties import CrossingData
from .rmatrix import SpectralOperator

SCHEMAS = ("matrix", "spectral", "crossing", "report")


@lru_cache(maxsize=None)
def schema(name):
    text = resources.files("yangbaxter").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(text)


def _pointer(path):
    return "".join(f"/{p}" for p in path)


def validate(doc, name):
    """Validate ``doc`` against schema ``name``; first error (by path) raises."""
    validator = jsonschema.Draft202012Validator(schema(name))
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _pointer(err.absolute_path))


def read_json(path):
    """``(document, raw_bytes)``; malformed JSON raises :class:`SchemaError`."""
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return json.loads(raw), raw
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError(f"not valid JSON ({exc})") from None


def doc_kind(doc):
    if isinstance(doc, dict):
        if "dim" in doc:
            return "matrix"
        if "local_dim" in doc:
            return "spectral"
        if "lambda" in doc:
            return "crossing"
    raise SchemaError("cannot tell the file type: expected 'dim', 'local_dim' or 'lambda'")


def pair(p):
    return complex(p[0], p[1])


def _check_finite(values, pointer):
    for n, z in enumerate(values):
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise SchemaError("entry is not finite", f"{pointer}/{n}")


def matrix_from_doc(doc):
    validate(doc, "matrix")
    dim = doc["dim"]
    values = [pair(p) for p in doc["entries"]]
    if len(values) != dim * dim:
        raise SchemaError(f"expected {dim * dim} entries for dim {dim}, found {len(values)}", "/entries")
    _check_finite(values, "/entries")
    return np.array(values, dtype=np.complex128).reshape(dim, dim)


def _constants(doc, overrides):
    consts = {name: pair(v) for name, v in doc.get("constants", {}).items()}
    consts.update({k: complex(v) for k, v in (overrides or {}).items()})
    if exprfn.IMAGINARY_UNIT in consts:
        raise SchemaError("'i' is the imaginary unit and cannot be a constant", "/constants/i")
    for name in ("u",):
        if name in consts:
            raise SchemaError(f"'{name}' is the spectral parameter and cannot be a constant",
                              f"/constants/{name}")
    return consts


def _parse_at(text, pointer):
    try:
        return exprfn.parse(text)
    except BaxterError as exc:
        raise SchemaError(str(exc), pointer) from None


def _bound(node, allowed, pointer):
    missing = sorted(exprfn.identifiers(node) - allowed)
    if missing:
        raise SchemaError(f"unbound identifier {missing[0]!r}", pointer)


def spectral_from_doc(doc, overrides=None, label=""):
    """:class:`SpectralOperator` from a SpectralFile (or a constant MatrixFile)."""
    if doc_kind(doc) == "matrix":
        return SpectralOperator.constant(matrix_from_doc(doc), label or doc.get("label", "matrix"))
    validate(doc, "spectral")
    d = doc["local_dim"]
    n = d * d
    form = doc.get("form", "braided")
    label = label or doc.get("label", "")
    if form == "sampled":
        return _sampled_operator(doc, label)
    if "entries" not in doc:
        raise SchemaError("'entries' is required unless form is 'sampled'")
    consts = _constants(doc, overrides)
    if len(doc["entries"]) != n * n:
        raise SchemaError(f"expected {n * n} entries for local_dim {d}, found {len(doc['entries'])}",
                          "/entries")
    allowed = set(consts) | {"u"}
    nodes = []
    for idx, text in enumerate(doc["entries"]):
        node = _parse_at(text, f"/entries/{idx}")
        _bound(node, allowed, f"/entries/{idx}")
        nodes.append(node)
    poles = []
    for idx, text in enumerate(doc.get("poles", [])):
        node = _parse_at(text, f"/poles/{idx}")
        _bound(node, set(consts), f"/poles/{idx}")
        try:
            poles.append(exprfn.evaluate(node, consts))
        except BaxterError as exc:
            raise SchemaError(str(exc), f"/poles/{idx}") from None

    def at(u):
        env = {**consts, "u": u}
        return np.array([exprfn._eval(nd, env) for nd in nodes], dtype=np.complex128).reshape(n, n)

    op = SpectralOperator(at, d, poles, label, "r" if form == "r" else "braided")
    op.constants = consts
    op.nodes = tuple(nodes)
    return op


def _sampled_operator(doc, label):
    d = doc["local_dim"]
    n = d * d
    table = []
    for idx, s in enumerate(doc.get("samples", [])):
        values = [pair(p) for p in s["entries"]]
        if len(values) != n * n:
            raise SchemaError(f"expected {n * n} entries, found {len(values)}",
                              f"/samples/{idx}/entries")
        _check_finite(values, f"/samples/{idx}/entries")
        table.append((pair(s["u"]), np.array(values).reshape(n, n)))

    def at(u):
        for x, m in table:
            if abs(x - u) <= 1e-12:
                return m
        raise MissingSample(f"sampled operator has no sample at u={u:.6g}", sample=u)

    op = SpectralOperator(at, d, (), label or "sampled")
    op.sample_points = tuple(x for x, _ in table)
    return op


def matrix_from_any(doc, overrides=None, at=None):
    """Constant matrix from a MatrixFile or a u-free (or evaluated) SpectralFile."""
    if doc_kind(doc) == "matrix":
        return matrix_from_doc(doc)
    op = spectral_from_doc(doc, overrides)
    uses_u = any("u" in exprfn.identifiers(nd) for nd in getattr(op, "nodes", ()))
    if uses_u and at is None:
        raise SchemaError("entries depend on u; pass a sample point to evaluate them", "/entries")
    return op.at(0.0 if at is None else at)


def crossing_from_doc(doc, overrides=None):
    validate(doc, "crossing")
    consts = _constants(doc, overrides)
    lam_node = _parse_at(doc["lambda"], "/lambda")
    _bound(lam_node, set(consts), "/lambda")
    f = None
    if "F" in doc:
        f_node = _parse_at(doc["F"], "/F")
        _bound(f_node, set(consts) | {"u"}, "/F")
        f = exprfn.compile_expr(f_node, consts)
    try:
        lam = exprfn.evaluate(lam_node, consts)
        return CrossingData(lam, tuple(pair(p) for p in doc["multipliers"]), tuple(doc["bar"]),
                            F=f, label=doc.get("label", ""))
    except (BaxterError, ValueError) as exc:
        raise SchemaError(str(exc), "/multipliers" if "multipl" in str(exc) else "/bar") from None


# -- emitting ---------------------------------------------------------------

def format_number(z, tol=0.0, snap=True):
    """Expression text for a complex constant.

    With ``snap``, parts within 1e-12 (relative) of a fraction with
    denominator at most 64 are printed as that fraction; everything else
    is printed with a round-tripping float literal.
    """
    z = complex(z)
    re_, im = z.real, z.imag
    if abs(im) <= tol:
        return _fmt_real(re_, snap)
    if abs(re_) <= tol:
        return f"({_fmt_real(im, snap)}*i)"
    return f"({_fmt_real(re_, snap)} + {_fmt_real(im, snap)}*i)"


def _fmt_real(x, snap=True):
    x = float(x)
    if snap and math.isfinite(x):
        f = Fraction(x).limit_denominator(64)
        if abs(f - Fraction(x)) <= 1e-12 * max(1.0, abs(x)):
            text = str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
            return f"({text})" if f < 0 or f.denominator != 1 else text
    text = repr(x)
    return f"({text})" if text.startswith("-") else text


def polynomial_expression(coeffs, var, tol=1e-15):
    """``c0 + c1*var + c2*var^2 + ...`` skipping zero coefficients."""
    terms = []
    for power, c in enumerate(coeffs):
        if abs(c) <= tol:
            continue
        num = format_number(c, tol)
        if power == 0:
            terms.append(num)
        elif power == 1:
            terms.append(f"{num}*{var}")
        else:
            terms.append(f"{num}*{var}^{power}")
    return " + ".join(terms) if terms else "0"


def spectral_document(entries, local_dim, constants=None, poles=(), label="", provenance="",
                      form="braided"):
    doc = {"local_dim": int(local_dim), "form": form,
           "constants": {k: [complex(v).real, complex(v).imag] for k, v in (constants or {}).items()},
           "poles": list(poles), "entries": list(entries)}
    if label:
        doc["label"] = label
    if provenance:
        doc["provenance"] = provenance
    validate(doc, "spectral")
    return doc


def sampled_document(op, points, label="", provenance=""):
    samples = []
    for u in points:
        m = op.at(u)
        samples.append({"u": [complex(u).real, complex(u).imag],
                        "entries": [[z.real, z.imag] for z in m.ravel()]})
    doc = {"local_dim": op.local_dim, "form": "sampled", "samples": samples}
    if label:
        doc["label"] = label
    if provenance:
        doc["provenance"] = provenance
    validate(doc, "spectral")
    return doc


def matrix_document(m, label=""):
    m = np.asarray(m, dtype=np.complex128)
    doc = {"dim": int(m.shape[0]), "entries": [[z.real, z.imag] for z in m.ravel()]}
    if label:
        doc["label"] = label
    return doc


# -- deterministic JSON -----------------------------------------------------

def _plain(obj):
    """Convert numpy scalars/arrays, complex numbers and tuples to JSON-able values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    return repr(obj)


def _render(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_render(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_render(v, indent, level) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _render(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g") if obj != int(obj) or abs(obj) >= 1e17 else format(obj, ".1f")
    return json.dumps(obj)


def dumps(obj, indent=2):
    """Byte-stable JSON: sorted keys, floats at 17 significant digits."""
    return _render(_plain(obj), indent, 0) + "\n"


def digest(chunks):
    """``sha256:<hex>`` over length-prefixed byte chunks."""
    h = hashlib.sha256()
    for c in chunks:
        c = c if isinstance(c, bytes) else str(c).encode()
        h.update(len(c).to_bytes(8, "big"))
        h.update(c)
    return "sha256:" + h.hexdigest()


def report_document(report, input_digest):
    samples = [{"u": None if u is None else _plain(complex(u)),
                "v": None if v is None else _plain(complex(v)),
                "residual": float(r)} for u, v, r in report.samples]
    doc = {"check": report.check_name, "tolerance": float(report.tolerance),
           "max_residual": float(report.max_residual) if math.isfinite(report.max_residual) else None,
           "pass": bool(report.passed), "samples": samples, "notes": list(report.notes),
           "details": _plain(report.details), "tool_version": __version__,
           "input_digest": input_digest}
    validate(json.loads(dumps(doc)), "report")
    return doc
