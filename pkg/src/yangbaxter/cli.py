"""``baxter`` command line: run checkers and Baxterization recipes on JSON inputs.

Exit codes: 0 pass, 1 fail, 2 input error. Unrecognised ``--name value``
pairs bind (or override) expression constants, e.g. ``--k 2``.
"""

import argparse
import os
import sys

import numpy as np

from . import __version__, linalg
from . import expr as exprfn
from . import io as fio
from .algebra import (check_bmw_prime, check_braid_relations, check_temperley_lieb,
                      fit_skein_4cb, normalize_tl_generator)
from .baxterize import (YFunction, baxterize_three_blocks, baxterize_two_blocks,
                        baxterize_two_blocks_tl, bmw_normalize)
from .errors import BaxterError, PoleClash, _fmt_complex
from .properties import (check_charge_conservation, check_cpt, check_crossing,
                         check_second_inversion, check_unitarity)
from .rmatrix import (DEFAULT_GRID, DEFAULT_TOL, CheckReport, SampleGrid, check_ybe_braided,
                      check_ybe_r_form)
from .transfer import check_transfer_commutation

CHECKS = ("ybe", "ybe-r", "unitarity", "crossing", "second-inversion", "cpt", "charge",
          "braid", "tl", "bmw", "skein", "transfer")
METHODS = ("two-block", "two-block-tl", "three-block")

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# -- argument handling --------------------------------------------------------

def _common(p):
    p.add_argument("--grid", help="comma-separated u samples (expressions); strict about poles")
    p.add_argument("--tol", type=float, help="tolerance (default $BAXTER_TOL or 1e-9)")
    p.add_argument("--out", help="write the JSON report to this path")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of a summary")


def build_parser():
    parser = argparse.ArgumentParser(prog="baxter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run one checker")
    c.add_argument("kind", choices=CHECKS)
    c.add_argument("input")
    _common(c)
    c.add_argument("--chain", type=int, default=3, help="chain length N for transfer")
    c.add_argument("--backend", choices=("cython", "python"), help="transfer-matrix kernel")
    c.add_argument("--crossing", help="crossing-data file (crossing, second-inversion, cpt)")
    c.add_argument("--e", dest="e_file", help="TL generator file for bmw / skein")
    c.add_argument("--ordering", help="eigenvalue ordering for bmw normalization")
    c.add_argument("--bar", help="bar involution for cpt, e.g. 1,0")
    c.add_argument("--charge", help="per-state charges, e.g. 0,1")
    c.add_argument("--at", help="evaluate a u-dependent input at this u (matrix checks)")

    b = sub.add_parser("baxterize", help="build a spectral solution from a braid representation")
    b.add_argument("method", choices=METHODS)
    b.add_argument("input")
    _common(b)
    b.add_argument("--y", help="y(u) expression (default 1-u; two-block-tl needs it)")
    b.add_argument("--u0", help="braid limit of y (default: a root of y)")
    b.add_argument("--ordering", help="comma-separated eigenvalue ordering (expressions)")
    b.add_argument("--emit", help="write the constructed SpectralFile here (default stdout)")
    b.add_argument("--input-kind", choices=("auto", "bgr", "tl"), default="auto",
                   help="two-block-tl: treat the input as a BGR or as a TL generator")
    b.add_argument("--tl-sign", type=int, choices=(1, -1), default=1,
                   help="sign of the TL normalization for BGR input")
    b.add_argument("--strict", action="store_true", help="exit 1 when the YBE check fails")
    b.add_argument("--at", help="evaluate a u-dependent input at this u")
    return parser


def _known_options(parser):
    out = {}
    for action in parser._actions:
        for opt in action.option_strings:
            out[opt] = action.nargs != 0
    return out


def split_overrides(argv, parser):
    """Separate ``--name value`` constant bindings from the known options.

    Value-taking known options are rewritten as ``--opt=value`` so that
    values such as ``-1,1,3`` are never mistaken for flags.
    """
    sub = None
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for tok in argv:
                if tok in action.choices:
                    sub = action.choices[tok]
                    break
    known = _known_options(parser)
    if sub is not None:
        known.update(_known_options(sub))
    rest, overrides = [], {}
    i = 0
    while i < len(argv):
        tok = argv[i]
        name, eq, val = tok.partition("=")
        if tok.startswith("--") and name not in known and len(name) > 2:
            if not eq:
                if i + 1 >= len(argv):
                    raise InputError(f"{tok} needs a value")
                val = argv[i + 1]
                i += 1
            overrides[name[2:]] = val
        elif tok.startswith("--") and name in known and known[name] and not eq and i + 1 < len(argv):
            rest.append(f"{tok}={argv[i + 1]}")
            i += 1
        else:
            rest.append(tok)
        i += 1
    return rest, overrides


def _value(text, consts=None, what="value"):
    try:
        return exprfn.evaluate(exprfn.parse(text), dict(consts or {}))
    except BaxterError as exc:
        raise InputError(f"bad {what} {text!r}: {exc}") from None


def _list(text, consts=None, what="list"):
    return [_value(t.strip(), consts, what) for t in text.split(",") if t.strip()]


def _int_list(text, what):
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"{what} must be a comma-separated list of integers") from None


def tolerance(args):
    if args.tol is not None:
        return args.tol
    env = os.environ.get("BAXTER_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise InputError(f"BAXTER_TOL={env!r} is not a number") from None
    return DEFAULT_TOL


def grid_of(args, consts):
    if not args.grid:
        return DEFAULT_GRID
    return SampleGrid.from_values(_list(args.grid, consts, "grid sample"), strict=True)


# -- loading -----------------------------------------------------------------

class Inputs:
    """Loaded documents plus the bytes that feed the report digest."""

    def __init__(self, overrides):
        self.raw_overrides = dict(overrides)
        self.overrides = {k: _value(v, what=f"--{k}") for k, v in overrides.items()}
        self.chunks = []

    def read(self, path):
        try:
            doc, raw = fio.read_json(path)
        except OSError as exc:
            raise InputError(f"{path}: {exc.strerror or exc}") from None
        except BaxterError as exc:
            raise InputError(f"{path}: {exc}") from None
        try:
            fio.validate(doc, fio.doc_kind(doc))
        except BaxterError as exc:
            raise InputError(f"{path}: {exc}") from None
        self.chunks.append(raw)
        return doc

    def constants(self, doc):
        consts = {k: fio.pair(v) for k, v in (doc.get("constants") or {}).items()} \
            if isinstance(doc, dict) else {}
        consts.update(self.overrides)
        return consts

    def digest(self, flags):
        extra = fio.dumps({"flags": flags, "constants": self.raw_overrides}).encode()
        return fio.digest(self.chunks + [extra])


def _wrap(path, fn, *a, **kw):
    try:
        return fn(*a, **kw)
    except PoleClash:
        raise
    except BaxterError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- check -------------------------------------------------------------------

def _need(value, flag, kind):
    if value is None:
        raise InputError(f"check {kind} needs {flag}")
    return value


def run_check(args, inputs):
    kind = args.kind
    doc = inputs.read(args.input)
    consts = inputs.constants(doc)
    tol = tolerance(args)
    grid = grid_of(args, consts)

    def operator():
        return _wrap(args.input, fio.spectral_from_doc, doc, inputs.overrides)

    def matrix(path=args.input, d=doc):
        at = None if args.at is None else _value(args.at, consts, "--at")
        return _wrap(path, fio.matrix_from_any, d, inputs.overrides, at)

    def crossing():
        path = _need(args.crossing, "--crossing FILE", kind)
        cdoc = inputs.read(path)
        return _wrap(path, fio.crossing_from_doc, cdoc, inputs.overrides)

    if kind == "ybe":
        return check_ybe_braided(operator(), grid, tol)
    if kind == "ybe-r":
        return check_ybe_r_form(operator(), grid, tol)
    if kind == "unitarity":
        return check_unitarity(operator(), grid, tol)
    if kind == "crossing":
        op = operator()
        return _wrap(args.input, check_crossing, op, crossing(), grid, tol)
    if kind == "second-inversion":
        op = operator()
        return _wrap(args.input, check_second_inversion, op, crossing(), grid, tol)
    if kind == "cpt":
        op = operator()
        d = op.local_dim
        if args.bar:
            bar = _int_list(args.bar, "--bar")
        elif args.crossing:
            bar = list(crossing().bar)
        else:
            bar = [d - 1 - s for s in range(d)]
        if sorted(bar) != list(range(d)):
            raise InputError(f"--bar {bar} is not a permutation of 0..{d - 1}")
        return check_cpt(op, bar, grid, tol)
    if kind == "charge":
        op = operator()
        charge = _int_list(args.charge, "--charge") if args.charge else None
        if charge is not None and len(charge) != op.local_dim:
            raise InputError(f"--charge needs {op.local_dim} values")
        return check_charge_conservation(op, charge, grid, tol)
    if kind == "transfer":
        return _wrap(args.input, check_transfer_commutation, operator(), args.chain, grid, tol,
                     args.backend)

    m = matrix()
    d = _wrap(args.input, linalg.local_dim_of, m)
    if kind == "braid":
        return _wrap(args.input, check_braid_relations, m, d, tol)
    if kind == "tl":
        params, report = _wrap(args.input, check_temperley_lieb, m, d, tol)
        return report
    if kind in ("bmw", "skein"):
        if args.e_file:
            edoc = inputs.read(args.e_file)
            g, e, extra = m, matrix(args.e_file, edoc), {}
        else:
            order = _list(args.ordering, consts, "ordering") if args.ordering else None
            norm = _wrap(args.input, bmw_normalize, m, order, tol)
            g, e = norm.G, norm.E
            extra = {"normalization": {"k": norm.k, "l": norm.l, "m": norm.m,
                                       "ordering": norm.report.details["ordering"],
                                       "cubic_residual": norm.report.max_residual}}
        if kind == "bmw":
            params, report = _wrap(args.input, check_bmw_prime, g, e, d, tol)
            report.details.update(extra)
            return report
        coeffs = _wrap(args.input, fit_skein_4cb, g, e)
        details = {"alpha": coeffs.alpha, "beta": coeffs.beta, "gamma": coeffs.gamma,
                   "delta4": coeffs.delta4, "unique": coeffs.unique, **extra}
        notes = [] if coeffs.unique else ["{I, E, G, G^-1} are linearly dependent; "
                                          "minimum-norm coefficients reported"]
        return CheckReport("skein", tol, coeffs.residual, coeffs.residual <= tol,
                           [(None, None, coeffs.residual)], notes, details)
    raise InputError(f"unknown check {kind!r}")


# -- baxterize -----------------------------------------------------------------

def _poly_entries(coeff_mats, ytext):
    """Entries of ``sum_p M_p y^p`` as expression strings in ``y``."""
    n = coeff_mats[0].shape[0]
    scale = max(1.0, max(float(np.abs(m).max()) for m in coeff_mats))
    out = []
    for r in range(n):
        for c in range(n):
            out.append(fio.polynomial_expression([m[r, c] for m in coeff_mats], ytext,
                                                 tol=1e-14 * scale))
    return out


def _tl_entries(e, coef, ytext):
    n = e.shape[0]
    scale = max(1.0, float(np.abs(e).max()) * abs(coef))
    out = []
    for r in range(n):
        for c in range(n):
            a = 1.0 if r == c else 0.0
            b = e[r, c] * coef
            terms = []
            if a:
                terms.append("1")
            if abs(b) > 1e-14 * scale:
                terms.append(f"{fio.format_number(b)}*{ytext}/(1 - {ytext})")
            out.append(" + ".join(terms) if terms else "0")
    return out


def _select_tl_generator(m, d, args, consts, tol, notes):
    kind = args.input_kind
    if kind == "auto":
        try:
            _, rep = check_temperley_lieb(m, d, tol)
            kind = "tl" if rep.passed else "bgr"
        except BaxterError:
            kind = "bgr"
        notes.append(f"input treated as {'a TL generator' if kind == 'tl' else 'a BGR'}")
    if kind == "tl":
        params, rep = check_temperley_lieb(m, d, tol)
        if not rep.passed:
            notes.append(f"input fails the TL relations (residual {rep.max_residual:.2e})")
        return m, params.delta, {"input_kind": "tl"}
    pf = linalg.spectral_projectors(m)
    if args.ordering:
        pf = pf.reordered(_list(args.ordering, consts, "ordering"))
    e0 = pf.projectors[-1]
    e, c = normalize_tl_generator(e0, d, args.tl_sign)
    params, rep = check_temperley_lieb(e, d, tol)
    notes.append(f"E = c * P(lambda = {fio.format_number(pf.eigenvalues[-1], 1e-12)}) "
                 f"with c = {fio.format_number(c, 1e-12)}")
    if not rep.passed:
        notes.append(f"normalized projector fails the TL relations (residual {rep.max_residual:.2e})")
    return e, params.delta, {"input_kind": "bgr", "eigenvalues": pf.eigenvalues, "scale": c}


def run_baxterize(args, inputs):
    doc = inputs.read(args.input)
    consts = inputs.constants(doc)
    tol = tolerance(args)
    grid = grid_of(args, consts)
    at = None if args.at is None else _value(args.at, consts, "--at")
    m = _wrap(args.input, fio.matrix_from_any, doc, inputs.overrides, at)
    d = _wrap(args.input, linalg.local_dim_of, m)
    ytext = args.y or ("1-u" if args.method != "two-block-tl" else None)
    if ytext is None:
        raise InputError("two-block-tl needs --y (an odd function with y(0) = 0, e.g. u/k)")
    try:
        ynode = exprfn.parse(ytext)
    except BaxterError as exc:
        raise InputError(f"--y: {exc}") from None
    missing = sorted(exprfn.identifiers(ynode) - set(consts) - {"u"})
    if missing:
        raise InputError(f"--y uses unbound identifier {missing[0]!r}; bind it with --{missing[0]} VALUE")
    ysrc = exprfn.to_source(ynode)
    yconsts = {k: consts[k] for k in sorted(exprfn.identifiers(ynode) - {"u"})}
    notes, details = [], {"method": args.method, "y": ytext}
    u0 = None if args.u0 is None else _value(args.u0, consts, "--u0")
    try:
        if args.method == "two-block-tl":
            y = YFunction.from_expression(ytext, yconsts, "additive")
            e, delta, info = _select_tl_generator(m, d, args, consts, tol, notes)
            recipe = baxterize_two_blocks_tl(e, delta, y)
            coef = 2 / complex(delta)
            entries = _tl_entries(e, coef, ysrc)
            poles = [fio.format_number(p, 1e-12) for p in recipe.output.poles]
            details.update(info, delta=delta, poles=recipe.output.poles)
        else:
            y = YFunction.from_expression(ytext, yconsts, "profile", u0)
            order = _list(args.ordering, consts, "ordering") if args.ordering else None
            if args.method == "two-block":
                recipe = baxterize_two_blocks(m, y, order)
                l1, l2 = recipe.ordering
                mats = [m, l1 * l2 * np.linalg.inv(m)]
            else:
                recipe = baxterize_three_blocks(m, y, order)
                l1, l2, l3 = recipe.ordering
                binv = np.linalg.inv(m)
                mcoef = (l1 + l2) * (l2 + l3) / l2
                eye = linalg.identity(m.shape[0])
                mats = [m, -m + mcoef * eye - l1 * l3 * binv, l1 * l3 * binv]
            entries = _poly_entries(mats, ysrc)
            poles = []
            notes.extend(recipe.notes)
            details.update(ordering=recipe.ordering, u0=y.u0)
    except (ValueError, ArithmeticError) as exc:
        if isinstance(exc, PoleClash):
            raise
        raise InputError(f"{args.method}: {exc}") from None

    emitted = fio.spectral_document(entries, d, yconsts, poles, label=f"baxterize {args.method}",
                                    provenance=_provenance(args, ytext))
    # the emitted text must describe the same operator that was checked
    reloaded = fio.spectral_from_doc(emitted)
    for u in (0.3, -0.7, 1.1):
        try:
            r = linalg.residual(reloaded.at(u), recipe.output.at(u))
        except (PoleClash, exprfn.DivisionNearZero):
            continue
        if r > 1e-9:
            raise RuntimeError(f"emitted entries disagree with the recipe at u={u} ({r:.2e})")
    report = check_ybe_braided(recipe.output, grid, tol)
    report.notes[:0] = notes
    report.details.update(details)
    return report, emitted


def _provenance(args, ytext):
    parts = ["baxter baxterize", args.method, os.path.basename(args.input), "--y", ytext]
    if args.ordering:
        parts += ["--ordering", args.ordering]
    return " ".join(parts)


# -- main ----------------------------------------------------------------------

def _summary(report):
    lines = [report.summary()]
    for key in sorted(report.details):
        val = report.details[key]
        if isinstance(val, (int, float, complex, str, bool, np.number)) and not isinstance(val, bool):
            shown = _fmt_complex(val) if isinstance(val, (complex, np.complexfloating)) else val
            lines.append(f"  {key} = {shown}")
    lines.extend(f"  note: {n}" for n in report.notes)
    return "\n".join(lines) + "\n"


def _flags(args):
    skip = {"out", "json", "emit", "input", "e_file", "crossing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        rest, overrides = split_overrides(argv, parser)
    except InputError as exc:
        print(f"baxter: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    args = parser.parse_args(rest)
    try:
        inputs = Inputs(overrides)
        emitted = None
        if args.command == "check":
            report = run_check(args, inputs)
        else:
            report, emitted = run_baxterize(args, inputs)
        doc = fio.report_document(report, inputs.digest(_flags(args)))
    except PoleClash as exc:
        sample = getattr(exc, "sample", None)
        print(f"baxter: pole clash at sample {sample}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, BaxterError) as exc:
        print(f"baxter: error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    text = fio.dumps(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    summary_stream = sys.stdout
    if emitted is not None:
        etext = fio.dumps(emitted)
        if args.emit:
            with open(args.emit, "w") as fh:
                fh.write(etext)
        else:
            sys.stdout.write(etext)
            summary_stream = sys.stderr
    summary_stream.write(text if args.json else _summary(report))

    if args.command == "check":
        return EXIT_PASS if report.passed else EXIT_FAIL
    return EXIT_FAIL if args.strict and not report.passed else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
