"""Spectral operators, vertex weights and Yang-Baxter checks.

A :class:`SpectralOperator` is a map ``u -> matrix on V (x) V``. By default it
represents the braided form ``Rc(u) = P R(u)``; ``form="r"`` marks the plain
``R(u)``.

Vertex weights use one frozen index convention::

    S^{ik}_{jl}(u) = Rc(u)[l*d + k, i*d + j]

i.e. ``Rc = sum S^{km}_{lp} E_{pk} (x) E_{ml}``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimMismatch, DivisionNearZero, MissingSample, PoleAtZero, PoleClash

DEFAULT_TOL = 1e-9
DEFAULT_SAMPLES = (-0.9, -0.45, 0.0, 0.45, 0.9)
POLE_TOL = 1e-9


class SpectralOperator:
    """Evaluation contract ``u -> CMatrix`` of dimension ``local_dim**2``."""

    def __init__(self, func, local_dim, poles=(), label="", form="braided"):
        if form not in ("braided", "r"):
            raise ValueError(f"form must be 'braided' or 'r', not {form!r}")
        self._func = func
        self.local_dim = int(local_dim)
        self.poles = tuple(complex(p) for p in poles)
        self.label = label
        self.form = form

    def __repr__(self):
        return f"SpectralOperator({self.label or '?'}, d={self.local_dim}, form={self.form})"

    def near_pole(self, u, margin=POLE_TOL):
        u = complex(u)
        return any(abs(u - p) <= margin for p in self.poles)

    def at(self, u):
        u = complex(u)
        if self.near_pole(u):
            raise PoleClash(f"{self.label or 'operator'} evaluated at declared pole u={u}", sample=u)
        m = np.asarray(self._func(u), dtype=np.complex128)
        n = self.local_dim ** 2
        if m.shape != (n, n):
            raise DimMismatch(f"operator returned shape {m.shape}, expected {(n, n)}")
        if not np.all(np.isfinite(m)):
            raise PoleClash(f"non-finite entries at u={u}", sample=u)
        return m

    __call__ = at

    @classmethod
    def constant(cls, matrix, label="constant", form="braided"):
        m = linalg.as_cmatrix(matrix)
        d = linalg.local_dim_of(m)
        return cls(lambda u: m, d, label=label, form=form)

    def scaled(self, factor, label=None, zeros=()):
        """``N(u) * self``; ``zeros`` of ``N`` are added to the pole list."""
        return SpectralOperator(lambda u: factor(u) * self._func(u), self.local_dim,
                                self.poles + tuple(zeros), label or f"N*{self.label}", self.form)

    def braided(self):
        """The braided form; ``P R`` for an R-form operator, else ``self``."""
        if self.form == "braided":
            return self
        p = linalg.permutation_operator(self.local_dim)
        return SpectralOperator(lambda u: p @ self._func(u), self.local_dim, self.poles,
                                f"P*{self.label}", "braided")

    def r_form(self):
        if self.form == "r":
            return self
        p = linalg.permutation_operator(self.local_dim)
        return SpectralOperator(lambda u: p @ self._func(u), self.local_dim, self.poles,
                                f"P*{self.label}", "r")


def operator_to_weights(m, d):
    """4-index array ``W[i, k, j, l] = S^{ik}_{jl}`` from a braided matrix."""
    return np.asarray(m).reshape(d, d, d, d).transpose(2, 1, 3, 0)


def weights_to_operator(w):
    d = w.shape[0]
    return np.ascontiguousarray(w.transpose(3, 1, 0, 2)).reshape(d * d, d * d)


class VertexWeights:
    """Indexed view ``S(i, k, j, l, u)`` of a spectral operator."""

    def __init__(self, op):
        self.operator = op.braided()
        self.local_dim = op.local_dim

    def tensor(self, u):
        return operator_to_weights(self.operator.at(u), self.local_dim)

    def S(self, i, k, j, l, u):
        d = self.local_dim
        return complex(self.operator.at(u)[l * d + k, i * d + j])


@dataclass
class CheckReport:
    check_name: str
    tolerance: float
    max_residual: float
    passed: bool
    samples: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def summary(self):
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{self.check_name}: {verdict} max_residual={self.max_residual:.3e} "
                f"tol={self.tolerance:.1e} samples={len(self.samples)}")


def finish_report(name, tol, samples, notes=(), details=None, residuals=None):
    """Build a report from ``(u, v, residual)`` samples.

    ``residuals`` overrides the sample residuals as the figures that decide
    the verdict. A report with no samples never passes.
    """
    notes = list(notes)
    values = [s[2] for s in samples] if residuals is None else list(residuals)
    worst = max(values) if values else float("inf")
    passed = bool(values) and worst <= tol
    if not samples:
        notes.append("no admissible samples; nothing was checked")
        passed = False
    return CheckReport(name, tol, float(worst), passed, list(samples), notes, dict(details or {}))


@dataclass(frozen=True)
class SampleGrid:
    """Sample points for spectral checks.

    With ``strict`` false, pairs touching a pole are skipped and noted; with
    ``strict`` true they raise :class:`PoleClash`.
    """

    u_values: tuple = DEFAULT_SAMPLES
    v_values: tuple = DEFAULT_SAMPLES
    pole_margin: float = 1e-6
    strict: bool = False

    @classmethod
    def from_values(cls, values, strict=True, pole_margin=1e-6):
        values = tuple(complex(x) for x in values)
        return cls(values, values, pole_margin, strict)

    def admit(self, op, points, sample, notes):
        """True if every point in ``points`` clears the poles of ``op``."""
        bad = [p for p in points if op.near_pole(p, self.pole_margin)]
        if not bad:
            return True
        msg = f"sample {_fmt_sample(sample)} within {self.pole_margin:g} of a pole (at {bad[0]})"
        if self.strict:
            raise PoleClash(msg, sample=sample)
        notes.append("skipped " + msg)
        return False

    def singles(self, op, shifts=(lambda u: u,), notes=None):
        notes = [] if notes is None else notes
        for u in self.u_values:
            if self.admit(op, [s(u) for s in shifts], (u,), notes):
                yield complex(u)

    def pairs(self, op, notes=None):
        notes = [] if notes is None else notes
        for u in self.u_values:
            for v in self.v_values:
                if self.admit(op, [u, v, u + v], (u, v), notes):
                    yield complex(u), complex(v)


DEFAULT_GRID = SampleGrid()


def _fmt_sample(sample):
    return "(" + ", ".join(f"{complex(x):.6g}" for x in sample) + ")"


def guarded(grid, notes, sample, fn):
    """Run ``fn``; undeclared poles hit during evaluation follow grid policy.

    Points absent from a sampled operator are always skipped with a note.
    """
    try:
        return fn()
    except MissingSample as exc:
        notes.append(f"skipped sample {_fmt_sample(sample)}: {exc}")
        return None
    except (DivisionNearZero, PoleClash) as exc:
        if grid.strict:
            if isinstance(exc, PoleClash):
                raise
            raise PoleClash(f"sample {_fmt_sample(sample)}: {exc}", sample=sample) from exc
        notes.append(f"skipped sample {_fmt_sample(sample)}: {exc}")
        return None


def ybe_braided_residual(op, u, v):
    d = op.local_dim
    a, b, c = op.at(u), op.at(u + v), op.at(v)
    r1 = lambda m: linalg.embed_pair(m, 1, 3, d)
    r2 = lambda m: linalg.embed_pair(m, 2, 3, d)
    lhs = r1(a) @ r2(b) @ r1(c)
    rhs = r2(c) @ r1(b) @ r2(a)
    return linalg.residual(lhs, rhs)


def ybe_r_form_residual(op, u, v):
    """``R12(u) R13(u+v) R23(v) - R23(v) R13(u+v) R12(u)`` on three sites."""
    d = op.local_dim
    p12 = linalg.embed_pair(linalg.permutation_operator(d), 1, 3, d)
    r12 = lambda m: linalg.embed_pair(m, 1, 3, d)
    r23 = lambda m: linalg.embed_pair(m, 2, 3, d)
    r13 = lambda m: p12 @ r23(m) @ p12
    a, b, c = op.at(u), op.at(u + v), op.at(v)
    lhs = r12(a) @ r13(b) @ r23(c)
    rhs = r23(c) @ r13(b) @ r12(a)
    return linalg.residual(lhs, rhs)


def check_ybe_braided(op, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """Braided YBE ``R1(u) R2(u+v) R1(v) = R2(v) R1(u+v) R2(u)`` on 3 sites."""
    op = op.braided()
    notes, samples = [], []
    for u, v in grid.pairs(op, notes):
        r = guarded(grid, notes, (u, v), lambda: ybe_braided_residual(op, u, v))
        if r is not None:
            samples.append((u, v, r))
    return finish_report("ybe", tol, samples, notes)


def check_ybe_r_form(op, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """YBE for ``R(u)`` (``R13`` by conjugating ``R23`` with ``P12``).

    Also runs the braided check on ``P R``; both routes must agree.
    """
    r_op = op.r_form()
    notes, samples, braided = [], [], []
    for u, v in grid.pairs(r_op, notes):
        direct = guarded(grid, notes, (u, v), lambda: ybe_r_form_residual(r_op, u, v))
        if direct is None:
            continue
        via = ybe_braided_residual(r_op.braided(), u, v)
        samples.append((u, v, direct))
        braided.append(via)
    d_pass = bool(samples) and max(s[2] for s in samples) <= tol
    b_pass = bool(braided) and max(braided) <= tol
    if d_pass != b_pass:
        notes.append("R-form and braided routes disagree on the verdict")
    details = {"braided_route_max_residual": max(braided) if braided else None}
    residuals = [max(s[2], b) for s, b in zip(samples, braided)]
    return finish_report("ybe-r", tol, samples, notes, details, residuals)


def check_far_commutation(op, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """``[R1(u), R3(v)] = 0`` on a 4-site chain."""
    op = op.braided()
    d = op.local_dim
    notes, samples = [], []
    for u, v in grid.pairs(op, notes):
        def res():
            a = linalg.embed_pair(op.at(u), 1, 4, d)
            b = linalg.embed_pair(op.at(v), 3, 4, d)
            return linalg.residual(a @ b, b @ a)
        r = guarded(grid, notes, (u, v), res)
        if r is not None:
            samples.append((u, v, r))
    return finish_report("far-commutation", tol, samples, notes)


def initial_condition_operator(op, tol=DEFAULT_TOL):
    """Constant ``C`` with ``Rc(0) = C I`` (or ``c`` with ``R(0) = c P``)."""
    if op.near_pole(0):
        raise PoleAtZero("u = 0 is a pole", sample=0j)
    d = op.local_dim
    n = d * d
    m = op.at(0)
    if op.form == "braided":
        target = linalg.identity(n)
    else:
        target = linalg.permutation_operator(d)
    c = complex(np.trace(target.conj().T @ m) / n)
    r = linalg.residual(m, c * target)
    report = finish_report("initial-condition", tol, [(0j, None, r)], details={"C": c})
    return c, report
