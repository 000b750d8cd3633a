"""Spectral-parameter dependent solutions built from braid group representations.

Two conventions for the scalar function ``y`` are kept apart on purpose:

``profile``
    used inside the eigenvalue profiles ``Lambda_i(u)``; ``y(u0) = 0`` at the
    braid limit ``u0`` and ``y(0) = 1`` at the initial point.
``additive``
    used by the Temperley-Lieb route ``Rc = I + f(u) E``; ``y`` is odd with
    ``y(0) = 0``.
"""

import cmath
import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import expr as exprfn
from . import linalg
from .algebra import check_braid_relations, check_temperley_lieb
from .errors import (InfinityWithoutScale, LengthMismatch, PoleAtLimit, Singular,
                     WrongBlockCount, ZeroDelta, ZeroEigenvalue, ZeroLeadingEigenvalue,
                     ZeroM, ZeroMiddleEigenvalue)
from .rmatrix import (DEFAULT_GRID, DEFAULT_TOL, CheckReport, SpectralOperator,
                      check_ybe_braided, finish_report)


class _Infinity:
    """Marker for the braid limit ``u -> infinity``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "AT_INFINITY"


AT_INFINITY = _Infinity()

_CONVENTION_SAMPLES = (0.3, 0.45, 0.9, 1.7)


@dataclass(frozen=True)
class YFunction:
    """Scalar function of the spectral parameter with a declared convention."""

    func: object
    convention: str = "profile"
    u0: object = None
    label: str = ""
    expression: object = None
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.convention not in ("profile", "additive"):
            raise ValueError(f"unknown y convention {self.convention!r}")
        if self.convention == "profile":
            if abs(self(0) - 1) > 1e-9:
                raise ValueError(f"profile y must satisfy y(0) = 1, got {self(0)}")
            if self.u0 is not None and self.u0 is not AT_INFINITY and abs(self(self.u0)) > 1e-9:
                raise ValueError(f"profile y must vanish at u0={self.u0}, got {self(self.u0)}")
        else:
            if abs(self(0)) > 1e-9:
                raise ValueError(f"additive y must satisfy y(0) = 0, got {self(0)}")
            for u in _CONVENTION_SAMPLES:
                if abs(self(-u) + self(u)) > 1e-9 * max(1.0, abs(self(u))):
                    raise ValueError(f"additive y must be odd; y({-u}) != -y({u})")

    def __call__(self, u):
        return complex(self.func(complex(u)))

    @classmethod
    def from_expression(cls, text, constants=None, convention="profile", u0=None):
        constants = dict(constants or {})
        f = exprfn.compile_expr(text, constants)
        if convention == "profile" and u0 is None:
            u0 = find_root(f)
        return cls(f, convention, u0, text, f.node, constants)

    @classmethod
    def linear(cls, k):
        """Additive ``y = u / k``."""
        return cls.from_expression("u/k", {"k": complex(k)}, "additive")

    @classmethod
    def affine(cls):
        """Profile ``y = 1 - u`` with braid limit at ``u0 = 1``."""
        return cls.from_expression("1-u", {}, "profile", u0=1.0)

    def solve(self, value, seeds=(1.0, -1.0, 2.0, 0.5, 1j)):
        return find_root(lambda u: self(u) - value, seeds)


def find_root(f, seeds=(1.0, -1.0, 2.0, 0.5, 1j), tol=1e-12, maxiter=60):
    """Secant search from several seeds; ``None`` when nothing converges."""
    for seed in seeds:
        a, b = complex(seed), complex(seed) * 1.01 + 0.01
        try:
            fa, fb = f(a), f(b)
            for _ in range(maxiter):
                if abs(fb) <= tol:
                    return b
                if fb == fa:
                    break
                a, b, fa = b, b - fb * (b - a) / (fb - fa), fb
                fb = f(b)
        except (ArithmeticError, ValueError, OverflowError):
            continue
    return None


def _as_y(y, convention):
    if isinstance(y, YFunction):
        if y.convention != convention:
            raise ValueError(f"expected a {convention}-convention y, got {y.convention}")
        return y
    return YFunction(y, convention)


@dataclass(frozen=True)
class BaxterizationRecipe:
    source: np.ndarray
    ordering: tuple
    y: YFunction
    method: str
    output: SpectralOperator
    notes: tuple = ()

    def __post_init__(self):
        u0 = self.y.u0
        if self.method == "two_block_tl" or u0 is None or u0 is AT_INFINITY:
            return
        r = linalg.residual(self.output.at(u0), self.source)
        if r > 1e-8:
            raise ArithmeticError(f"recipe does not reproduce its source at u0={u0} (residual {r:.2e})")


@dataclass(frozen=True)
class TLExtraction:
    E: np.ndarray
    xi: complex
    delta: complex
    leading: complex


def _spectrum(b, n=None, ordering=None):
    b = linalg.as_cmatrix(b)
    pf = linalg.spectral_projectors(b)
    if n is not None and len(pf) != n:
        raise WrongBlockCount(n, pf.eigenvalues)
    if ordering is not None:
        pf = pf.reordered(ordering)
    return b, pf


def check_reduction_relation(b, tol=DEFAULT_TOL):
    """``prod_i (B - lam_i I) = 0`` over the distinct eigenvalues of ``b``."""
    b = linalg.as_cmatrix(b)
    lams = linalg.distinct_eigenvalues(b)
    r = linalg.residual(linalg.minimal_polynomial_residual(b, lams), 0 * b)
    return finish_report("reduction", tol, [(None, None, r)],
                         details={"block_number": len(lams), "eigenvalues": lams})


def lambda_values(eigs, yval):
    """``Lambda_i`` for ordered eigenvalues ``eigs`` at ``y = yval``."""
    eigs = [complex(x) for x in eigs]
    n = len(eigs)
    if any(abs(x) == 0 for x in eigs):
        raise ZeroEigenvalue("eigenvalue profile needs nonzero eigenvalues")
    ratio = [eigs[j] / eigs[j + 1] for j in range(n - 1)]
    out = []
    for i in range(n):
        val = eigs[-1]
        for j in range(i):
            val *= ratio[j] * yval + 1
        for k in range(i, n - 1):
            val *= yval + ratio[k]
        out.append(val)
    return out


def lambda_profile(eigs, y):
    """Scalar functions ``Lambda_i(u)`` built from one ``y`` (profile convention)."""
    y = _as_y(y, "profile")
    lambda_values(eigs, 0.0)  # validates the eigenvalues once
    return tuple((lambda u, i=i: lambda_values(eigs, y(u))[i]) for i in range(len(eigs)))


def assemble_from_projectors(pf, lambdas, poles=(), label="sum Lambda_i P_i"):
    """``Rc(u) = sum_i Lambda_i(u) P_i``."""
    if len(lambdas) != len(pf):
        raise LengthMismatch(f"{len(lambdas)} profile functions for {len(pf)} projectors")
    d = linalg.local_dim_of(pf.projectors[0])
    projectors = pf.projectors

    def at(u):
        return sum(f(u) * p for f, p in zip(lambdas, projectors))

    return SpectralOperator(at, d, poles, label)


def projector_profile(b, y, ordering=None):
    """Basic prescription ``Rc = sum Lambda_i P_i`` for any block number."""
    y = _as_y(y, "profile")
    b, pf = _spectrum(b, ordering=ordering)
    op = assemble_from_projectors(pf, lambda_profile(pf.eigenvalues, y))
    return BaxterizationRecipe(b, pf.eigenvalues, y, "projector_profile", op)


def baxterize_two_blocks(b, y, ordering=None):
    """``Rc(u) = B + lam1 lam2 y(u) B^-1`` for a BGR with two eigenvalues."""
    y = _as_y(y, "profile")
    b, pf = _spectrum(b, 2, ordering)
    if not linalg.invertible(b):
        raise Singular("BGR must be invertible")
    l1, l2 = pf.eigenvalues
    binv = np.linalg.inv(b)
    d = linalg.local_dim_of(b)
    notes = []
    if abs(l1 + l2) < 1e-12:
        msg = "lam1 + lam2 = 0: Rc(0) = 0, the initial-condition constant degenerates"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)
    op = SpectralOperator(lambda u: b + l1 * l2 * y(u) * binv, d, label="B + l1 l2 y B^-1")
    profile = assemble_from_projectors(pf, lambda_profile(pf.eigenvalues, y))
    for u in (0.3, -0.7, 1.1):
        r = linalg.residual(op.at(u), profile.at(u))
        if r > 1e-8:
            raise ArithmeticError(f"inverse form and projector form differ at u={u} ({r:.2e})")
    return BaxterizationRecipe(b, pf.eigenvalues, y, "two_block_inverse", op, tuple(notes))


def tl_generator_from_bgr(b, ordering=None):
    """``B = lam1 (I + xi E)`` with ``E = P_2`` and ``xi = lam2/lam1 - 1``."""
    b, pf = _spectrum(b, 2, ordering)
    l1, l2 = pf.eigenvalues
    if abs(l1) < 1e-14:
        raise ZeroLeadingEigenvalue("leading eigenvalue is zero")
    e = pf.projectors[1]
    d = linalg.local_dim_of(b)
    params, _ = check_temperley_lieb(e, d)
    return TLExtraction(e, l2 / l1 - 1, params.delta, l1)


def f_from_y(delta, y):
    """``f(u) = (2/delta) y(u) / (1 - y(u))`` for additive ``y``."""
    if abs(delta) < 1e-14:
        raise ZeroDelta("loop parameter delta must be nonzero")
    y = _as_y(y, "additive")
    delta = complex(delta)

    def f(u):
        yu = y(u)
        if abs(1 - yu) < exprfn.DIVISION_THRESHOLD:
            raise exprfn.DivisionNearZero((0, 0), 1 - yu)
        return 2 / delta * yu / (1 - yu)

    return f


def baxterize_two_blocks_tl(e, delta, y, label="I + f E"):
    """Temperley-Lieb route ``Rc(u) = I + f(u) E`` with ``f = f_from_y(delta, y)``."""
    e = linalg.as_cmatrix(e)
    d = linalg.local_dim_of(e)
    y = _as_y(y, "additive")
    f = f_from_y(delta, y)
    eye = linalg.identity(d * d)
    pole = y.solve(1.0)
    poles = () if pole is None else (pole,)
    op = SpectralOperator(lambda u: eye + f(u) * e, d, poles, label)
    return BaxterizationRecipe(e, (), y, "two_block_tl", op)


def y_functional_residual(y, delta, u, v):
    """``y(u) + y(v) - y(u+v) [1 + (1 - 4/delta^2) y(u) y(v)]`` (relative)."""
    a, b, c = y(u), y(v), y(u + v)
    kappa = 1 - 4 / complex(delta) ** 2
    val = a + b - c * (1 + kappa * a * b)
    return abs(val) / max(1.0, abs(a), abs(b), abs(c), abs(c * kappa * a * b))


def f_equation_residual(f, delta, u, v):
    """YBE condition on ``f``: ``f(u)+f(v)+delta f(u)f(v)+f(u)f(u+v)f(v)-f(u+v)``."""
    a, b, c = f(u), f(v), f(u + v)
    terms = (a, b, delta * a * b, a * c * b, c)
    return abs(a + b + delta * a * b + a * c * b - c) / max(1.0, *(abs(t) for t in terms))


def f_unitarity_residual(f, delta, u):
    """``f(u) + f(-u) + delta f(u) f(-u)`` (relative)."""
    a, b = f(u), f(-u)
    return abs(a + b + delta * a * b) / max(1.0, abs(a), abs(b), abs(delta * a * b))


def check_y_functional(y, delta, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """Functional equation for additive ``y`` plus the unitarity constraint on ``f``.

    The ``f``-level YBE condition is evaluated alongside as an independent
    cross-check (``details['f_equation_max']``).
    """
    y = _as_y(y, "additive")
    delta = complex(delta)
    f = f_from_y(delta, y)
    notes, samples, f_eq, unit = [], [], [], []
    for u in grid.u_values:
        for v in grid.v_values:
            try:
                samples.append((complex(u), complex(v), y_functional_residual(y, delta, u, v)))
                f_eq.append(f_equation_residual(f, delta, u, v))
            except ArithmeticError as exc:
                notes.append(f"skipped ({u}, {v}): {exc}")
    for u in grid.u_values:
        try:
            unit.append(f_unitarity_residual(f, delta, u))
        except ArithmeticError as exc:
            notes.append(f"skipped unitarity at {u}: {exc}")
    residuals = [s[2] for s in samples] + unit
    details = {"y_equation_max": max((s[2] for s in samples), default=None),
               "f_equation_max": max(f_eq, default=None),
               "f_unitarity_max": max(unit, default=None)}
    return finish_report("y-functional", tol, samples, notes, details, residuals)


def baxterize_three_blocks(b, y, ordering=None):
    """``Rc(u) = L(u) B + M(u) I + N(u) B^-1`` for a BGR with three eigenvalues.

    ``L = 1 - y``, ``M = (l1 + l2)(l2 + l3) y / l2``, ``N = l1 l3 y (y - 1)``
    for the ordering ``(l1, l2, l3)``.
    """
    y = _as_y(y, "profile")
    b, pf = _spectrum(b, 3, ordering)
    l1, l2, l3 = pf.eigenvalues
    if abs(l2) < 1e-14:
        raise ZeroMiddleEigenvalue("middle eigenvalue of the ordering is zero")
    if not linalg.invertible(b):
        raise Singular("BGR must be invertible")
    binv = np.linalg.inv(b)
    eye = linalg.identity(b.shape[0])
    mcoef = (l1 + l2) * (l2 + l3) / l2
    d = linalg.local_dim_of(b)

    def at(u):
        yu = y(u)
        return (1 - yu) * b + mcoef * yu * eye + l1 * l3 * yu * (yu - 1) * binv

    op = SpectralOperator(at, d, label=f"LMN{tuple(pf.eigenvalues)}")
    return BaxterizationRecipe(b, pf.eigenvalues, y, "three_block_lmn", op)


def enumerate_orderings(b, y, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """Three-block recipe for every ordering, each with its measured YBE report."""
    _, pf = _spectrum(b, 3)
    out = []
    for perm in itertools.permutations(pf.eigenvalues):
        recipe = baxterize_three_blocks(b, y, perm)
        out.append((recipe, check_ybe_braided(recipe.output, grid, tol)))
    return out


@dataclass(frozen=True)
class BMWNormalization:
    G: np.ndarray
    E: np.ndarray
    k: complex
    l: complex
    m: complex
    report: CheckReport


def bmw_normalize(b, ordering=None, tol=DEFAULT_TOL):
    """``B = k G`` with ``k^2 = l1 l2``, ``l = k / l3``, ``m = (l1 + l2) / k``.

    ``E = (G + G^-1)/m - I``. The report measures the cubic relation
    ``G^2 = (m + 1/l) G - (m/l + 1) I + G^-1 / l``.
    """
    b, pf = _spectrum(b, 3, ordering)
    l1, l2, l3 = pf.eigenvalues
    notes = []
    prod = l1 * l2
    if prod.imag == 0 and prod.real < 0:
        notes.append(f"l1*l2 = {prod.real:g} is on the negative real axis; principal root taken")
    k = cmath.sqrt(prod)
    if abs(k) < 1e-14:
        raise ZeroEigenvalue("l1 * l2 = 0; no normalization B = kG")
    m = (l1 + l2) / k
    if abs(m) < 1e-12:
        raise ZeroM(f"m = (l1 + l2)/k vanishes for ordering {tuple(pf.eigenvalues)}")
    l = k / l3
    g = b / k
    gi = np.linalg.inv(g)
    eye = linalg.identity(b.shape[0])
    e = (g + gi) / m - eye
    rhs = (m + 1 / l) * g - (m / l + 1) * eye + gi / l
    report = finish_report("bmw-normalize", tol, [(None, None, linalg.residual(g @ g, rhs))],
                           notes, {"k": k, "l": l, "m": m, "ordering": pf.eigenvalues})
    return BMWNormalization(g, e, k, l, m, report)


def bgr_from_spectral(op, u0, scale=None, tol=DEFAULT_TOL):
    """Braid limit ``B = Rc(u0)`` (times ``scale(u0)`` if given) and its braid check.

    For ``u0 = AT_INFINITY`` no limit is taken numerically: ``scale`` must map
    ``w`` to the normalized operator at ``u = 1/w`` and is evaluated at 0.
    """
    op = op.braided()
    if u0 is AT_INFINITY:
        if scale is None:
            raise InfinityWithoutScale("the infinite braid limit needs a caller-supplied scale")
        b = linalg.as_cmatrix(scale(0.0), op.local_dim ** 2)
    else:
        if op.near_pole(u0):
            raise PoleAtLimit(f"u0={u0} is a pole", sample=u0)
        b = op.at(u0)
        if scale is not None:
            b = complex(scale(u0)) * b
    return b, check_braid_relations(b, op.local_dim, tol)
