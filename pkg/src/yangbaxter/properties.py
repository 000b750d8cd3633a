"""Unitarity, crossing, second inversion, CPT and charge-conservation checks.

All checks act on vertex weights ``W[i, k, j, l] = S^{ik}_{jl}(u)`` of the
braided operator (see :mod:`yangbaxter.rmatrix`).
"""

import cmath
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import BadMultipliers, DivisionNearZero
from .rmatrix import (DEFAULT_GRID, DEFAULT_TOL, CheckReport, finish_report, guarded,
                      operator_to_weights)


@dataclass(frozen=True)
class CrossingData:
    """Crossing parameter, multipliers ``r``, bar involution and ``F(u)``.

    ``multipliers[s]`` is ``r(s)``; ``bar[s]`` is the conjugate state.
    ``F`` defaults to the constant 1.
    """

    lam: complex
    multipliers: tuple
    bar: tuple
    F: object = None
    label: str = ""

    def __post_init__(self):
        n = len(self.bar)
        if len(self.multipliers) != n:
            raise BadMultipliers(f"{len(self.multipliers)} multipliers for {n} states")
        if sorted(self.bar) != list(range(n)) or any(self.bar[self.bar[s]] != s for s in range(n)):
            raise ValueError(f"bar map {list(self.bar)} is not an involution of 0..{n - 1}")
        r = [complex(x) for x in self.multipliers]
        if any(abs(x) == 0 for x in r):
            raise BadMultipliers("crossing multipliers must be nonzero")
        for s in range(n):
            if abs(r[self.bar[s]] * r[s] - 1) > 1e-9:
                raise BadMultipliers(f"r(bar({s})) * r({s}) = {r[self.bar[s]] * r[s]} != 1")
        object.__setattr__(self, "multipliers", tuple(r))
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "bar", tuple(int(b) for b in self.bar))

    def f(self, u):
        if self.F is None:
            return 1.0
        try:
            return complex(self.F(u))
        except ZeroDivisionError as exc:
            if isinstance(exc, DivisionNearZero):
                raise
            raise DivisionNearZero((0, 0), 0j) from exc


@dataclass
class UnitarityReport(CheckReport):
    scalars: list = field(default_factory=list)

    def scalar_at(self, u, tol=1e-12):
        for x, s in self.scalars:
            if abs(x - u) <= tol:
                return s
        raise KeyError(u)


def _weights(op, u):
    return operator_to_weights(op.at(u), op.local_dim)


def check_unitarity(op, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """``Rc(-u) Rc(u) = s(u) I`` with ``s(u) = rho(u) rho(-u)``.

    ``s(u)`` is read off as ``trace / d^2``; only the product is ever
    determined, never ``rho`` itself.
    """
    op = op.braided()
    n = op.local_dim ** 2
    eye = linalg.identity(n)
    notes, samples, scalars = [], [], []
    for u in grid.singles(op, (lambda x: x, lambda x: -x), notes):
        def res():
            m = op.at(-u) @ op.at(u)
            s = complex(np.trace(m) / n)
            return s, linalg.residual(m, s * eye)
        out = guarded(grid, notes, (u,), res)
        if out is None:
            continue
        s, r = out
        samples.append((u, None, r))
        scalars.append((u, s))
    # the product is even in u by construction; flag numerical drift
    lookup = dict(scalars)
    for u, s in scalars:
        if -u in lookup and abs(lookup[-u] - s) > tol * max(1.0, abs(s)):
            notes.append(f"s({u:.6g}) and s({-u:.6g}) differ by {abs(lookup[-u] - s):.2e}")
    base = finish_report("unitarity", tol, samples, notes)
    return UnitarityReport(**vars(base), scalars=scalars)


def _sqrt_multipliers(cd, notes):
    # principal root of each multiplier; the ratio root is their quotient
    for s, r in enumerate(cd.multipliers):
        if r.imag == 0 and r.real < 0:
            notes.append(f"multiplier r({s}) = {r.real:g} lies on the negative real axis; "
                         "principal square root used")
    return np.array([cmath.sqrt(r) for r in cd.multipliers])


def check_crossing(op, cd, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """``S^{ik}_{jl}(u) = [r(i)r(l)/(r(j)r(k))]^(1/2) F(u) S^{jl}_{k' i'}(lam - u)``.

    Primes denote the bar map. The square-root factor is evaluated as
    ``sqrt(r(i)) sqrt(r(l)) / (sqrt(r(j)) sqrt(r(k)))`` with principal roots.
    """
    op = op.braided()
    d = op.local_dim
    if len(cd.bar) != d:
        raise BadMultipliers(f"crossing data has {len(cd.bar)} states, operator has {d}")
    notes = []
    sr = _sqrt_multipliers(cd, notes)
    # fac[i, k, j, l]
    fac = np.einsum("i,k,j,l->ikjl", sr, 1 / sr, 1 / sr, sr)
    bar = np.array(cd.bar)
    samples = []
    for u in grid.singles(op, (lambda x: x, lambda x: cd.lam - x), notes):
        def res():
            w = _weights(op, u)
            wl = _weights(op, cd.lam - u)
            # rhs[i, k, j, l] = wl[j, l, bar k, bar i]
            core = wl[:, :, bar, :][:, :, :, bar].transpose(3, 2, 0, 1)
            rhs = fac * cd.f(u) * core
            return linalg.residual(w, rhs)
        r = guarded(grid, notes, (u,), res)
        if r is not None:
            samples.append((u, None, r))
    return finish_report("crossing", tol, samples, notes, {"lambda": cd.lam})


def second_inversion_tensor(op, cd, u):
    """``X[i, j, k, l] = sum_pq S^{kp}_{ql}(lam+u) S^{jq}_{pi}(lam-u) r(q)r(p)/(r(j)r(k))``."""
    r = np.array(cd.multipliers)
    a = _weights(op, cd.lam + u)
    b = _weights(op, cd.lam - u)
    x = np.einsum("kpql,jqpi,q,p->ijkl", a, b, r, r)
    return x / (r[None, :, None, None] * r[None, None, :, None])


def check_second_inversion(op, cd, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """Second inversion relation; the scalar is a least-squares fit.

    ``details`` carries the fitted scalars, the unitarity scalars at the same
    points and ``F(lam+u) F(lam-u)``; for crossing-symmetric weights the
    fitted scalar equals their product.
    """
    op = op.braided()
    d = op.local_dim
    if len(cd.bar) != d:
        raise BadMultipliers(f"crossing data has {len(cd.bar)} states, operator has {d}")
    eye = np.eye(d)
    pattern = np.einsum("ik,jl->ijkl", eye, eye)
    mask = pattern.astype(bool)
    notes, samples, scalars, unit, fprod = [], [], [], [], []
    shifts = (lambda x: cd.lam + x, lambda x: cd.lam - x)
    for u in grid.singles(op, shifts, notes):
        def res():
            x = second_inversion_tensor(op, cd, u)
            s = complex(np.mean(x[mask]))
            return s, linalg.residual(x, s * pattern)
        out = guarded(grid, notes, (u,), res)
        if out is None:
            continue
        s, r = out
        samples.append((u, None, r))
        scalars.append((u, s))
        try:
            m = op.at(-u) @ op.at(u)
            unit.append((u, complex(np.trace(m) / d ** 2)))
        except Exception as exc:
            notes.append(f"unitarity scalar unavailable at u={u:.6g}: {exc}")
        try:
            fprod.append((u, complex(cd.f(cd.lam + u) * cd.f(cd.lam - u))))
        except DivisionNearZero:
            notes.append(f"F(lam+u) F(lam-u) unavailable at u={u:.6g}: F has a pole there")
    details = {"scalars": scalars, "unitarity_scalars": unit, "F_product": fprod}
    return finish_report("second-inversion", tol, samples, notes, details)


def check_cpt(op, bar, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """C, P and T reflection symmetries of the weights.

    C: ``S^{ik}_{jl} = S^{i'k'}_{j'l'}``; P: ``= S^{jl}_{ik}``; T: ``= S^{ki}_{lj}``.
    """
    op = op.braided()
    bar = np.array(bar)
    notes, samples = [], []
    worst = {"C": 0.0, "P": 0.0, "T": 0.0}
    for u in grid.singles(op, notes=notes):
        def res():
            w = _weights(op, u)
            c = w[np.ix_(bar, bar, bar, bar)]
            p = w.transpose(2, 3, 0, 1)
            t = w.transpose(1, 0, 3, 2)
            return {"C": linalg.residual(w, c), "P": linalg.residual(w, p),
                    "T": linalg.residual(w, t)}
        out = guarded(grid, notes, (u,), res)
        if out is None:
            continue
        for key, r in out.items():
            worst[key] = max(worst[key], r)
        samples.append((u, None, max(out.values())))
    details = {"residual_" + k: v for k, v in worst.items()}
    details.update({"pass_" + k: v <= tol for k, v in worst.items()})
    return finish_report("cpt", tol, samples, notes, details)


def check_charge_conservation(op, charge=None, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """Largest ``|S^{ik}_{jl}|`` with ``q(i) + q(j) != q(k) + q(l)`` (absolute)."""
    op = op.braided()
    d = op.local_dim
    q = np.arange(d) if charge is None else np.array([charge[s] for s in range(d)])
    # forbidden[i, k, j, l]
    forbidden = (q[:, None, None, None] + q[None, None, :, None]
                 != q[None, :, None, None] + q[None, None, None, :])
    notes, samples = [], []
    for u in grid.singles(op, notes=notes):
        def res():
            w = _weights(op, u)
            return float(np.max(np.abs(w[forbidden]), initial=0.0))
        r = guarded(grid, notes, (u,), res)
        if r is not None:
            samples.append((u, None, r))
    return finish_report("charge", tol, samples, notes)
