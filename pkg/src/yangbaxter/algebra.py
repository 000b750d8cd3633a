"""Braid, Temperley-Lieb, BMW' and 4-CB skein relations on small chains.

Two-site generators are embedded with :func:`linalg.embed_pair`; relations
between neighbouring sites are checked on 3 sites, far commutation on 4.
Algebra parameters are least-squares fits reported with their residuals.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .errors import InconsistentParams, Singular, ZeroGenerator
from .rmatrix import DEFAULT_TOL, CheckReport


@dataclass(frozen=True)
class ChainFamily:
    """A two-site generator and its embeddings ``M_1 .. M_{m-1}``."""

    generator: np.ndarray
    local_dim: int
    chain_len: int

    def __getitem__(self, site):
        return linalg.embed_pair(self.generator, site, self.chain_len, self.local_dim)

    @cached_property
    def identity(self):
        return linalg.identity(self.local_dim ** self.chain_len)


@dataclass(frozen=True)
class TLParams:
    delta: complex


@dataclass(frozen=True)
class BMWParams:
    l: complex | None
    m: complex | None


@dataclass(frozen=True)
class SkeinCoeffs:
    alpha: complex
    beta: complex
    gamma: complex
    delta4: complex
    residual: float
    unique: bool = True


def _report(name, tol, relations, notes=(), details=None, skip=()):
    """Aggregate named relation residuals; names in ``skip`` are informational."""
    decisive = {k: v for k, v in relations.items() if k not in skip}
    worst = max(decisive.values()) if decisive else 0.0
    details = dict(details or {})
    details["relations"] = dict(relations)
    return CheckReport(name, tol, float(worst), worst <= tol,
                       [(None, None, float(worst))], list(notes), details)


def _require_invertible(g):
    if not linalg.invertible(g):
        raise Singular("generator is not invertible (reciprocal condition below 1e-10)")


def braid_residuals(g, d):
    three = ChainFamily(g, d, 3)
    four = ChainFamily(g, d, 4)
    g1, g2 = three[1], three[2]
    h1, h3 = four[1], four[3]
    return {
        "G1G2G1=G2G1G2": linalg.residual(g1 @ g2 @ g1, g2 @ g1 @ g2),
        "[G1,G3]=0": linalg.residual(h1 @ h3, h3 @ h1),
    }


def check_braid_relations(g, d, tol=DEFAULT_TOL):
    """Artin relations for the chain embeddings of ``g``."""
    g = linalg.as_cmatrix(g, d * d)
    _require_invertible(g)
    return _report("braid", tol, braid_residuals(g, d))


def check_temperley_lieb(e, d, tol=DEFAULT_TOL):
    """Fit ``delta`` in ``E^2 = delta E`` and check the TL relations.

    The middle relation is checked as ``E_i E_{i+-1} E_i = E_i``. The
    variant ``E_i E_{i+-1} E_i = E_{i+-1}`` is measured and reported under
    ``details['swapped_variant']`` but never decides the verdict.
    """
    e = linalg.as_cmatrix(e, d * d)
    if np.max(np.abs(e)) < 1e-14:
        raise ZeroGenerator("TL generator is zero")
    delta = linalg.lstsq_scalar(e @ e, e)
    three = ChainFamily(e, d, 3)
    four = ChainFamily(e, d, 4)
    e1, e2 = three[1], three[2]
    f1, f3 = four[1], four[3]
    relations = {
        "E^2=delta*E": linalg.residual(e @ e, delta * e),
        "E1E2E1=E1": linalg.residual(e1 @ e2 @ e1, e1),
        "E2E1E2=E2": linalg.residual(e2 @ e1 @ e2, e2),
        "[E1,E3]=0": linalg.residual(f1 @ f3, f3 @ f1),
    }
    swapped = max(linalg.residual(e1 @ e2 @ e1, e2), linalg.residual(e2 @ e1 @ e2, e1))
    report = _report("tl", tol, relations, details={"delta": delta, "swapped_variant": swapped})
    return TLParams(delta), report


def normalize_tl_generator(e, d, sign=1):
    """Rescale ``e`` so that ``E_1 E_2 E_1 = E_1`` can hold.

    Fits ``mu`` in ``e_1 e_2 e_1 = mu e_1`` and returns ``(c*e, c)`` with
    ``c = sign / sqrt(mu)``. The loop parameter scales by the same ``c``.
    """
    e = linalg.as_cmatrix(e, d * d)
    three = ChainFamily(e, d, 3)
    e1, e2 = three[1], three[2]
    mu = linalg.lstsq_scalar(e1 @ e2 @ e1, e1)
    if mu is None or abs(mu) < 1e-14:
        raise ZeroGenerator("E1 E2 E1 vanishes; no TL normalization exists")
    c = sign / np.sqrt(complex(mu))
    return c * e, complex(c)


def check_bmw_prime(g, e, d, tol=DEFAULT_TOL, strict_params=False):
    """BMW' relations between a braid generator ``g`` and a TL generator ``e``.

    ``l`` is fitted from ``G E = l^-1 E``; ``m`` from the skein relation
    ``m (E - I) = G^-1 - G``. Either is ``None`` when its fit is
    indeterminate (``E = 0`` or ``E = I`` respectively). With
    ``strict_params`` an inconsistent fit raises
    :class:`InconsistentParams`; otherwise it shows up as a failed relation.
    """
    g = linalg.as_cmatrix(g, d * d)
    e = linalg.as_cmatrix(e, d * d)
    _require_invertible(g)
    n = d * d
    eye = linalg.identity(n)
    gi = np.linalg.inv(g)
    notes = []

    inv_l = linalg.lstsq_scalar(g @ e, e)
    l = None if inv_l is None or abs(inv_l) < 1e-14 else 1 / inv_l
    m = linalg.lstsq_scalar(gi - g, e - eye)
    if inv_l is None:
        notes.append("E = 0: l is indeterminate; relations involving E hold as 0 = 0")
    if m is None:
        notes.append("E = I: the skein relation is 0 = 0 for any m; m is indeterminate")

    s = ChainFamily(g, d, 3)
    t = ChainFamily(e, d, 3)
    si = ChainFamily(gi, d, 3)
    g1, g2, e1, e2, gi1 = s[1], s[2], t[1], t[2], si[1]
    il = 0 if inv_l is None else inv_l
    ll = 0 if l is None else l
    rel = {
        "skein": linalg.residual((0 if m is None else m) * (e - eye), gi - g),
        "G2G1E2=E1E2": linalg.residual(g2 @ g1 @ e2, e1 @ e2),
        "E1G2G1=E1E2": linalg.residual(e1 @ g2 @ g1, e1 @ e2),
        "G2E1G2=Gi1E2Gi1": linalg.residual(g2 @ e1 @ g2, gi1 @ e2 @ gi1),
        "G2E1E2=Gi1E2": linalg.residual(g2 @ e1 @ e2, gi1 @ e2),
        "GE=EG=E/l": max(linalg.residual(g @ e, il * e), linalg.residual(e @ g, il * e)),
        "E1G2E1=lE1": linalg.residual(e1 @ g2 @ e1, ll * e1),
    }
    if strict_params:
        if rel["skein"] > tol:
            raise InconsistentParams(f"skein fit for m leaves residual {rel['skein']:.2e}")
        if rel["GE=EG=E/l"] > tol:
            raise InconsistentParams(f"fit for l leaves residual {rel['GE=EG=E/l']:.2e}")

    braid = braid_residuals(g, d)
    rel.update({"braid:" + k: v for k, v in braid.items()})
    if np.max(np.abs(e)) < 1e-14:
        notes.append("E = 0: TL relations hold trivially")
    else:
        _, tl = check_temperley_lieb(e, d, tol)
        rel.update({"tl:" + k: v for k, v in tl.details["relations"].items()})
    params = BMWParams(l, m)
    return params, _report("bmw", tol, rel, notes, {"l": l, "m": m})


def fit_skein_4cb(g, e):
    """Least-squares ``G^2 = alpha + beta E + gamma G + delta4 G^-1``.

    When ``{I, E, G, G^-1}`` are linearly dependent the minimum-norm
    solution is returned with ``unique=False``.
    """
    g = linalg.as_cmatrix(g)
    e = linalg.as_cmatrix(e, g.shape[0])
    _require_invertible(g)
    gi = np.linalg.inv(g)
    eye = linalg.identity(g.shape[0])
    basis = np.stack([eye.ravel(), e.ravel(), g.ravel(), gi.ravel()], axis=1)
    target = (g @ g).ravel()
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    rank = np.linalg.matrix_rank(basis, tol=1e-10 * max(1.0, np.abs(basis).max()))
    fitted = (basis @ coef).reshape(g.shape)
    res = linalg.residual(g @ g, fitted)
    return SkeinCoeffs(*(complex(c) for c in coef), residual=res, unique=rank == 4)
