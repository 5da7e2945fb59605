"""Disc automorphisms and finite Blaschke products as first-class values.

A degree-n Blaschke product B(z) = lam * prod (z - a_j)/(1 - conj(a_j) z)
with |a_j| < 1 and |lam| = 1 maps the disc onto itself n-to-1.  This module
evaluates them (with derivatives), composes them structurally, solves
B(z) = w for all n preimages, and recovers automorphisms from opaque
evaluation handles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundaryAmbiguityError,
    DiscPreservationError,
    InternalConsistencyError,
    NotAnAutomorphismError,
    PoleError,
)
from .numerics import (
    Polynomial,
    RootSet,
    aberth_roots,
    poly_from_roots,
    poly_mul,
    poly_sub,
    require_finite,
)

# |alpha|, |zeros| must stay this far inside the disc (type invariant).
INTERIOR_MARGIN = 1e-12
# Computed roots inside |z| < 1 - ROOT_ANNULUS count as interior, outside
# |z| > 1 + ROOT_ANNULUS as exterior; the annulus between is a diagnostic.
ROOT_ANNULUS = 1e-9


@dataclass(frozen=True)
class DiscMapSettings:
    preimage_residual_tol: float = 1e-8
    recover_sup_tol: float = 1e-8
    recover_newton_tol: float = 1e-13
    recover_max_iter: int = 200
    compose_probes: tuple = (0.137 + 0.271j, 0.311 - 0.177j)
    disc_check_slack: float = 1e-9


DEFAULT_MAP_SETTINGS = DiscMapSettings()


def _check_unimodular(lam: complex) -> complex:
    lam = require_finite(lam, "lambda")
    if abs(abs(lam) - 1.0) > INTERIOR_MARGIN:
        raise ValueError(f"lambda must be unimodular, got |lambda| = {abs(lam)!r}")
    return lam


def _check_interior(a: complex, name: str) -> complex:
    a = require_finite(a, name)
    if abs(a) >= 1.0 - INTERIOR_MARGIN:
        raise ValueError(f"{name} must satisfy |{name}| < 1 - {INTERIOR_MARGIN}, got {abs(a)!r}")
    return a


@dataclass(frozen=True)
class MobiusAutomorphism:
    """lam * (z - alpha)/(1 - conj(alpha) z) with |alpha| < 1, |lam| = 1."""

    alpha: complex
    lam: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_interior(self.alpha, "alpha"))
        object.__setattr__(self, "lam", _check_unimodular(self.lam))


@dataclass(frozen=True)
class BlaschkeProduct:
    """Unimodular constant plus a multiset of zeros in the open disc.

    Degree 0 is the constant map z -> lam.
    """

    lam: complex
    zeros: tuple

    def __post_init__(self):
        object.__setattr__(self, "lam", _check_unimodular(self.lam))
        zs = tuple(_check_interior(a, "zero") for a in self.zeros)
        object.__setattr__(self, "zeros", zs)

    @property
    def degree(self) -> int:
        return len(self.zeros)


class DiscMapHandle:
    """Uniform evaluation capability: z in the disc -> (f(z), f'(z)).

    ``fn`` must accept a complex ndarray and return (values, derivatives)
    ndarrays.  Maps declared disc-preserving are spot-checked on every
    evaluation: an interior point with |f(z)| >= 1 raises a diagnostic.
    """

    def __init__(self, fn, descriptor: str, disc_preserving: bool = True,
                 blaschke: BlaschkeProduct | None = None, spec: dict | None = None):
        self._fn = fn
        self.descriptor = descriptor
        self.disc_preserving = disc_preserving
        self.blaschke = blaschke
        self.spec = spec

    def __repr__(self):
        return f"DiscMapHandle({self.descriptor})"

    def eval_many(self, z: np.ndarray):
        z = np.asarray(z, dtype=complex)
        values, derivs = self._fn(z)
        if self.disc_preserving:
            interior = np.abs(z) < 1.0
            bad = interior & (np.abs(values) >= 1.0 + DEFAULT_MAP_SETTINGS.disc_check_slack)
            if bad.any():
                i = int(np.argmax(bad))
                raise DiscPreservationError(
                    f"{self.descriptor}: |f({z.flat[i]!r})| = {abs(values.flat[i])!r} >= 1 "
                    "at an interior point")
        return values, derivs

    def eval(self, z: complex):
        v, d = self.eval_many(np.array([complex(z)]))
        return complex(v[0]), complex(d[0])


def mobius_eval(m: MobiusAutomorphism, z: complex):
    """Value and derivative of the automorphism at z (|z| <= 1 allowed)."""
    z = require_finite(z, "z")
    denom = 1.0 - m.alpha.conjugate() * z
    if abs(denom) < 1e-14:
        raise PoleError(f"evaluation at z = {z!r} hits the pole of the Mobius map")
    value = m.lam * (z - m.alpha) / denom
    deriv = m.lam * (1.0 - abs(m.alpha) ** 2) / (denom * denom)
    return value, deriv


def mobius_inverse(m: MobiusAutomorphism) -> MobiusAutomorphism:
    """The group inverse; validated by round-trip in the test-suite."""
    return MobiusAutomorphism(alpha=-m.lam * m.alpha, lam=m.lam.conjugate())


def _blaschke_eval_vec(b: BlaschkeProduct, z: np.ndarray):
    z = np.asarray(z, dtype=complex)
    if b.degree == 0:
        return np.full(z.shape, b.lam, dtype=complex), np.zeros_like(z)
    shape = z.shape
    flat = z.ravel()
    zeros = np.asarray(b.zeros, dtype=complex)[:, None]
    zc = zeros.conjugate()
    gap = flat[None, :] - zeros
    den = 1.0 - zc * flat[None, :]
    values = b.lam * np.prod(gap / den, axis=0)
    # Logarithmic derivative is cheap and exact away from the zeros.
    with np.errstate(divide="ignore", invalid="ignore"):
        logsum = (1.0 / gap + zc / den).sum(axis=0)
        derivs = values * logsum
    near = (np.abs(gap) < 1e-12 * (1.0 + np.abs(zeros))).any(axis=0)
    if near.any():
        for i in np.nonzero(near)[0]:
            derivs[i] = _blaschke_deriv_product_rule(b, complex(flat[i]))
    return values.reshape(shape), derivs.reshape(shape)


def _blaschke_deriv_product_rule(b: BlaschkeProduct, z: complex) -> complex:
    """O(n^2) product-rule derivative; safe when z sits on a zero."""
    factors = []
    dfactors = []
    for a in b.zeros:
        denom = 1.0 - a.conjugate() * z
        factors.append((z - a) / denom)
        dfactors.append((1.0 - abs(a) ** 2) / (denom * denom))
    total = 0j
    for j in range(len(factors)):
        term = dfactors[j]
        for k in range(len(factors)):
            if k != j:
                term *= factors[k]
        total += term
    return b.lam * total


def blaschke_eval(b: BlaschkeProduct, z: complex):
    """Value and derivative at z; valid for |z| <= 1."""
    z = require_finite(z, "z")
    v, d = _blaschke_eval_vec(b, np.array([z]))
    return complex(v[0]), complex(d[0])


def _blaschke_polynomial_pair(b: BlaschkeProduct):
    """Numerator lam * prod(z - a_j) and denominator prod(1 - conj(a_j) z)."""
    num = poly_from_roots(b.zeros, b.lam)
    den = Polynomial((1.0 + 0j,))
    for a in b.zeros:
        den = poly_mul(den, Polynomial((1.0 + 0j, -a.conjugate())))
    return num, den


def _classify_roots(rootset: RootSet, context: str) -> RootSet:
    """Keep interior roots; refuse to guess inside the boundary annulus."""
    inside_r, inside_m, inside_res = [], [], []
    ambiguous = []
    for root, mult, res in zip(rootset.roots, rootset.multiplicities, rootset.residuals):
        mag = abs(root)
        if mag < 1.0 - ROOT_ANNULUS:
            inside_r.append(root)
            inside_m.append(mult)
            inside_res.append(res)
        elif mag <= 1.0 + ROOT_ANNULUS:
            ambiguous.append(root)
    if ambiguous:
        raise BoundaryAmbiguityError(
            f"{context}: roots {ambiguous!r} sit on the |z| = 1 annulus; "
            "interior/exterior classification is unreliable", roots=rootset.roots)
    return RootSet(tuple(inside_r), tuple(inside_m), tuple(inside_res))


def blaschke_preimages(b: BlaschkeProduct, w: complex,
                       settings: DiscMapSettings = DEFAULT_MAP_SETTINGS) -> RootSet:
    """All n solutions of B(z) = w in the disc, counted with multiplicity.

    Solves lam * prod(z - a_j) - w * prod(1 - conj(a_j) z) = 0, a polynomial
    of exact degree n whose roots all lie inside the disc for |w| < 1.
    """
    w = require_finite(w, "w")
    if abs(w) >= 1.0:
        raise ValueError(f"target must satisfy |w| < 1, got {abs(w)!r}")
    if b.degree < 1:
        raise ValueError("preimages need degree >= 1")
    num, den = _blaschke_polynomial_pair(b)
    target = poly_sub(num, poly_mul(Polynomial((w,)), den))
    if target.degree != b.degree:
        raise InternalConsistencyError(
            f"preimage polynomial degree {target.degree} != {b.degree}")
    rootset = aberth_roots(target)
    for root in rootset.roots:
        if abs(root) > 1.0 + ROOT_ANNULUS:
            raise InternalConsistencyError(
                f"preimage root {root!r} outside the closed disc: solver bug",
                payload=rootset)
        value, _ = blaschke_eval(b, root)
        if abs(value - w) > settings.preimage_residual_tol:
            raise InternalConsistencyError(
                f"preimage residual |B(root) - w| = {abs(value - w):.3e} "
                f"exceeds {settings.preimage_residual_tol}", payload=rootset)
    return _classify_roots(rootset, "blaschke_preimages")


def blaschke_critical_points(b: BlaschkeProduct) -> RootSet:
    """Zeros of B' inside the disc; with multiplicity there are degree-1.

    The census solves N'D - ND' = 0 (B = lam N/D) and keeps interior roots.
    Reflected partners 1/conj(z) fall outside and are dropped; zeros of B at
    the origin push them to infinity, which silently lowers the numerator
    degree without affecting the interior count.
    """
    if b.degree < 1:
        raise ValueError("critical census needs degree >= 1")
    num, den = _blaschke_polynomial_pair(b)
    numerator = poly_sub(poly_mul(num.derivative(), den), poly_mul(num, den.derivative()))
    if numerator.degree < 1:
        census = RootSet((), (), ())
    else:
        census = _classify_roots(aberth_roots(numerator), "blaschke_critical_points")
    if census.total_multiplicity != b.degree - 1:
        raise InternalConsistencyError(
            f"critical census found {census.total_multiplicity} interior roots, "
            f"expected {b.degree - 1}", payload=census)
    return census


def critical_numerator(b: BlaschkeProduct) -> Polynomial:
    """Full numerator polynomial of B' (interior and reflected roots)."""
    num, den = _blaschke_polynomial_pair(b)
    return poly_sub(poly_mul(num.derivative(), den), poly_mul(num, den.derivative()))


def blaschke_compose(outer: BlaschkeProduct, inner: BlaschkeProduct,
                     settings: DiscMapSettings = DEFAULT_MAP_SETTINGS) -> BlaschkeProduct:
    """Structural composition outer(inner(z)) as a Blaschke product.

    Zeros are the inner-preimages of the outer zeros, so the degree is the
    product of the degrees.  The unimodular constant is recovered at a fixed
    probe point and renormalised onto the unit circle.
    """
    if outer.degree < 1 or inner.degree < 1:
        raise ValueError("composition needs both degrees >= 1")
    zeros = []
    for a in outer.zeros:
        pre = blaschke_preimages(inner, a, settings)
        for root, mult in zip(pre.roots, pre.multiplicities):
            zeros.extend([root] * mult)
    candidate = BlaschkeProduct(lam=1.0 + 0j, zeros=tuple(zeros))
    lam = None
    for probe in settings.compose_probes:
        direct, _ = blaschke_eval(inner, probe)
        direct, _ = blaschke_eval(outer, direct)
        through, _ = blaschke_eval(candidate, probe)
        if abs(through) > 1e-12:
            lam = direct / through
            break
    if lam is None:
        raise InternalConsistencyError("all probe points hit zeros of the composition")
    lam = lam / abs(lam)
    return BlaschkeProduct(lam=lam, zeros=tuple(zeros))


def _validation_grid(count: int = 200, radius: float = 0.95) -> np.ndarray:
    """Deterministic sunflower-spiral grid over the disc."""
    m = np.arange(count)
    r = radius * np.sqrt((m + 0.5) / count)
    theta = m * (math.pi * (3.0 - math.sqrt(5.0)))
    return r * np.exp(1j * theta)


def mobius_recover(f: DiscMapHandle,
                   settings: DiscMapSettings = DEFAULT_MAP_SETTINGS):
    """Recover (alpha, lam) from an opaque degree-1 handle.

    alpha is the zero of f found by damped Newton iteration (the minimum
    principle makes |f| free of spurious interior minima, so step-halving
    descent cannot stall away from the zero).  Returns the automorphism and
    the validation sup-error over a 200-point grid.  Raises
    NotAnAutomorphismError when the handle is not a disc automorphism.
    """
    f0, _ = f.eval(0.0)
    seed = -f0 * (1.0 + abs(f0))
    if abs(seed) > 0.9:
        seed = 0.9 * seed / abs(seed)
    z = seed
    value, deriv = f.eval(z)
    converged = False
    for _ in range(settings.recover_max_iter):
        if abs(value) < settings.recover_newton_tol:
            converged = True
            break
        if deriv == 0:
            break
        step = value / deriv
        t = 1.0
        moved = False
        while t >= 1e-6:
            cand = z - t * step
            if abs(cand) < 0.999999:
                cand_value, cand_deriv = f.eval(cand)
                if abs(cand_value) < abs(value):
                    z, value, deriv = cand, cand_value, cand_deriv
                    moved = True
                    break
            t /= 2.0
        if not moved:
            break
    if not converged and abs(value) >= settings.recover_newton_tol:
        raise NotAnAutomorphismError(
            f"{f.descriptor}: Newton search for the zero stalled at |f| = {abs(value):.3e}")
    alpha = z
    if abs(alpha) > 1e-8:
        lam = f0 / (-alpha)
    else:
        _, lam = f.eval(0.0)
    if abs(abs(lam) - 1.0) > 1e-6:
        raise NotAnAutomorphismError(
            f"{f.descriptor}: recovered constant has modulus {abs(lam):.3e}, not 1")
    lam = lam / abs(lam)
    candidate = MobiusAutomorphism(alpha=alpha, lam=lam)
    grid = _validation_grid()
    values, _ = f.eval_many(grid)
    model = lam * (grid - alpha) / (1.0 - np.conj(alpha) * grid)
    sup_error = float(np.max(np.abs(values - model)))
    if sup_error > settings.recover_sup_tol:
        raise NotAnAutomorphismError(
            f"{f.descriptor}: best Mobius fit misses by {sup_error:.3e}",
            sup_error=sup_error)
    return candidate, sup_error


def mobius_handle(m: MobiusAutomorphism) -> DiscMapHandle:
    as_blaschke = BlaschkeProduct(lam=m.lam, zeros=(m.alpha,))

    def fn(z):
        return _blaschke_eval_vec(as_blaschke, z)

    spec = {"type": "mobius", "alpha": [m.alpha.real, m.alpha.imag],
            "lambda": [m.lam.real, m.lam.imag]}
    return DiscMapHandle(fn, f"mobius(alpha={m.alpha:.6g}, lambda={m.lam:.6g})",
                         blaschke=as_blaschke, spec=spec)


def blaschke_handle(b: BlaschkeProduct) -> DiscMapHandle:
    def fn(z):
        return _blaschke_eval_vec(b, z)

    spec = {"type": "blaschke", "lambda": [b.lam.real, b.lam.imag],
            "zeros": [[a.real, a.imag] for a in b.zeros]}
    return DiscMapHandle(fn, f"blaschke(degree={b.degree})", blaschke=b, spec=spec)


def identity_handle() -> DiscMapHandle:
    return mobius_handle(MobiusAutomorphism(alpha=0j, lam=1.0 + 0j))


def compose_handles(outer: DiscMapHandle, inner: DiscMapHandle) -> DiscMapHandle:
    """Functional composition for handles without Blaschke structure."""

    def fn(z):
        inner_v, inner_d = inner.eval_many(z)
        outer_v, outer_d = outer.eval_many(inner_v)
        return outer_v, outer_d * inner_d

    disc = outer.disc_preserving
    return DiscMapHandle(fn, f"({outer.descriptor} o {inner.descriptor})",
                         disc_preserving=disc)


def opaque(handle: DiscMapHandle, label: str = "opaque") -> DiscMapHandle:
    """Re-wrap a handle hiding its structure (for recovery round-trips)."""
    return DiscMapHandle(handle._fn, label,
                         disc_preserving=handle.disc_preserving)
