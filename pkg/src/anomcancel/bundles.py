"""Chern-character calculus for the twisted elliptic-genus bundles.

Builds the multiplicative genus forms, spinor characters and the q-series
Chern characters of the three twisted tensor-product families:

* AB       -- auxiliary bundle V with two integer twist exponents (a, b);
* AB_XI    -- same with an extra rank-two oriented bundle xi mixed in;
* TWO_LINE -- two rank-two bundles xi, xi' with the (a, b) = (1, 0) shape.

Each assembled characteristic q-series (`q_form`) can be produced through
two independent routes: BUNDLE multiplies the symmetric/exterior-power
generating functions of the constituent bundles, THETA multiplies per-root
Jacobi theta quotients with the matching power-of-two normalization.  Their
exact agreement is the central correctness property of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .algebra import (
    GradedPoly,
    QSeries,
    RingSpec,
    apply_series,
    taylor_cosh_half,
    taylor_exp,
    taylor_expm1_over,
    taylor_sinh_half_over_half,
)
from .errors import UsageError
from .theta import ModularFormId, ThetaKind, modular_form, theta_ratio


class Family(Enum):
    AB = "ab"
    AB_XI = "ab_xi"
    TWO_LINE = "two_line"


class GenusKind(Enum):
    A_HAT = "a_hat"
    L_HAT = "l_hat"


class QFormId(Enum):
    Q1 = "q1"
    Q2 = "q2"
    Q2BAR = "q2bar"
    Q1_XI = "q1_xi"
    Q2_XI = "q2_xi"
    Q3_XI = "q3_xi"
    P1 = "p1"
    P2 = "p2"
    P3 = "p3"


class Route(Enum):
    BUNDLE = "bundle"
    THETA = "theta"


_FORM_FAMILY = {
    QFormId.Q1: Family.AB, QFormId.Q2: Family.AB, QFormId.Q2BAR: Family.AB,
    QFormId.Q1_XI: Family.AB_XI, QFormId.Q2_XI: Family.AB_XI, QFormId.Q3_XI: Family.AB_XI,
    QFormId.P1: Family.TWO_LINE, QFormId.P2: Family.TWO_LINE, QFormId.P3: Family.TWO_LINE,
}

# THETA route exists only for the combinations with a theta-quotient formula:
# the Gamma0(2) side (Q1 / P1) and the joint Gamma^0(2) side reached via the
# Q2 / P2 identifiers.
_THETA_ROUTE_IDS = {QFormId.Q1, QFormId.Q2, QFormId.P1, QFormId.P2}


@dataclass(frozen=True)
class GeometrySpec:
    """Discrete problem instance: dimension 4k, rank-2l bundle, twist integers."""

    k: int
    l: int
    a: int = 1
    b: int = 0
    family: Family = Family.AB

    def __post_init__(self) -> None:
        if self.k < 1 or self.l < 1:
            raise UsageError("k and l must be positive integers")
        if self.family is Family.TWO_LINE and (self.a, self.b) != (1, 0):
            raise UsageError("the two-line-bundle family fixes (a, b) = (1, 0)")

    @property
    def has_xi(self) -> bool:
        return self.family in (Family.AB_XI, Family.TWO_LINE)

    @property
    def has_xi_prime(self) -> bool:
        return self.family is Family.TWO_LINE

    @property
    def tm_roots(self) -> tuple[str, ...]:
        return tuple(f"w{j}" for j in range(1, 2 * self.k + 1))

    @property
    def v_roots(self) -> tuple[str, ...]:
        return tuple(f"v{j}" for j in range(1, self.l + 1))

    def ring(self) -> RingSpec:
        return _ring_for(self.k, self.l, self.has_xi, self.has_xi_prime)

    def root_families(self) -> tuple[tuple[str, tuple[str, ...]], ...]:
        """Paired root families for Pontryagin conversion (Euler roots pass through)."""
        return (("TM", self.tm_roots), ("V", self.v_roots))


@lru_cache(maxsize=None)
def _ring_for(k: int, l: int, xi: bool, xi_prime: bool) -> RingSpec:
    gens = [(f"w{j}", 2) for j in range(1, 2 * k + 1)]
    gens += [(f"v{j}", 2) for j in range(1, l + 1)]
    if xi:
        gens.append(("u", 2))
    if xi_prime:
        gens.append(("u'", 2))
    return RingSpec(gens=tuple(gens), cap=4 * k)


# ---------------------------------------------------------------------------
# q-independent characteristic forms


@lru_cache(maxsize=None)
def _genus_factor(spec: RingSpec, name: str, kind: GenusKind) -> GradedPoly:
    nterms = spec.cap // 2 + 1
    w = GradedPoly.generator(spec, name)
    sh = apply_series(taylor_sinh_half_over_half(nterms), w)
    if kind is GenusKind.A_HAT:
        return sh.inv()
    ch = apply_series(taylor_cosh_half(nterms), w)
    return ch * sh.inv() * 2


def genus_form(kind: GenusKind, spec: GeometrySpec) -> GradedPoly:
    """Multiplicative genus of the tangent roots: A-hat or the signature form."""
    ring = spec.ring()
    out = GradedPoly.one(ring)
    for name in spec.tm_roots:
        out = out * _genus_factor(ring, name, kind)
    return out


@lru_cache(maxsize=None)
def _two_cosh_half(spec: RingSpec, name: str) -> GradedPoly:
    w = GradedPoly.generator(spec, name)
    return apply_series(taylor_cosh_half(spec.cap // 2 + 1), w) * 2


def ch_spinor_pow(spec: GeometrySpec, e: int) -> GradedPoly:
    """Chern character of the e-th formal power of the spinor bundle of V.

    prod_nu (2 cosh(v_nu / 2))^e; negative e inverts each per-root factor in
    the truncated ring.
    """
    ring = spec.ring()
    out = GradedPoly.one(ring)
    if e == 0:
        return out
    for name in spec.v_roots:
        f = _two_cosh_half(ring, name)
        out = out * (f ** e if e > 0 else f.inv() ** (-e))
    return out


def cosh_half_euler(spec: GeometrySpec, which: str = "u") -> GradedPoly:
    """cosh(c/2) for the Euler root of xi ('u') or xi-prime ("u'")."""
    ring = spec.ring()
    if which not in ring.names:
        raise UsageError(f"family {spec.family.value} carries no root {which!r}")
    w = GradedPoly.generator(ring, which)
    return apply_series(taylor_cosh_half(ring.cap // 2 + 1), w)


def ch_tilde_roots(spec: GeometrySpec, roots: tuple[str, ...], rank: int) -> GradedPoly:
    """ch of (complexified bundle minus its rank): sum over +-roots of e^root, minus rank."""
    ring = spec.ring()
    nterms = ring.cap // 2 + 1
    out = GradedPoly.constant(ring, -rank)
    for name in roots:
        w = GradedPoly.generator(ring, name)
        out = out + apply_series(taylor_exp(nterms), w)
        out = out + apply_series(taylor_exp(nterms), -w)
    return out


def ch_v_tilde(spec: GeometrySpec) -> GradedPoly:
    return ch_tilde_roots(spec, spec.v_roots, 2 * spec.l)


def ch_xi_tilde(spec: GeometrySpec) -> GradedPoly:
    return ch_tilde_roots(spec, ("u",), 2)


def ch_xi_prime_tilde(spec: GeometrySpec) -> GradedPoly:
    return ch_tilde_roots(spec, ("u'",), 2)


def p1_combo(spec: GeometrySpec) -> GradedPoly:
    """The degree-4 class multiplying the E2 correction.

    For the AB families: p1(TM) - (a+2b) p1(V); for the two-line family:
    p1(xi) - p1(xi'), i.e. u^2 - u'^2 since the first Pontryagin class of a
    rank-two oriented bundle is the square of its Euler class.
    """
    ring = spec.ring()
    if spec.family is Family.TWO_LINE:
        u = GradedPoly.generator(ring, "u")
        up = GradedPoly.generator(ring, "u'")
        return u * u - up * up
    out = GradedPoly.zero(ring)
    for name in spec.tm_roots:
        w = GradedPoly.generator(ring, name)
        out = out + w * w
    coef = spec.a + 2 * spec.b
    for name in spec.v_roots:
        v = GradedPoly.generator(ring, name)
        out = out - v * v * coef
    return out


# ---------------------------------------------------------------------------
# Generating-function blocks (BUNDLE route)


def _rational_binom(half_exp: int, value: int, order: int) -> QSeries:
    coeffs = [Fraction(0)] * (2 * order + 1)
    coeffs[0] = Fraction(1)
    if half_exp <= 2 * order:
        coeffs[half_exp] = Fraction(value)
    return QSeries(coeffs, order)


def _poly_binom(spec: RingSpec, poly: GradedPoly, half_exp: int, sign: int, order: int) -> QSeries:
    coeffs = [GradedPoly.zero(spec)] * (2 * order + 1)
    coeffs[0] = GradedPoly.one(spec)
    if half_exp <= 2 * order:
        coeffs[half_exp] = poly if sign > 0 else -poly
    return QSeries(coeffs, order, spec)


@lru_cache(maxsize=None)
def _exp_root(spec: RingSpec, name: str, sign: int) -> GradedPoly:
    w = GradedPoly.generator(spec, name)
    return apply_series(taylor_exp(spec.cap // 2 + 1), w if sign > 0 else -w)


@lru_cache(maxsize=None)
def _symmetric_block(spec: RingSpec, roots: tuple[str, ...], order: int) -> QSeries:
    """prod_n ch S_(q^n) of the reduced complexified tangent bundle."""
    res = QSeries.one(order, spec)
    for n in range(1, order + 1):
        h = 2 * n
        num = _rational_binom(h, -1, order).powi(2 * len(roots))
        res = res * num
        for name in roots:
            res = res * _poly_binom(spec, _exp_root(spec, name, +1), h, -1, order).inv()
            res = res * _poly_binom(spec, _exp_root(spec, name, -1), h, -1, order).inv()
    return res


@lru_cache(maxsize=None)
def _exterior_block(spec: RingSpec, roots: tuple[str, ...], rank: int,
                    grid: str, sign: int, order: int) -> QSeries:
    """prod over the exponent grid of ch Lambda_t of a reduced bundle.

    grid 'int' walks t = sign * q^m (m >= 1), grid 'half' walks
    t = sign * q^(m - 1/2); `rank` is the complex rank divided out via the
    (1 + t)^rank denominator.
    """
    res = QSeries.one(order, spec)
    m = 1
    while True:
        h = 2 * m if grid == "int" else 2 * m - 1
        if h > 2 * order:
            break
        for name in roots:
            res = res * _poly_binom(spec, _exp_root(spec, name, +1), h, sign, order)
            res = res * _poly_binom(spec, _exp_root(spec, name, -1), h, sign, order)
        res = res * _rational_binom(h, sign, order).powi(-rank)
        m += 1
    return res


@lru_cache(maxsize=None)
def _block_power(spec: RingSpec, roots: tuple[str, ...], rank: int,
                 grid: str, sign: int, e: int, order: int) -> QSeries:
    return _exterior_block(spec, roots, rank, grid, sign, order).powi(e)


def ch_theta_bundle(which: int, spec: GeometrySpec, order: int) -> QSeries:
    """Chern character of the first or second twisted tensor-product bundle."""
    if which not in (1, 2):
        raise UsageError("which must be 1 or 2")
    if order < 0:
        raise UsageError("truncation order must be >= 0")
    return _ch_theta_cached(which, spec, order)


@lru_cache(maxsize=None)
def _ch_theta_cached(which: int, spec: GeometrySpec, order: int) -> QSeries:
    ring = spec.ring()
    vr, rank_v = spec.v_roots, 2 * spec.l
    res = _symmetric_block(ring, spec.tm_roots, order)

    def vblock(grid: str, sign: int, e: int) -> QSeries:
        return _block_power(ring, vr, rank_v, grid, sign, e, order)

    def xiblock(root: str, grid: str, sign: int, e: int) -> QSeries:
        return _block_power(ring, (root,), 2, grid, sign, e, order)

    a, b = spec.a, spec.b
    if spec.family is Family.AB:
        if which == 1:
            for blk in (vblock("int", +1, a), vblock("half", +1, b), vblock("half", -1, b)):
                res = res * blk
        else:
            for blk in (vblock("int", +1, b), vblock("half", +1, b), vblock("half", -1, a)):
                res = res * blk
        return res
    if spec.family is Family.AB_XI:
        if which == 1:
            parts = [vblock("int", +1, a), xiblock("u", "int", +1, -2),
                     vblock("half", +1, b), xiblock("u", "half", +1, 1),
                     vblock("half", -1, b), xiblock("u", "half", -1, 1)]
        else:
            parts = [vblock("int", +1, b), xiblock("u", "int", +1, 1),
                     vblock("half", +1, b), xiblock("u", "half", +1, 1),
                     vblock("half", -1, a), xiblock("u", "half", -1, -2)]
        for blk in parts:
            res = res * blk
        return res
    # TWO_LINE
    if which == 1:
        parts = [vblock("int", +1, 1), xiblock("u", "int", +1, -2),
                 xiblock("u'", "half", +1, 1), xiblock("u'", "half", -1, 1)]
    else:
        parts = [xiblock("u'", "int", +1, 1), xiblock("u'", "half", +1, 1),
                 vblock("half", -1, 1), xiblock("u", "half", -1, -2)]
    for blk in parts:
        res = res * blk
    return res


# ---------------------------------------------------------------------------
# E2 exponential prefactors


def _e2_coefficient(spec: GeometrySpec) -> Fraction:
    return Fraction(1, 12) if spec.family is Family.TWO_LINE else Fraction(1, 24)


@lru_cache(maxsize=None)
def e2_exponential(spec: GeometrySpec, order: int) -> QSeries:
    """exp(c * E2(tau) * z) with z the family's degree-4 combination.

    c is 1/24 for the AB families and 1/12 for the two-line family; the sum
    over powers of the nilpotent z terminates at the degree cap.
    """
    ring = spec.ring()
    z = p1_combo(spec)
    scaled = modular_form(ModularFormId.E2, order).scale(_e2_coefficient(spec))
    result = QSeries.one(order, ring)
    zpow = GradedPoly.one(ring)
    ppow = QSeries.one(order)
    for n in range(1, ring.cap // 4 + 1):
        zpow = zpow * z * Fraction(1, n)
        if zpow.is_zero:
            break
        ppow = ppow * scaled
        result = result + QSeries([zpow * c for c in ppow.coeffs], order, ring)
    return result


@lru_cache(maxsize=None)
def e2_expm1_over_z(spec: GeometrySpec, order: int) -> QSeries:
    """(exp(c * E2 * z) - 1) / z, a well-defined series in the nilpotent z."""
    ring = spec.ring()
    z = p1_combo(spec)
    scaled = modular_form(ModularFormId.E2, order).scale(_e2_coefficient(spec))
    result = QSeries.zero_series(order, ring)
    zpow = GradedPoly.one(ring)       # z^(n-1) / n!
    ppow = QSeries.one(order)
    for n in range(1, ring.cap // 4 + 2):
        zpow = zpow * Fraction(1, n) if n == 1 else zpow * z * Fraction(1, n)
        if zpow.is_zero:
            break
        ppow = ppow * scaled
        result = result + QSeries([zpow * c for c in ppow.coeffs], order, ring)
    return result


def static_expm1_over_z(spec: GeometrySpec) -> GradedPoly:
    """(e^(c z) - 1)/z with the q-independent normalization E2 -> 1."""
    ring = spec.ring()
    z = p1_combo(spec)
    return apply_series(taylor_expm1_over(_e2_coefficient(spec), ring.cap // 2 + 1), z)


# ---------------------------------------------------------------------------
# Assembled characteristic q-series


def q_form(form: QFormId, route: Route, spec: GeometrySpec, order: int) -> QSeries:
    """Full-degree q-series of one assembled characteristic form.

    Degree extraction (top component or one below) is deliberately left to
    the callers so that all grading bookkeeping lives in one place.  On the
    THETA route the identifiers Q2 and P2 denote the modular combinations
    'Q2 + z * Q2bar' and 'P2 + z * P3' that the theta quotients express.
    """
    if _FORM_FAMILY[form] is not spec.family:
        raise UsageError(f"form {form.name} needs family {_FORM_FAMILY[form].value}")
    if route is Route.THETA:
        if form not in _THETA_ROUTE_IDS:
            raise UsageError(f"no theta-quotient expression for {form.name}")
        return _q_form_theta(form, spec, order)
    return _q_form_bundle(form, spec, order)


@lru_cache(maxsize=None)
def _q_form_bundle(form: QFormId, spec: GeometrySpec, order: int) -> QSeries:
    ahat = genus_form(GenusKind.A_HAT, spec)
    if form in (QFormId.Q1, QFormId.Q2, QFormId.Q2BAR):
        th = ch_theta_bundle(1 if form is QFormId.Q1 else 2, spec, order)
        if form is QFormId.Q1:
            return e2_exponential(spec, order) * (ahat * ch_spinor_pow(spec, spec.a)) * th
        base = (ahat * ch_spinor_pow(spec, spec.b)) * th
        if form is QFormId.Q2:
            return base
        return e2_expm1_over_z(spec, order) * base

    if form in (QFormId.Q1_XI, QFormId.Q2_XI, QFormId.Q3_XI):
        cosh_u = cosh_half_euler(spec, "u")
        if form is QFormId.Q1_XI:
            th = ch_theta_bundle(1, spec, order)
            poly = ahat * ch_spinor_pow(spec, spec.a) * (cosh_u * cosh_u).inv()
            return e2_exponential(spec, order) * poly * th
        th = ch_theta_bundle(2, spec, order)
        base = (ahat * cosh_u * ch_spinor_pow(spec, spec.b)) * th
        if form is QFormId.Q2_XI:
            return base
        return e2_expm1_over_z(spec, order) * base

    # two-line family
    if form is QFormId.P1:
        th = ch_theta_bundle(1, spec, order)
        cosh_u = cosh_half_euler(spec, "u")
        poly = ahat * ch_spinor_pow(spec, 1) * (cosh_u * cosh_u).inv()
        return e2_exponential(spec, order) * poly * th
    th = ch_theta_bundle(2, spec, order)
    base = (ahat * cosh_half_euler(spec, "u'")) * th
    if form is QFormId.P2:
        return base
    return e2_expm1_over_z(spec, order) * base


@lru_cache(maxsize=None)
def _q_form_theta(form: QFormId, spec: GeometrySpec, order: int) -> QSeries:
    ring = spec.ring()
    res = e2_exponential(spec, order)
    for name in spec.tm_roots:
        res = res * theta_ratio(ThetaKind.THETA, GradedPoly.generator(ring, name), order)

    def vratio(kind: ThetaKind, name: str, e: int) -> QSeries:
        return theta_ratio(kind, GradedPoly.generator(ring, name), order).powi(e)

    a, b, l = spec.a, spec.b, spec.l
    if form is QFormId.Q1:
        for name in spec.v_roots:
            res = res * vratio(ThetaKind.THETA1, name, a)
            res = res * vratio(ThetaKind.THETA2, name, b)
            res = res * vratio(ThetaKind.THETA3, name, b)
        return res.scale(Fraction(2) ** (a * l))
    if form is QFormId.Q2:
        for name in spec.v_roots:
            res = res * vratio(ThetaKind.THETA2, name, a)
            res = res * vratio(ThetaKind.THETA1, name, b)
            res = res * vratio(ThetaKind.THETA3, name, b)
        return res.scale(Fraction(2) ** (b * l))
    if form is QFormId.P1:
        for name in spec.v_roots:
            res = res * vratio(ThetaKind.THETA1, name, 1)
        res = res * vratio(ThetaKind.THETA1, "u", -2)
        res = res * vratio(ThetaKind.THETA3, "u'", 1)
        res = res * vratio(ThetaKind.THETA2, "u'", 1)
        return res.scale(Fraction(2) ** l)
    # P2: the joint Gamma^0(2) combination
    for name in spec.v_roots:
        res = res * vratio(ThetaKind.THETA2, name, 1)
    res = res * vratio(ThetaKind.THETA2, "u", -2)
    res = res * vratio(ThetaKind.THETA3, "u'", 1)
    res = res * vratio(ThetaKind.THETA1, "u'", 1)
    return res
