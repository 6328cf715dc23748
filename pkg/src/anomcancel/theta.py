"""Jacobi theta functions: exact q-series quotients and a numeric evaluator.

Symbolic side: theta quotients with a nilpotent degree-2 ring generator as
argument, written in the hyperbolic normalization (argument w = 2*pi*i*x so
that sin(pi*x) becomes sinh(w/2) up to constants and e^(2*pi*i*x) becomes
e^w).  Every series then has exact rational coefficients and pi never enters
symbolic data.  The four modular forms delta_i / eps_i are assembled from
fourth powers of theta constants, and E2 is the weight-2 quasimodular
Eisenstein series 1 - 24 sum sigma_1(n) q^n.

Numeric side: literal double-precision evaluation of the theta products
(including the 2 q^(1/8) prefactors) used to test the transformation laws
under the modular group generators.
"""

from __future__ import annotations

import cmath
import math
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
    taylor_sinh_half_over_half,
)
from .errors import DomainError, UsageError


class ThetaKind(Enum):
    THETA = "theta"
    THETA1 = "theta1"
    THETA2 = "theta2"
    THETA3 = "theta3"


class ModularFormId(Enum):
    DELTA1 = "delta1"
    EPS1 = "eps1"
    DELTA2 = "delta2"
    EPS2 = "eps2"
    E2 = "e2"


def sigma1(n: int) -> int:
    """Sum of the positive divisors of n."""
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d
            if d != n // d:
                total += n // d
        d += 1
    return total


# ---------------------------------------------------------------------------
# Symbolic theta quotients


def _single_generator(w: GradedPoly) -> tuple[RingSpec, str]:
    terms = list(w.iter_terms())
    if len(terms) != 1:
        raise UsageError("theta argument must be a single degree-2 generator")
    exps, coeff = terms[0]
    if coeff != 1 or sum(exps) != 1:
        raise UsageError("theta argument must be a single degree-2 generator")
    i = exps.index(1)
    if w.spec.degrees[i] != 2:
        raise UsageError("theta argument must have cohomological degree 2")
    return w.spec, w.spec.names[i]


def _geometric_inverse(poly: GradedPoly, half_exp: int, sign: int, order: int) -> QSeries:
    """(1 - sign * poly * q^(half_exp/2))^(-1) expanded as a geometric series."""
    spec = poly.spec
    width = 2 * order + 1
    coeffs = [GradedPoly.zero(spec)] * width
    coeffs[0] = GradedPoly.one(spec)
    power = GradedPoly.one(spec)
    i = 1
    while i * half_exp < width:
        power = power * poly
        if power.is_zero:
            break
        coeffs[i * half_exp] = power if sign > 0 or i % 2 == 0 else -power
        i += 1
    return QSeries(coeffs, order, spec)


def _binomial_factor(poly: GradedPoly, half_exp: int, sign: int, order: int) -> QSeries:
    """1 + sign * poly * q^(half_exp/2) as a series."""
    spec = poly.spec
    width = 2 * order + 1
    coeffs = [GradedPoly.zero(spec)] * width
    coeffs[0] = GradedPoly.one(spec)
    if half_exp < width:
        coeffs[half_exp] = poly if sign > 0 else -poly
    return QSeries(coeffs, order, spec)


def _rational_binomial(half_exp: int, value: Fraction | int, order: int) -> QSeries:
    width = 2 * order + 1
    coeffs = [Fraction(0)] * width
    coeffs[0] = Fraction(1)
    if half_exp < width:
        coeffs[half_exp] = Fraction(value)
    return QSeries(coeffs, order)


@lru_cache(maxsize=None)
def _exp_gen(spec: RingSpec, name: str, sign: int) -> GradedPoly:
    w = GradedPoly.generator(spec, name)
    return apply_series(taylor_exp(spec.cap // 2 + 1), w if sign > 0 else -w)


@lru_cache(maxsize=None)
def _theta_ratio_cached(kind: ThetaKind, spec: RingSpec, name: str, order: int) -> QSeries:
    nterms = spec.cap // 2 + 1
    w = GradedPoly.generator(spec, name)
    ew = _exp_gen(spec, name, +1)
    ewi = _exp_gen(spec, name, -1)

    if kind is ThetaKind.THETA:
        # (w/2)/sinh(w/2) * prod (1-q^j)^2 / ((1-e^w q^j)(1-e^-w q^j))
        res = QSeries.from_poly(apply_series(taylor_sinh_half_over_half(nterms), w).inv(), order)
        for j in range(1, order + 1):
            res = res * _rational_binomial(2 * j, -1, order).powi(2)
            res = res * _geometric_inverse(ew, 2 * j, +1, order)
            res = res * _geometric_inverse(ewi, 2 * j, +1, order)
        return res

    if kind is ThetaKind.THETA1:
        # cosh(w/2) * prod (1+e^w q^j)(1+e^-w q^j) / (1+q^j)^2
        res = QSeries.from_poly(apply_series(taylor_cosh_half(nterms), w), order)
        for j in range(1, order + 1):
            res = res * _binomial_factor(ew, 2 * j, +1, order)
            res = res * _binomial_factor(ewi, 2 * j, +1, order)
            res = res * _rational_binomial(2 * j, 1, order).powi(-2)
        return res

    if kind in (ThetaKind.THETA2, ThetaKind.THETA3):
        sign = -1 if kind is ThetaKind.THETA2 else +1
        res = QSeries.one(order, spec)
        j = 1
        while 2 * j - 1 <= 2 * order:
            h = 2 * j - 1
            res = res * _binomial_factor(ew, h, sign, order)
            res = res * _binomial_factor(ewi, h, sign, order)
            res = res * _rational_binomial(h, sign, order).powi(-2)
            j += 1
        return res

    raise UsageError(f"unknown theta kind {kind!r}")


def theta_ratio(kind: ThetaKind, w: GradedPoly, order: int) -> QSeries:
    """Normalized theta quotient with a nilpotent argument.

    For THETA this is w * theta'(0)/theta(w); for the other kinds it is
    theta_i(w)/theta_i(0).  The q^(1/8) prefactors cancel in every quotient,
    so the result lives on the half-integer q grid with coefficients that are
    polynomials in the single generator w.
    """
    if order < 0:
        raise UsageError("truncation order must be >= 0")
    spec, name = _single_generator(w)
    return _theta_ratio_cached(kind, spec, name, order)


def theta_logderiv_ratio(kind: ThetaKind, w: GradedPoly, order: int) -> QSeries:
    """Logarithmic derivative theta_i'(w)/theta_i(w), taken in the w variable.

    Only defined for THETA1/THETA2/THETA3; the result is odd in w and vanishes
    at w = 0 order by order.
    """
    if kind is ThetaKind.THETA:
        raise UsageError("log-derivative ratio is defined for theta1/theta2/theta3 only")
    spec, name = _single_generator(w)
    ratio = _theta_ratio_cached(kind, spec, name, order)
    deriv = ratio.map(lambda p: p.derivative(name))
    return deriv * ratio.inv()


# ---------------------------------------------------------------------------
# Modular forms as rational q-series


def _euler_block(sign: int, order: int) -> QSeries:
    """prod_j (1 - q^j)(1 + sign q^j) ... building block on the integer grid."""
    res = QSeries.one(order)
    for j in range(1, order + 2):
        res = res * _rational_binomial(2 * j, -1, order)
        res = res * _rational_binomial(2 * j, sign, order).powi(2)
    return res


def _half_block(sign: int, order: int) -> QSeries:
    """prod_j (1 - q^j)(1 + sign q^(j-1/2))^2 on the half grid."""
    res = QSeries.one(order)
    for j in range(1, order + 2):
        res = res * _rational_binomial(2 * j, -1, order)
        res = res * _rational_binomial(2 * j - 1, sign, order).powi(2)
    return res


@lru_cache(maxsize=None)
def _theta_const_fourth(kind: ThetaKind, order: int) -> QSeries:
    """Fourth power of a theta constant, divided by the 2 q^(1/8) prefactor pattern.

    theta1(0)^4 = 16 q^(1/2) prod((1-q^j)(1+q^j)^2)^4 lands on the half grid;
    theta2(0)^4 and theta3(0)^4 carry no prefactor.
    """
    if kind is ThetaKind.THETA1:
        return _euler_block(+1, order).powi(4).shift(1).scale(16)
    if kind is ThetaKind.THETA2:
        return _half_block(-1, order).powi(4)
    if kind is ThetaKind.THETA3:
        return _half_block(+1, order).powi(4)
    raise UsageError("theta constant fourth power undefined for this kind")


@lru_cache(maxsize=None)
def modular_form(form: ModularFormId, order: int) -> QSeries:
    """Fourier expansion of delta_i / eps_i / E2 to the requested order."""
    if order < 0:
        raise UsageError("truncation order must be >= 0")
    if form is ModularFormId.E2:
        coeffs = [Fraction(1)] + [Fraction(0)] * (2 * order)
        for n in range(1, order + 1):
            coeffs[2 * n] = Fraction(-24 * sigma1(n))
        return QSeries(coeffs, order)
    t1 = _theta_const_fourth(ThetaKind.THETA1, order)
    t2 = _theta_const_fourth(ThetaKind.THETA2, order)
    t3 = _theta_const_fourth(ThetaKind.THETA3, order)
    if form is ModularFormId.DELTA1:
        return (t2 + t3).scale(Fraction(1, 8))
    if form is ModularFormId.EPS1:
        return (t2 * t3).scale(Fraction(1, 16))
    if form is ModularFormId.DELTA2:
        return (t1 + t3).scale(Fraction(-1, 8))
    if form is ModularFormId.EPS2:
        return (t1 * t3).scale(Fraction(1, 16))
    raise UsageError(f"unknown modular form {form!r}")


def jacobi_identity_check(order: int) -> QSeries:
    """Difference of both sides of the Jacobi derivative identity.

    Both sides are divided by the common 2 pi q^(1/8); the result must be the
    zero series at every truncation order.
    """
    lhs = QSeries.one(order)
    for j in range(1, order + 2):
        lhs = lhs * _rational_binomial(2 * j, -1, order).powi(3)
    rhs = _euler_block(+1, order) * _half_block(-1, order) * _half_block(+1, order)
    return lhs - rhs


# ---------------------------------------------------------------------------
# Numeric evaluation (double precision)


def _check_tau(tau: complex) -> None:
    if tau.imag <= 0:
        raise DomainError("tau must lie in the upper half plane")


def theta_eval(kind: ThetaKind, v: complex, tau: complex, terms: int) -> complex:
    """Literal truncated-product value of a theta function, prefactors included."""
    _check_tau(tau)
    if terms < 1:
        raise UsageError("need at least one product term")
    q = cmath.exp(2j * cmath.pi * tau)
    qh = cmath.exp(1j * cmath.pi * tau)          # q^(1/2)
    q8 = cmath.exp(1j * cmath.pi * tau / 4)      # q^(1/8)
    z = cmath.exp(2j * cmath.pi * v)
    zi = cmath.exp(-2j * cmath.pi * v)

    if kind is ThetaKind.THETA:
        acc = 2 * q8 * cmath.sin(cmath.pi * v)
        for j in range(1, terms + 1):
            qj = q ** j
            acc *= (1 - qj) * (1 - z * qj) * (1 - zi * qj)
        return acc
    if kind is ThetaKind.THETA1:
        acc = 2 * q8 * cmath.cos(cmath.pi * v)
        for j in range(1, terms + 1):
            qj = q ** j
            acc *= (1 - qj) * (1 + z * qj) * (1 + zi * qj)
        return acc
    sign = -1 if kind is ThetaKind.THETA2 else +1
    acc = 1 + 0j
    for j in range(1, terms + 1):
        qj = q ** j
        qhj = qh ** (2 * j - 1)
        acc *= (1 - qj) * (1 + sign * z * qhj) * (1 + sign * zi * qhj)
    return acc


def theta_prime_eval(v: complex, tau: complex, terms: int) -> complex:
    """d theta / dv at (v, tau), via the product's logarithmic derivative."""
    _check_tau(tau)
    q = cmath.exp(2j * cmath.pi * tau)
    q8 = cmath.exp(1j * cmath.pi * tau / 4)
    if v == 0:
        acc = 2 * cmath.pi * q8
        for j in range(1, terms + 1):
            acc *= (1 - q ** j) ** 3
        return acc
    z = cmath.exp(2j * cmath.pi * v)
    zi = cmath.exp(-2j * cmath.pi * v)
    logderiv = cmath.pi * cmath.cos(cmath.pi * v) / cmath.sin(cmath.pi * v)
    for j in range(1, terms + 1):
        qj = q ** j
        logderiv += 2j * cmath.pi * (-z * qj / (1 - z * qj) + zi * qj / (1 - zi * qj))
    return theta_eval(ThetaKind.THETA, v, tau, terms) * logderiv


def e2_eval(tau: complex, terms: int) -> complex:
    """Numeric E2 via its q-expansion."""
    _check_tau(tau)
    q = cmath.exp(2j * cmath.pi * tau)
    return 1 - 24 * sum(sigma1(n) * q ** n for n in range(1, terms + 1))


def modular_form_eval(form: ModularFormId, tau: complex, terms: int) -> complex:
    """Numeric delta_i / eps_i from theta constants, or E2 from its series."""
    if form is ModularFormId.E2:
        return e2_eval(tau, terms)
    t1 = theta_eval(ThetaKind.THETA1, 0, tau, terms)
    t2 = theta_eval(ThetaKind.THETA2, 0, tau, terms)
    t3 = theta_eval(ThetaKind.THETA3, 0, tau, terms)
    if form is ModularFormId.DELTA1:
        return (t2 ** 4 + t3 ** 4) / 8
    if form is ModularFormId.EPS1:
        return t2 ** 4 * t3 ** 4 / 16
    if form is ModularFormId.DELTA2:
        return -(t1 ** 4 + t3 ** 4) / 8
    if form is ModularFormId.EPS2:
        return t1 ** 4 * t3 ** 4 / 16
    raise UsageError(f"unknown modular form {form!r}")


# Generators used in the weight checks: T and ST^2ST for the c-even subgroup,
# STS and T^2STS for the b-even subgroup (entries (a, b, c, d)).
GAMMA0_2_GENERATORS: dict[str, tuple[int, int, int, int]] = {
    "T": (1, 1, 0, 1),
    "ST2ST": (-1, -1, 2, 1),
}
GAMMA_UPPER0_2_GENERATORS: dict[str, tuple[int, int, int, int]] = {
    "STS": (-1, 0, 1, -1),
    "T2STS": (1, -2, 1, -1),
}


def moebius(mat: tuple[int, int, int, int], tau: complex) -> complex:
    a, b, c, d = mat
    return (a * tau + b) / (c * tau + d)


def sqrt_tau_over_i(tau: complex) -> complex:
    """Principal branch of (tau/i)^(1/2)."""
    return cmath.sqrt(tau / 1j)


def transformation_residuals(tau: complex, v: complex,
                             theta_terms: int = 60, e2_terms: int = 40) -> dict[str, float]:
    """Absolute residuals of the theta / E2 / delta-eps transformation laws.

    Keys cover the T and S laws of the four theta functions and theta', the
    Jacobi derivative identity, the S law of E2, the S laws relating
    delta2/eps2 to delta1/eps1, and the weight checks of all four forms under
    their congruence-subgroup generators (trivial character, verified
    numerically).
    """
    _check_tau(tau)
    res: dict[str, float] = {}
    root = sqrt_tau_over_i(tau)
    gauss = cmath.exp(1j * cmath.pi * tau * v * v)
    eighth = cmath.exp(1j * cmath.pi / 4)

    def th(kind, vv, tt):
        return theta_eval(kind, vv, tt, theta_terms)

    s_tau = -1 / tau

    res["theta_T"] = abs(th(ThetaKind.THETA, v, tau + 1) - eighth * th(ThetaKind.THETA, v, tau))
    res["theta_S"] = abs(th(ThetaKind.THETA, v, s_tau)
                         - (1 / 1j) * root * gauss * th(ThetaKind.THETA, tau * v, tau))
    res["theta1_T"] = abs(th(ThetaKind.THETA1, v, tau + 1) - eighth * th(ThetaKind.THETA1, v, tau))
    res["theta1_S"] = abs(th(ThetaKind.THETA1, v, s_tau) - root * gauss * th(ThetaKind.THETA2, tau * v, tau))
    res["theta2_T"] = abs(th(ThetaKind.THETA2, v, tau + 1) - th(ThetaKind.THETA3, v, tau))
    res["theta2_S"] = abs(th(ThetaKind.THETA2, v, s_tau) - root * gauss * th(ThetaKind.THETA1, tau * v, tau))
    res["theta3_T"] = abs(th(ThetaKind.THETA3, v, tau + 1) - th(ThetaKind.THETA2, v, tau))
    res["theta3_S"] = abs(th(ThetaKind.THETA3, v, s_tau) - root * gauss * th(ThetaKind.THETA3, tau * v, tau))
    res["thetaprime_T"] = abs(theta_prime_eval(v, tau + 1, theta_terms)
                              - eighth * theta_prime_eval(v, tau, theta_terms))
    res["thetaprime0_S"] = abs(theta_prime_eval(0, s_tau, theta_terms)
                               - (1 / 1j) * root * tau * theta_prime_eval(0, tau, theta_terms))
    res["jacobi_identity"] = abs(theta_prime_eval(0, tau, theta_terms)
                                 - cmath.pi * th(ThetaKind.THETA1, 0, tau)
                                 * th(ThetaKind.THETA2, 0, tau) * th(ThetaKind.THETA3, 0, tau))
    res["e2_S"] = abs(e2_eval(s_tau, e2_terms)
                      - (tau * tau * e2_eval(tau, e2_terms) - 6j * tau / cmath.pi))

    d1 = modular_form_eval(ModularFormId.DELTA1, tau, theta_terms)
    e1 = modular_form_eval(ModularFormId.EPS1, tau, theta_terms)
    res["delta2_S"] = abs(modular_form_eval(ModularFormId.DELTA2, s_tau, theta_terms) - tau ** 2 * d1)
    res["eps2_S"] = abs(modular_form_eval(ModularFormId.EPS2, s_tau, theta_terms) - tau ** 4 * e1)

    weight_cases = [
        ("delta1", ModularFormId.DELTA1, 2, GAMMA0_2_GENERATORS),
        ("eps1", ModularFormId.EPS1, 4, GAMMA0_2_GENERATORS),
        ("delta2", ModularFormId.DELTA2, 2, GAMMA_UPPER0_2_GENERATORS),
        ("eps2", ModularFormId.EPS2, 4, GAMMA_UPPER0_2_GENERATORS),
    ]
    for label, form, weight, gens in weight_cases:
        for gname, mat in gens.items():
            _, _, c, d = mat
            lhs = modular_form_eval(form, moebius(mat, tau), theta_terms)
            rhs = (c * tau + d) ** weight * modular_form_eval(form, tau, theta_terms)
            res[f"{label}_w{weight}_{gname}"] = abs(lhs - rhs)
    return res
