"""Decomposition of weight-2k q-series over the modular-form basis.

A weight-2k form over the b-even congruence subgroup is a rational (or
ring-valued) combination of the basis series (8 delta2)^(k-2r) eps2^r with
0 <= r <= [k/2].  The leading coefficients of that basis form a triangular
system, so the combination coefficients h_r are read off the lowest
[k/2]+1 half-integer q-orders by forward substitution; every higher order is
then a falsifiable check, and a zero residual through the full truncation
order is the computational witness of modularity.

The same machinery extracts the virtual-bundle coefficients (b-type, all
cohomological degrees at once) and the form coefficients (beta-type, from the
degree-(4k-4) slice) of the twisted bundle characters, and compares the
r = 0, 1 values against their closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .algebra import GradedPoly, QSeries
from .bundles import (
    Family,
    GenusKind,
    GeometrySpec,
    QFormId,
    Route,
    ch_spinor_pow,
    ch_theta_bundle,
    ch_v_tilde,
    ch_xi_prime_tilde,
    ch_xi_tilde,
    cosh_half_euler,
    genus_form,
    q_form,
    static_expm1_over_z,
)
from .errors import UsageError
from .theta import ModularFormId, modular_form


class Group(Enum):
    GAMMA0 = "gamma0"
    GAMMA_UPPER0 = "gamma_upper0"


class BrBetarKind(Enum):
    B_R = "br"
    BETA_R = "betar"
    B_TILDE_R = "br_tilde"
    BETA_TILDE_R = "betar_tilde"
    B_BAR_R = "br_bar"
    BETA_BAR_R = "betar_bar"


_KIND_FAMILY = {
    BrBetarKind.B_R: Family.AB, BrBetarKind.BETA_R: Family.AB,
    BrBetarKind.B_TILDE_R: Family.AB_XI, BrBetarKind.BETA_TILDE_R: Family.AB_XI,
    BrBetarKind.B_BAR_R: Family.TWO_LINE, BrBetarKind.BETA_BAR_R: Family.TWO_LINE,
}


@dataclass(frozen=True)
class DecompResult:
    """Coefficients over the weight-2k basis plus the full residual series."""

    h: tuple
    residual: QSeries
    determination_order: int  # last half-index used to fix the h_r

    @property
    def is_exact(self) -> bool:
        return self.residual.is_zero()


@lru_cache(maxsize=None)
def basis_series(k: int, r: int, group: Group, order: int) -> QSeries:
    """(8 delta)^(k-2r) eps^r over the requested subgroup's form pair."""
    if r < 0 or r > k // 2:
        raise UsageError(f"r must lie in 0..{k // 2}")
    if group is Group.GAMMA0:
        delta = modular_form(ModularFormId.DELTA1, order)
        eps = modular_form(ModularFormId.EPS1, order)
    else:
        delta = modular_form(ModularFormId.DELTA2, order)
        eps = modular_form(ModularFormId.EPS2, order)
    return delta.scale(8).powi(k - 2 * r) * eps.powi(r)


def decompose(series: QSeries, k: int, order: int) -> DecompResult:
    """Solve for h_r against the (8 delta2)^(k-2r) eps2^r basis.

    h_r are fixed by the coefficients of q^0 .. q^([k/2]/2) alone (the basis
    leading-term matrix is unitriangular up to the common sign (-1)^k); the
    residual keeps the full difference through the truncation order.
    """
    if series.order != order:
        raise UsageError("series truncation order mismatch")
    m_max = k // 2
    if 2 * order <= m_max:
        raise UsageError("truncation order too small to determine the coefficients")
    basis = [basis_series(k, r, Group.GAMMA_UPPER0, order) for r in range(m_max + 1)]
    h: list = []
    for m in range(m_max + 1):
        val = series.coeffs[m]
        for r in range(m):
            br = basis[r].coeffs[m]
            if br != 0:
                val = val - h[r] * br
        lead = basis[m].coeffs[m]
        h.append(val * (1 / lead))
    recon = None
    for r, hr in enumerate(h):
        term = basis[r] * hr if isinstance(hr, GradedPoly) else basis[r].scale(hr)
        recon = term if recon is None else recon + term
    residual = series - recon
    return DecompResult(h=tuple(h), residual=residual, determination_order=m_max)


# ---------------------------------------------------------------------------
# b_r / beta_r extraction and closed-form comparison


@dataclass(frozen=True)
class ClosedFormCheck:
    """One computed coefficient against its candidate closed forms.

    `matches` lists the candidate labels that agree exactly with the computed
    ring element; `expected` names the candidate that must match for the check
    to count as passed.
    """

    name: str
    computed: GradedPoly
    candidates: tuple[tuple[str, GradedPoly], ...]
    expected: str

    @property
    def matches(self) -> tuple[str, ...]:
        return tuple(label for label, poly in self.candidates if poly == self.computed)

    @property
    def passed(self) -> bool:
        return self.expected in self.matches


def _beta_source(spec: GeometrySpec, order: int) -> QSeries:
    form = {Family.AB: QFormId.Q2BAR, Family.AB_XI: QFormId.Q3_XI,
            Family.TWO_LINE: QFormId.P3}[spec.family]
    return q_form(form, Route.BUNDLE, spec, order).degree_slice(4 * spec.k - 4)


def _b_closed_forms(spec: GeometrySpec, ring_one: GradedPoly) -> list[ClosedFormCheck]:
    """Candidate closed forms for the r = 0, 1 virtual-bundle coefficients."""
    k = spec.k
    sign = Fraction(-1) ** k
    checks = []
    h0_cands = (("printed", ring_one * sign),)
    checks.append(("h0", h0_cands, "printed"))
    if k >= 2:
        chv = ch_v_tilde(spec)
        if spec.family is Family.AB:
            lit = chv * (-spec.a) - 24 * k * sign
            dist = (chv * (-spec.a) - 24 * k) * sign
            gen = (chv * (spec.b - spec.a) - 24 * k) * sign
            cands = (("printed-literal", lit), ("printed-distributed", dist),
                     ("generalized", gen))
        elif spec.family is Family.AB_XI:
            gen = (chv * (spec.b - spec.a) + ch_xi_tilde(spec) * 3 - 24 * k) * sign
            cands = (("generalized", gen),)
        else:
            w = ch_xi_tilde(spec) * 2 + ch_xi_prime_tilde(spec) - chv
            lit = w - 24 * k * sign
            dist = (w - 24 * k) * sign
            cands = (("printed-literal", lit), ("printed-distributed", dist),
                     ("generalized", dist))
        checks.append(("h1", cands, "generalized"))
    return checks


def _beta_closed_forms(spec: GeometrySpec) -> list[ClosedFormCheck]:
    """Candidate closed forms for the r = 0, 1 form coefficients."""
    k = spec.k
    deg = 4 * k - 4
    sign = Fraction(-1) ** k
    pref = static_expm1_over_z(spec)
    ahat = genus_form(GenusKind.A_HAT, spec)
    if spec.family is Family.AB:
        weight = ahat * ch_spinor_pow(spec, spec.b)
    elif spec.family is Family.AB_XI:
        weight = ahat * ch_spinor_pow(spec, spec.b) * cosh_half_euler(spec, "u")
    else:
        weight = ahat * cosh_half_euler(spec, "u'")
    base = pref * weight
    checks = []
    checks.append(("beta0", (("printed", base.degree_part(deg) * sign),), "printed"))
    if k >= 2:
        chv = ch_v_tilde(spec)
        if spec.family is Family.AB:
            lit = (base * (chv * (-spec.a) - 24 * k)).degree_part(deg) * sign
            gen = (base * (chv * (spec.b - spec.a) - 24 * k)).degree_part(deg) * sign
            cands = (("printed-literal", lit), ("generalized", gen))
        elif spec.family is Family.AB_XI:
            gen = (base * (chv * (spec.b - spec.a) + ch_xi_tilde(spec) * 3 - 24 * k)) \
                .degree_part(deg) * sign
            cands = (("generalized", gen),)
        else:
            w = ch_xi_tilde(spec) * 2 + ch_xi_prime_tilde(spec) - chv
            lit = (base * (w - 24 * k)).degree_part(deg) * sign
            cands = (("printed-literal", lit), ("generalized", lit))
        checks.append(("beta1", cands, "generalized"))
    return checks


def extract_br_betar(spec: GeometrySpec, which: BrBetarKind,
                     order: int) -> tuple[DecompResult, list[ClosedFormCheck]]:
    """Extract the b-type or beta-type coefficients and compare closed forms.

    b-type decomposes the full bundle character (all cohomological degrees);
    beta-type decomposes the degree-(4k-4) slice of the E2-corrected form.
    """
    if _KIND_FAMILY[which] is not spec.family:
        raise UsageError(f"{which.name} needs family {_KIND_FAMILY[which].value}")
    is_b_type = which in (BrBetarKind.B_R, BrBetarKind.B_TILDE_R, BrBetarKind.B_BAR_R)
    if is_b_type:
        series = ch_theta_bundle(2, spec, order)
        templates = _b_closed_forms(spec, GradedPoly.one(spec.ring()))
    else:
        series = _beta_source(spec, order)
        templates = _beta_closed_forms(spec)
    result = decompose(series, spec.k, order)
    checks = []
    for (name, cands, expected), computed in zip(templates, result.h):
        checks.append(ClosedFormCheck(name=name, computed=computed,
                                      candidates=cands, expected=expected))
    return result, checks
