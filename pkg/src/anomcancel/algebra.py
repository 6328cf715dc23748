"""Exact arithmetic for truncated graded polynomial rings and q^(1/2)-series.

The ring is generated by even-degree formal roots (degree-2 Chern roots in
practice); every product is silently truncated above the degree cap, which
models the vanishing of cohomology above the manifold dimension.  All
coefficients are exact rationals: internally a polynomial is stored as a
common positive denominator plus integer numerators keyed by bit-packed
exponent vectors, bucketed by total degree, so that multiplication is pure
integer work.

Formal power series in q^(1/2) (`QSeries`) hold their coefficients in a
dense array indexed by half-steps; coefficients are either `Fraction` or
`GradedPoly`, and mixed arithmetic promotes the rational side into the ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import InvertError, SymmetryError, UsageError

# Exact rational scalar type: always lowest terms, positive denominator.
Rational = Fraction

_SHIFT = 6          # bits per generator exponent in a packed monomial key
_MASK = (1 << _SHIFT) - 1


@dataclass(frozen=True)
class RingSpec:
    """Ambient truncated ring: ordered generators with even degrees, degree cap."""

    gens: tuple[tuple[str, int], ...]
    cap: int

    def __post_init__(self) -> None:
        names = [name for name, _ in self.gens]
        if len(set(names)) != len(names):
            raise UsageError("generator names must be unique")
        for name, deg in self.gens:
            if deg <= 0 or deg % 2 != 0:
                raise UsageError(f"generator {name!r} must have even positive degree")
        if self.cap <= 0 or self.cap % 2 != 0:
            raise UsageError("degree cap must be even and positive")
        if self.gens and self.cap < max(d for _, d in self.gens):
            raise UsageError("degree cap below a generator degree")
        if self.gens and self.cap // min(d for _, d in self.gens) > _MASK:
            raise UsageError("degree cap too large for packed exponents")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.gens)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(deg for _, deg in self.gens)

    def index(self, name: str) -> int:
        for i, (gname, _) in enumerate(self.gens):
            if gname == name:
                return i
        raise UsageError(f"unknown generator {name!r}")

    def degree_of(self, name: str) -> int:
        return self.gens[self.index(name)][1]


def _pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        key |= e << (_SHIFT * i)
    return key


def _unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (_SHIFT * i)) & _MASK for i in range(nvars))


class GradedPoly:
    """Immutable sparse polynomial in a truncated graded ring.

    Internal representation: ``_den`` (positive int) and ``_buckets`` mapping
    total degree -> {packed exponent key -> integer numerator}.  The stored
    fraction of a monomial is numerator/_den; gcd(all numerators, _den) == 1.
    """

    __slots__ = ("spec", "_den", "_buckets")

    def __init__(self, spec: RingSpec, den: int, buckets: dict[int, dict[int, int]]):
        # Private: use the constructors below.  `buckets` is owned by the new
        # instance and must already be free of zero numerators.
        self.spec = spec
        self._den = den
        self._buckets = buckets

    # -- constructors ------------------------------------------------------

    @staticmethod
    def _make(spec: RingSpec, den: int, buckets: dict[int, dict[int, int]]) -> "GradedPoly":
        nums = []
        for d in list(buckets):
            b = buckets[d]
            for k in list(b):
                if not b[k]:
                    del b[k]
            if b:
                nums.extend(b.values())
            else:
                del buckets[d]
        if not nums:
            return GradedPoly(spec, 1, {})
        g = den
        for n in nums:
            g = math.gcd(g, n)
            if g == 1:
                break
        if g > 1:
            buckets = {d: {k: n // g for k, n in b.items()} for d, b in buckets.items()}
            den //= g
        return GradedPoly(spec, den, buckets)

    @classmethod
    def zero(cls, spec: RingSpec) -> "GradedPoly":
        return cls(spec, 1, {})

    @classmethod
    def constant(cls, spec: RingSpec, value) -> "GradedPoly":
        value = Fraction(value)
        if value == 0:
            return cls.zero(spec)
        return cls(spec, value.denominator, {0: {0: value.numerator}})

    @classmethod
    def one(cls, spec: RingSpec) -> "GradedPoly":
        return cls.constant(spec, 1)

    @classmethod
    def generator(cls, spec: RingSpec, name: str) -> "GradedPoly":
        i = spec.index(name)
        deg = spec.degrees[i]
        if deg > spec.cap:
            return cls.zero(spec)
        return cls(spec, 1, {deg: {1 << (_SHIFT * i): 1}})

    @classmethod
    def from_terms(cls, spec: RingSpec, terms: Mapping[Sequence[int], Fraction | int]) -> "GradedPoly":
        degs = spec.degrees
        den = 1
        pending: list[tuple[int, int, Fraction]] = []
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != len(degs):
                raise UsageError("exponent vector length mismatch")
            if any(e < 0 for e in exps):
                raise UsageError("negative exponent")
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            deg = sum(e * d for e, d in zip(exps, degs))
            if deg > spec.cap:
                continue
            pending.append((deg, _pack(exps), coeff))
            den = den * coeff.denominator // math.gcd(den, coeff.denominator)
        buckets: dict[int, dict[int, int]] = {}
        for deg, key, coeff in pending:
            b = buckets.setdefault(deg, {})
            b[key] = b.get(key, 0) + coeff.numerator * (den // coeff.denominator)
        return cls._make(spec, den, buckets)

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._buckets

    def iter_terms(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        n = len(self.spec.gens)
        for d in sorted(self._buckets):
            b = self._buckets[d]
            for key in sorted(b):
                yield _unpack(key, n), Fraction(b[key], self._den)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        deg = sum(e * d for e, d in zip(exps, self.spec.degrees))
        num = self._buckets.get(deg, {}).get(_pack(exps), 0)
        return Fraction(num, self._den)

    def constant_term(self) -> Fraction:
        return Fraction(self._buckets.get(0, {}).get(0, 0), self._den)

    def degree_part(self, deg: int) -> "GradedPoly":
        b = self._buckets.get(deg)
        if not b:
            return GradedPoly.zero(self.spec)
        return GradedPoly(self.spec, self._den, {deg: dict(b)})

    def max_degree(self) -> int:
        return max(self._buckets) if self._buckets else 0

    def min_degree(self) -> int:
        return min(self._buckets) if self._buckets else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedPoly):
            return (self.spec == other.spec and self._den == other._den
                    and self._buckets == other._buckets)
        if isinstance(other, (int, Fraction)):
            return self == GradedPoly.constant(self.spec, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self._den,
                     tuple(sorted((d, tuple(sorted(b.items()))) for d, b in self._buckets.items()))))

    def __repr__(self) -> str:
        return f"GradedPoly({self})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        names = self.spec.names
        parts = []
        for exps, coeff in self.iter_terms():
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(mono)
            elif coeff == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{coeff}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    # -- arithmetic --------------------------------------------------------

    def __neg__(self) -> "GradedPoly":
        return GradedPoly(self.spec, self._den,
                          {d: {k: -n for k, n in b.items()} for d, b in self._buckets.items()})

    def __add__(self, other) -> "GradedPoly":
        if isinstance(other, (int, Fraction)):
            other = GradedPoly.constant(self.spec, other)
        elif not isinstance(other, GradedPoly):
            return NotImplemented
        if other.spec != self.spec:
            raise UsageError("polynomials from different rings")
        da, db = self._den, other._den
        g = math.gcd(da, db)
        den = da // g * db
        ma, mb = den // da, den // db
        out: dict[int, dict[int, int]] = {
            d: {k: n * ma for k, n in b.items()} for d, b in self._buckets.items()
        }
        for d, b in other._buckets.items():
            tgt = out.setdefault(d, {})
            for k, n in b.items():
                tgt[k] = tgt.get(k, 0) + n * mb
        return GradedPoly._make(self.spec, den, out)

    __radd__ = __add__

    def __sub__(self, other) -> "GradedPoly":
        if isinstance(other, (int, Fraction)):
            other = GradedPoly.constant(self.spec, other)
        return self + (-other)

    def __rsub__(self, other) -> "GradedPoly":
        return (-self) + other

    def __mul__(self, other) -> "GradedPoly":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other == 0:
                return GradedPoly.zero(self.spec)
            num, dn = other.numerator, other.denominator
            return GradedPoly._make(
                self.spec, self._den * dn,
                {d: {k: n * num for k, n in b.items()} for d, b in self._buckets.items()})
        if not isinstance(other, GradedPoly):
            return NotImplemented
        if other.spec != self.spec:
            raise UsageError("polynomials from different rings")
        cap = self.spec.cap
        out: dict[int, dict[int, int]] = {}
        for d1, b1 in self._buckets.items():
            for d2, b2 in other._buckets.items():
                d = d1 + d2
                if d > cap:
                    continue
                tgt = out.setdefault(d, {})
                get = tgt.get
                for k1, n1 in b1.items():
                    for k2, n2 in b2.items():
                        k = k1 + k2
                        tgt[k] = get(k, 0) + n1 * n2
        return GradedPoly._make(self.spec, self._den * other._den, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "GradedPoly":
        if not isinstance(e, int):
            raise UsageError("polynomial exponent must be an integer")
        if e < 0:
            return self.inv() ** (-e)
        result = GradedPoly.one(self.spec)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self) -> "GradedPoly":
        """Inverse in the truncated ring; needs an invertible constant term."""
        c = self.constant_term()
        if c == 0:
            raise InvertError("constant term is zero; element not invertible")
        # self = c (1 + nil) with nil nilpotent, so 1/self = (1/c) sum (-nil)^i.
        nil = self * (1 / c) - 1
        acc = GradedPoly.one(self.spec)
        term = GradedPoly.one(self.spec)
        minus_nil = -nil
        for _ in range(self.spec.cap // 2):
            term = term * minus_nil
            if term.is_zero:
                break
            acc = acc + term
        return acc * (1 / c)

    # -- substitutions -----------------------------------------------------

    def scale_gens(self, scales: Mapping[str, Fraction | int]) -> "GradedPoly":
        """Substitute g -> c_g * g for each named generator."""
        idx = {self.spec.index(name): Fraction(c) for name, c in scales.items()}
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in self.iter_terms():
            for i, c in idx.items():
                coeff = coeff * c ** exps[i]
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
        return GradedPoly.from_terms(self.spec, terms)

    def permute_gens(self, mapping: Mapping[str, str]) -> "GradedPoly":
        """Substitute generators along a name -> name bijection."""
        perm = {self.spec.index(src): self.spec.index(dst) for src, dst in mapping.items()}
        n = len(self.spec.gens)
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in self.iter_terms():
            new = [0] * n
            for i, e in enumerate(exps):
                new[perm.get(i, i)] += e
            key = tuple(new)
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return GradedPoly.from_terms(self.spec, terms)

    def set_gens_zero(self, names: Iterable[str]) -> "GradedPoly":
        drop = {self.spec.index(name) for name in names}
        terms = {exps: coeff for exps, coeff in self.iter_terms()
                 if all(exps[i] == 0 for i in drop)}
        return GradedPoly.from_terms(self.spec, terms)

    def derivative(self, name: str) -> "GradedPoly":
        """Formal partial derivative with respect to one generator."""
        i = self.spec.index(name)
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in self.iter_terms():
            e = exps[i]
            if e == 0:
                continue
            new = exps[:i] + (e - 1,) + exps[i + 1:]
            terms[new] = terms.get(new, Fraction(0)) + coeff * e
        return GradedPoly.from_terms(self.spec, terms)

    def eval_scalars(self) -> Fraction:
        """Value with every generator set to zero."""
        return self.constant_term()


def apply_series(coeffs: Sequence[Fraction], x: GradedPoly) -> GradedPoly:
    """Evaluate a univariate power series f at a nilpotent ring element.

    `coeffs[n]` is the coefficient of z^n in f(z); `x` must have zero constant
    term so the sum sum_n coeffs[n] x^n is finite in the truncated ring.
    """
    if x.constant_term() != 0:
        raise UsageError("apply_series needs a nilpotent argument (zero constant term)")
    if x.is_zero:
        needed = 1
    else:
        needed = x.spec.cap // x.min_degree() + 1
    if len(coeffs) < needed:
        raise UsageError(f"series needs at least {needed} coefficients for this argument")
    acc = GradedPoly.constant(x.spec, coeffs[0])
    power = GradedPoly.one(x.spec)
    for n in range(1, needed):
        power = power * x
        if power.is_zero:
            break
        if coeffs[n] != 0:
            acc = acc + power * coeffs[n]
    return acc


def taylor_exp(nterms: int) -> list[Fraction]:
    return [Fraction(1, math.factorial(n)) for n in range(nterms)]


def taylor_cosh_half(nterms: int) -> list[Fraction]:
    """cosh(z/2) = sum z^(2n) / (4^n (2n)!)."""
    out = []
    for n in range(nterms):
        if n % 2 == 0:
            m = n // 2
            out.append(Fraction(1, 4 ** m * math.factorial(n)))
        else:
            out.append(Fraction(0))
    return out


def taylor_sinh_half_over_half(nterms: int) -> list[Fraction]:
    """sinh(z/2) / (z/2) = sum z^(2n) / (4^n (2n+1)!)."""
    out = []
    for n in range(nterms):
        if n % 2 == 0:
            m = n // 2
            out.append(Fraction(1, 4 ** m * math.factorial(n + 1)))
        else:
            out.append(Fraction(0))
    return out


def taylor_expm1_over(c: Fraction, nterms: int) -> list[Fraction]:
    """(e^(c z) - 1) / z = sum c^(n+1) z^n / (n+1)!."""
    c = Fraction(c)
    return [c ** (n + 1) / math.factorial(n + 1) for n in range(nterms)]


# ---------------------------------------------------------------------------
# Formal power series in q^(1/2)


def half_q_label(n: int) -> str:
    """Human-readable power q^(n/2)."""
    if n == 0:
        return "1"
    if n % 2 == 0:
        return "q" if n == 2 else f"q^{n // 2}"
    return f"q^({n}/2)"


def _coeff_is_zero(c) -> bool:
    return c.is_zero if isinstance(c, GradedPoly) else c == 0


def _coeff_inv(c):
    if isinstance(c, GradedPoly):
        return c.inv()
    if c == 0:
        raise InvertError("constant term is zero; series not invertible")
    return 1 / c


class QSeries:
    """Power series in q^(1/2) truncated at integer order N (half-index 2N).

    `coeffs[n]` holds the coefficient of q^(n/2) for n = 0..2N.  `ring` is the
    ambient RingSpec when coefficients are ring elements, or None for rational
    scalar series.
    """

    __slots__ = ("coeffs", "order", "ring")

    def __init__(self, coeffs: Sequence, order: int, ring: RingSpec | None = None):
        if order < 0:
            raise UsageError("truncation order must be >= 0")
        coeffs = list(coeffs)
        width = 2 * order + 1
        if len(coeffs) > width:
            raise UsageError("coefficient array longer than 2N+1")
        zero = GradedPoly.zero(ring) if ring is not None else Fraction(0)
        coeffs.extend([zero] * (width - len(coeffs)))
        self.coeffs = tuple(coeffs)
        self.order = order
        self.ring = ring

    # -- constructors ------------------------------------------------------

    @classmethod
    def rational(cls, coeffs: Sequence[Fraction | int], order: int) -> "QSeries":
        return cls([Fraction(c) for c in coeffs], order)

    @classmethod
    def one(cls, order: int, ring: RingSpec | None = None) -> "QSeries":
        first = GradedPoly.one(ring) if ring is not None else Fraction(1)
        return cls([first], order, ring)

    @classmethod
    def zero_series(cls, order: int, ring: RingSpec | None = None) -> "QSeries":
        return cls([], order, ring)

    @classmethod
    def from_poly(cls, poly: GradedPoly, order: int) -> "QSeries":
        return cls([poly], order, poly.spec)

    def to_ring(self, ring: RingSpec) -> "QSeries":
        if self.ring is not None:
            if self.ring != ring:
                raise UsageError("series already carries a different ring")
            return self
        return QSeries([GradedPoly.constant(ring, c) for c in self.coeffs], self.order, ring)

    # -- structure ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        try:
            a, b = self._align(other)
        except UsageError:
            return False
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order, self.ring))

    def __repr__(self) -> str:
        shown = []
        for n, c in enumerate(self.coeffs):
            if _coeff_is_zero(c):
                continue
            shown.append(f"({c})" if n == 0 else f"({c})*{half_q_label(n)}")
            if len(shown) > 5:
                shown.append("...")
                break
        return "QSeries[N=%d](%s)" % (self.order, " + ".join(shown) or "0")

    def coefficient(self, half_index: int):
        """Coefficient of q^(half_index/2)."""
        if half_index < 0 or half_index > 2 * self.order:
            raise UsageError("half-index outside truncation range")
        return self.coeffs[half_index]

    def is_zero(self) -> bool:
        return all(_coeff_is_zero(c) for c in self.coeffs)

    def first_nonzero(self) -> int | None:
        """Smallest half-index with a nonzero coefficient, or None."""
        for n, c in enumerate(self.coeffs):
            if not _coeff_is_zero(c):
                return n
        return None

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise UsageError("cannot extend a truncated series")
        return QSeries(self.coeffs[: 2 * order + 1], order, self.ring)

    def map(self, fn: Callable) -> "QSeries":
        """Apply fn to every coefficient (must stay within the same ring)."""
        return QSeries([fn(c) for c in self.coeffs], self.order, self.ring)

    def degree_slice(self, deg: int) -> "QSeries":
        if self.ring is None:
            raise UsageError("degree slice needs ring coefficients")
        return self.map(lambda p: p.degree_part(deg))

    # -- arithmetic --------------------------------------------------------

    def _align(self, other: "QSeries") -> tuple["QSeries", "QSeries"]:
        if self.order != other.order:
            raise UsageError("q-series truncation orders differ")
        if self.ring is None and other.ring is not None:
            return self.to_ring(other.ring), other
        if other.ring is None and self.ring is not None:
            return self, other.to_ring(self.ring)
        if self.ring != other.ring:
            raise UsageError("q-series over different rings")
        return self, other

    def __neg__(self) -> "QSeries":
        return QSeries([-c for c in self.coeffs], self.order, self.ring)

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._align(other)
        return QSeries([x + y for x, y in zip(a.coeffs, b.coeffs)], a.order, a.ring)

    def __sub__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, GradedPoly):
            s = self.to_ring(other.spec) if self.ring is None else self
            return QSeries([c * other for c in s.coeffs], s.order, s.ring)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._align(other)
        width = 2 * a.order + 1
        zero = GradedPoly.zero(a.ring) if a.ring is not None else Fraction(0)
        out = [zero] * width
        for i, ca in enumerate(a.coeffs):
            if _coeff_is_zero(ca):
                continue
            for j in range(width - i):
                cb = b.coeffs[j]
                if _coeff_is_zero(cb):
                    continue
                out[i + j] = out[i + j] + ca * cb
        return QSeries(out, a.order, a.ring)

    __rmul__ = __mul__

    def scale(self, c: Fraction | int) -> "QSeries":
        c = Fraction(c)
        return QSeries([x * c for x in self.coeffs], self.order, self.ring)

    def inv(self) -> "QSeries":
        r0 = _coeff_inv(self.coeffs[0])
        width = 2 * self.order + 1
        out = [r0]
        for n in range(1, width):
            s = None
            for j in range(1, n + 1):
                cj = self.coeffs[j]
                if _coeff_is_zero(cj):
                    continue
                t = cj * out[n - j]
                s = t if s is None else s + t
            if s is None:
                zero = GradedPoly.zero(self.ring) if self.ring is not None else Fraction(0)
                out.append(zero)
            else:
                out.append(-(r0 * s))
        return QSeries(out, self.order, self.ring)

    def powi(self, e: int) -> "QSeries":
        """Integer power; negative exponents go through inv()."""
        if not isinstance(e, int):
            raise UsageError("series exponent must be an integer")
        base = self
        if e < 0:
            base = self.inv()
            e = -e
        result = QSeries.one(self.order, self.ring)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, half_steps: int) -> "QSeries":
        """Multiply by q^(half_steps/2); negative shifts must not drop terms."""
        width = 2 * self.order + 1
        zero = GradedPoly.zero(self.ring) if self.ring is not None else Fraction(0)
        if half_steps >= width:
            out = [zero] * width
        elif half_steps >= 0:
            out = [zero] * half_steps + list(self.coeffs[: width - half_steps])
        else:
            cut = -half_steps
            if any(not _coeff_is_zero(c) for c in self.coeffs[:cut]):
                raise UsageError("negative shift would drop nonzero terms")
            out = list(self.coeffs[cut:]) + [zero] * cut
        return QSeries(out, self.order, self.ring)


def qs_arith(op: str, s1: QSeries, s2: QSeries | int | None = None) -> QSeries:
    """Uniform dispatch over the basic q-series operations.

    op is one of 'add', 'mul', 'inv', 'powi', 'shift'; 'powi' and 'shift'
    take an integer second argument, 'inv' takes none.
    """
    if op == "add":
        if not isinstance(s2, QSeries):
            raise UsageError("add needs a second series")
        return s1 + s2
    if op == "mul":
        if not isinstance(s2, QSeries):
            raise UsageError("mul needs a second series")
        return s1 * s2
    if op == "inv":
        return s1.inv()
    if op == "powi":
        if not isinstance(s2, int):
            raise UsageError("powi needs an integer exponent")
        return s1.powi(s2)
    if op == "shift":
        if not isinstance(s2, int):
            raise UsageError("shift needs an integer half-step count")
        return s1.shift(s2)
    raise UsageError(f"unknown q-series operation {op!r}")


# ---------------------------------------------------------------------------
# Symmetric-function conversion to Pontryagin presentation


@lru_cache(maxsize=None)
def _elementary_monomials(m: int, i: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of e_i(s_1..s_m): all 0/1 vectors with i ones."""
    out = []
    for bits in range(1 << m):
        if bin(bits).count("1") == i:
            out.append(tuple((bits >> j) & 1 for j in range(m)))
    return tuple(out)


def _expand_elementary_product(dexps: Sequence[int], m: int) -> dict[tuple[int, ...], int]:
    """Expand prod_i e_i(s)^(d_i) as a polynomial in s_1..s_m."""
    poly: dict[tuple[int, ...], int] = {(0,) * m: 1}
    for i, d in enumerate(dexps, start=1):
        for _ in range(d):
            nxt: dict[tuple[int, ...], int] = {}
            for mono, c in poly.items():
                for emono in _elementary_monomials(m, i):
                    key = tuple(a + b for a, b in zip(mono, emono))
                    nxt[key] = nxt.get(key, 0) + c
            poly = nxt
    return poly


def _decompose_symmetric(terms: dict[tuple[int, ...], Fraction], m: int) -> dict[tuple[int, ...], Fraction]:
    """Rewrite a symmetric polynomial in s_1..s_m over elementary symmetric functions."""
    work = dict(terms)
    out: dict[tuple[int, ...], Fraction] = {}
    while work:
        lam = max(work)
        if any(lam[i] < lam[i + 1] for i in range(m - 1)):
            raise SymmetryError("leading monomial is not a partition; input not symmetric")
        c = work.pop(lam)
        dexps = tuple(lam[i] - (lam[i + 1] if i + 1 < m else 0) for i in range(m))
        out[dexps] = out.get(dexps, Fraction(0)) + c
        for mono, coef in _expand_elementary_product(dexps, m).items():
            if mono == lam:
                continue
            nv = work.get(mono, Fraction(0)) - c * coef
            if nv:
                work[mono] = nv
            else:
                work.pop(mono, None)
    return {d: c for d, c in out.items() if c}


class PontryaginPoly:
    """A graded polynomial rewritten over Pontryagin generators p_i(family).

    Wraps a GradedPoly over a symbol ring in which each converted root family
    contributes generators p1(F)..pm(F) of degrees 4,8,..; unconverted
    generators (e.g. rank-two Euler roots) pass through unchanged.
    """

    def __init__(self, poly: GradedPoly, source_spec: RingSpec,
                 families: tuple[tuple[str, tuple[str, ...]], ...]):
        self.poly = poly
        self.source_spec = source_spec
        self.families = families

    def __eq__(self, other) -> bool:
        if not isinstance(other, PontryaginPoly):
            return NotImplemented
        return self.poly == other.poly and self.families == other.families

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"PontryaginPoly({self.poly})"

    def expand(self) -> GradedPoly:
        """Substitute every p_i(F) by the elementary symmetric function of squared roots."""
        src = self.source_spec
        images: dict[str, GradedPoly] = {name: GradedPoly.generator(src, name)
                                         for name in src.names}
        sym_images: dict[str, GradedPoly] = {}
        for fam, roots in self.families:
            m = len(roots)
            squares = [GradedPoly.generator(src, r) ** 2 for r in roots]
            for i in range(1, m + 1):
                e_i = GradedPoly.zero(src)
                for emono in _elementary_monomials(m, i):
                    term = GradedPoly.one(src)
                    for s, e in zip(squares, emono):
                        if e:
                            term = term * s
                    e_i = e_i + term
                sym_images[f"p{i}({fam})"] = e_i
        result = GradedPoly.zero(src)
        for exps, coeff in self.poly.iter_terms():
            term = GradedPoly.constant(src, coeff)
            for name, e in zip(self.poly.spec.names, exps):
                if e == 0:
                    continue
                img = sym_images.get(name) or images.get(name)
                if img is None:
                    raise UsageError(f"cannot expand symbol {name!r}")
                term = term * img ** e
            result = result + term
        return result


def to_pontryagin(p: GradedPoly, family: str, roots: Sequence[str]) -> PontryaginPoly:
    """Convert a polynomial symmetric in one root family to Pontryagin classes.

    The input must be invariant under permutations and sign flips of the named
    roots; p_i(family) is the i-th elementary symmetric function of their
    squares.  Non-symmetric input raises SymmetryError (detected by the failed
    back-substitution check).
    """
    return _convert_families(p, ((family, tuple(roots)),))


def pontryagin_all(p: GradedPoly, families: Sequence[tuple[str, Sequence[str]]]) -> PontryaginPoly:
    """Convert every listed root family at once."""
    return _convert_families(p, tuple((f, tuple(r)) for f, r in families))


def _convert_families(p: GradedPoly,
                      families: tuple[tuple[str, tuple[str, ...]], ...]) -> PontryaginPoly:
    src = p.spec
    converted: set[str] = set()
    for _, roots in families:
        converted.update(roots)
    sym_gens = []
    for fam, roots in families:
        for r in roots:
            if src.degree_of(r) != 2:
                raise UsageError("family roots must have degree 2")
        # p_i symbols with 4i above the cap can never carry a term
        sym_gens.extend((f"p{i}({fam})", 4 * i)
                        for i in range(1, len(roots) + 1) if 4 * i <= src.cap)
    target = RingSpec(
        gens=tuple((n, d) for n, d in src.gens if n not in converted) + tuple(sym_gens),
        cap=src.cap)

    passthrough = [n for n, _ in src.gens if n not in converted]
    pass_idx = [src.index(n) for n in passthrough]

    # Group terms by the passthrough part; each group's family exponents must
    # be even and jointly symmetric.
    grouped: dict[tuple[int, ...], dict[tuple[tuple[int, ...], ...], Fraction]] = {}
    for exps, coeff in p.iter_terms():
        fam_parts = []
        for _, roots in families:
            part = []
            for r in roots:
                e = exps[src.index(r)]
                if e % 2 != 0:
                    raise SymmetryError(f"odd power of root {r!r}; not sign-flip invariant")
                part.append(e // 2)
            fam_parts.append(tuple(part))
        key = tuple(exps[i] for i in pass_idx)
        grouped.setdefault(key, {})[tuple(fam_parts)] = \
            grouped.get(key, {}).get(tuple(fam_parts), Fraction(0)) + coeff

    out_terms: dict[tuple[int, ...], Fraction] = {}
    for pass_exps, fam_terms in grouped.items():
        # Decompose family by family; `done_prefix` maps already-assigned
        # elementary exponents to the still-unconverted tail terms.
        done_prefix: dict[tuple[int, ...], dict[tuple[tuple[int, ...], ...], Fraction]] = {(): fam_terms}
        for fam, roots in families:
            m = len(roots)
            nxt: dict[tuple[int, ...], dict[tuple[tuple[int, ...], ...], Fraction]] = {}
            for prefix, terms in done_prefix.items():
                # collect symmetric polynomial in this family with coefficients
                # indexed by the remaining families' exponents
                by_rest: dict[tuple[tuple[int, ...], ...], dict[tuple[int, ...], Fraction]] = {}
                for fam_parts, c in terms.items():
                    rest = fam_parts[1:]
                    by_rest.setdefault(rest, {})[fam_parts[0]] = \
                        by_rest.get(rest, {}).get(fam_parts[0], Fraction(0)) + c
                for rest, sym_terms in by_rest.items():
                    for dexps, c in _decompose_symmetric(sym_terms, m).items():
                        new_prefix = prefix + dexps
                        nxt.setdefault(new_prefix, {})[rest] = \
                            nxt.get(new_prefix, {}).get(rest, Fraction(0)) + c
            done_prefix = nxt
        for prefix, terms in done_prefix.items():
            c = terms.get((), Fraction(0))
            if c == 0:
                continue
            exps = [0] * len(target.gens)
            for i, e in enumerate(pass_exps):
                exps[target.index(passthrough[i])] = e
            pos = 0
            for fam, roots in families:
                for i in range(1, len(roots) + 1):
                    if prefix[pos]:
                        exps[target.index(f"p{i}({fam})")] = prefix[pos]
                    pos += 1
            key = tuple(exps)
            out_terms[key] = out_terms.get(key, Fraction(0)) + c

    result = PontryaginPoly(GradedPoly.from_terms(target, out_terms), src, families)
    if result.expand() != p:
        raise SymmetryError("back-substitution mismatch; input not symmetric in the family")
    return result


# ---------------------------------------------------------------------------
# Reduction modulo a single quadratic relation


def ideal_reduce(p: GradedPoly, relation: GradedPoly, leading: str | None = None) -> GradedPoly:
    """Normal form of p modulo a relation of the shape g^2 - R (R free of g).

    The relation is normalized so its g^2 coefficient is 1; every occurrence
    of g^(2t+s) in p is rewritten to g^s R^t.  The result contains no monomial
    divisible by g^2, and p - result lies in the ideal generated by the
    relation.
    """
    spec = p.spec
    if relation.spec != spec:
        raise UsageError("relation lives in a different ring")
    if relation.is_zero:
        raise UsageError("relation must be nonzero")

    if leading is None:
        lead_idx = None
        for i, name in enumerate(spec.names):
            exps = [0] * len(spec.gens)
            exps[i] = 2
            if relation.coefficient(exps) != 0:
                lead_idx = i
                break
        if lead_idx is None:
            raise UsageError("relation has no generator square to eliminate")
        leading = spec.names[lead_idx]
    else:
        lead_idx = spec.index(leading)

    lead_exps = [0] * len(spec.gens)
    lead_exps[lead_idx] = 2
    c = relation.coefficient(lead_exps)
    if c == 0:
        raise UsageError(f"relation has no {leading}^2 term")
    rel = relation * (1 / c)

    # R = g^2 - rel must not involve g at all.
    lead_sq = GradedPoly.from_terms(spec, {tuple(lead_exps): Fraction(1)})
    rest = lead_sq - rel
    for exps, _ in rest.iter_terms():
        if exps[lead_idx] != 0:
            raise UsageError("malformed relation: remainder still involves the leading root")

    max_t = spec.cap // 4 + 1
    rest_pows = [GradedPoly.one(spec)]
    for _ in range(max_t):
        rest_pows.append(rest_pows[-1] * rest)

    out = GradedPoly.zero(spec)
    for exps, coeff in p.iter_terms():
        e = exps[lead_idx]
        t, s = divmod(e, 2)
        if t == 0:
            out = out + GradedPoly.from_terms(spec, {exps: coeff})
            continue
        base = list(exps)
        base[lead_idx] = s
        mono = GradedPoly.from_terms(spec, {tuple(base): coeff})
        out = out + mono * rest_pows[t]
    return out
