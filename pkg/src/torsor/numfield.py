"""Exact arithmetic in number fields K = Q[w]/(f(w)).

Elements are stored in the power basis 1, w, ..., w^(d-1) with
``gmpy2.mpq`` coefficients and are always fully reduced modulo the
monic minimal polynomial, so equality is coefficientwise.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
from gmpy2 import mpq, mpz

__all__ = [
    "ComplexApprox",
    "FieldElement",
    "FieldMismatchError",
    "NumberField",
    "QQ",
    "nf_add",
    "nf_embed",
    "nf_inv",
    "nf_mul",
    "parse_rational",
]


class FieldMismatchError(ValueError):
    """Raised when elements of two different fields are combined."""


def parse_rational(value) -> mpq:
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to ``mpq``."""
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise ValueError(f"not a rational literal: {value!r}")
        return mpq(text)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, type(mpz(0)), type(mpq(0)))):
        return mpq(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# dense polynomial helpers over Q, coefficient lists lowest degree first


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = b[-1]
    q = [mpq(0)] * max(len(a) - len(b) + 1, 1)
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a.pop()
    return _trim(q), a


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([mpq(x) for x in out])


def _rational_roots(poly: Sequence[mpq]) -> list[mpq]:
    """Rational roots of a polynomial with rational coefficients."""
    poly = list(poly)
    if poly and poly[0] == 0:
        return [mpq(0)]
    den = 1
    for c in poly:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in poly]
    a0, an = abs(ints[0]), abs(ints[-1])
    roots = []
    for p in _divisors(a0):
        for q in _divisors(an):
            for s in (1, -1):
                x = mpq(s * p, q)
                if sum(c * x**i for i, c in enumerate(ints)) == 0 and x not in roots:
                    roots.append(x)
    return roots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n: int) -> list[int]:
    n = abs(int(n))
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


class NumberField:
    """The field Q[w]/(f) for a monic irreducible f.

    ``min_poly`` lists the coefficients of f lowest degree first, so
    ``NumberField([1, -1, 1])`` is Q[w]/(w^2 - w + 1).  Irreducibility is
    checked by a rational-root test, which is conclusive up to degree 3;
    higher degrees must be passed with ``trusted=True``.
    """

    __slots__ = ("min_poly", "degree", "name", "_tail", "__weakref__")

    def __init__(self, min_poly: Sequence, *, trusted: bool = False, name: str = "w"):
        coeffs = tuple(parse_rational(c) for c in min_poly)
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        degree = len(coeffs) - 1
        if degree > 1:
            if _rational_roots(coeffs):
                raise ValueError("minimal polynomial has a rational root, so it is reducible")
            if degree > 3 and not trusted:
                raise ValueError(
                    f"cannot certify irreducibility in degree {degree}; pass trusted=True"
                )
        if not re.fullmatch(r"[A-Za-z]\w*", name):
            raise ValueError(f"bad generator name {name!r}")
        self.min_poly = coeffs
        self.degree = degree
        self.name = name
        # w^d = -(f_0 + f_1 w + ... + f_{d-1} w^{d-1})
        self._tail = tuple(-c for c in coeffs[:-1])

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberField({self.poly_string()})"

    def poly_string(self) -> str:
        return _format_poly(self.min_poly, self.name)

    # -- constructors ------------------------------------------------------
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError("element belongs to another field")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (list, tuple)):
            if len(value) > self.degree:
                return self.from_poly([parse_rational(c) for c in value])
            coeffs = [parse_rational(c) for c in value]
            coeffs += [mpq(0)] * (self.degree - len(coeffs))
            return FieldElement(self, tuple(coeffs))
        return self.from_rational(value)

    def from_rational(self, value) -> "FieldElement":
        q = parse_rational(value)
        return FieldElement(self, (q,) + (mpq(0),) * (self.degree - 1))

    def from_poly(self, coeffs: Sequence) -> "FieldElement":
        """Reduce an arbitrary-degree polynomial in w into the field."""
        return FieldElement(self, self._reduce([parse_rational(c) for c in coeffs]))

    def parse(self, text: str) -> "FieldElement":
        """Parse ``"85/16*w^5 - 33/8*w^4 + ... - 11"`` style strings."""
        return self.from_poly(_parse_poly(text, self.name))

    @property
    def zero(self) -> "FieldElement":
        return self.from_rational(0)

    @property
    def one(self) -> "FieldElement":
        return self.from_rational(1)

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.from_rational(-self.min_poly[0])
        return FieldElement(self, (mpq(0), mpq(1)) + (mpq(0),) * (self.degree - 2))

    def _reduce(self, p: list) -> tuple:
        d = self.degree
        p = list(p)
        tail = self._tail
        for k in range(len(p) - 1, d - 1, -1):
            c = p[k]
            if c:
                base = k - d
                for j in range(d):
                    t = tail[j]
                    if t:
                        p[base + j] += c * t
        p = p[:d]
        p += [mpq(0)] * (d - len(p))
        return tuple(p)

    def roots(self, precision_bits: int = 53) -> list:
        """Complex roots of the minimal polynomial, sorted by (re, im)."""
        return list(_field_roots(self.min_poly, precision_bits))


def _format_poly(coeffs: Sequence[mpq], var: str) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = format_rational(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*(\*)?\s*)?(?:([A-Za-z]\w*)\s*(?:\^\s*(\d+))?)?\s*"
)


def _parse_poly(text: str, var: str) -> list[mpq]:
    s = text.strip()
    if not s:
        raise ValueError("empty field element string")
    pos = 0
    coeffs: dict[int, mpq] = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse field element {text!r} at {pos}")
        sign, num, star, name, exp = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing operator in {text!r}")
        if num is None and name is None:
            raise ValueError(f"dangling sign in {text!r}")
        if star and name is None:
            raise ValueError(f"dangling '*' in {text!r}")
        if name is not None and name != var:
            raise ValueError(f"unknown symbol {name!r} in {text!r}; expected {var!r}")
        c = mpq(num) if num is not None else mpq(1)
        if sign == "-":
            c = -c
        k = 0 if name is None else (int(exp) if exp is not None else 1)
        coeffs[k] = coeffs.get(k, mpq(0)) + c
        pos = m.end()
        first = False
    top = max(coeffs)
    return [coeffs.get(k, mpq(0)) for k in range(top + 1)]


@lru_cache(maxsize=64)
def _field_roots(min_poly: tuple, precision_bits: int) -> tuple:
    prec = max(int(precision_bits), 53)
    with mpmath.workprec(prec + 64):
        coeffs_high = [mpmath.mpf(int(c.numerator)) / int(c.denominator) for c in reversed(min_poly)]
        try:
            raw = mpmath.polyroots(coeffs_high, maxsteps=400, extraprec=2 * prec)
        except mpmath.libmp.libhyper.NoConvergence as exc:  # pragma: no cover
            raise ArithmeticError("root finding did not converge") from exc
        if not isinstance(raw, list):
            raw = [raw]
        polished = []
        dpoly = [c * (len(coeffs_high) - 1 - i) for i, c in enumerate(coeffs_high[:-1])]
        for r in raw:
            z = mpmath.mpc(r)
            for _ in range(8):
                fz = mpmath.polyval(coeffs_high, z)
                dz = mpmath.polyval(dpoly, z)
                if dz == 0:
                    break
                z = z - fz / dz
            # real roots come back with round-off imaginary parts
            if abs(z.imag) <= mpmath.mpf(2) ** (-prec) * max(1, abs(z.real)):
                z = mpmath.mpc(z.real, 0)
            polished.append(z)
    polished.sort(key=lambda z: (round(float(z.real), 12), round(float(z.imag), 12)))
    return tuple(polished)


class FieldElement:
    """Immutable element of a :class:`NumberField`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    # -- coercion ----------------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(
                    f"{self.field!r} and {other.field!r} are different fields"
                )
            return other
        try:
            return self.field.from_rational(other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            try:
                q = parse_rational(other)
            except TypeError:
                return NotImplemented
            return FieldElement(self.field, tuple(a * q for a in self.coeffs))
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        d = self.field.degree
        if d == 1:
            return FieldElement(self.field, (a[0] * b[0],))
        prod = [mpq(0)] * (2 * d - 1)
        for i in range(d):
            x = a[i]
            if x:
                for j in range(d):
                    y = b[j]
                    if y:
                        prod[i + j] += x * y
        return FieldElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        field = self.field
        if field.degree == 1:
            return FieldElement(field, (1 / self.coeffs[0],))
        # extended Euclid: s*a + t*f = 1
        r0, r1 = list(field.min_poly), _trim(list(self.coeffs))
        s0, s1 = [], [mpq(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        return field.from_poly([x / c for x in s1])

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            q = parse_rational(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, tuple(a / q for a in self.coeffs))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = self.field.one
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison and predicates -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        try:
            q = parse_rational(other)
        except TypeError:
            return NotImplemented
        return self.coeffs[0] == q and not any(self.coeffs[1:])

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        c = self.coeffs[0]
        return Fraction(int(c.numerator), int(c.denominator))

    # -- text forms ----------------------------------------------------------
    def __str__(self):
        return _format_poly(self.coeffs, self.field.name)

    def __repr__(self):
        return f"FieldElement({self})"

    def to_strings(self) -> list[str]:
        """Coefficient list as ``"p/q"`` strings, lowest degree first."""
        return [format_rational(c) for c in self.coeffs]

    # -- numerics -----------------------------------------------------------
    def embed(self, root_index: int, precision_bits: int = 53) -> "ComplexApprox":
        return nf_embed(self, root_index, precision_bits)

    def embeddings(self, precision_bits: int = 53) -> list["ComplexApprox"]:
        return [nf_embed(self, i, precision_bits) for i in range(self.field.degree)]


@dataclass(frozen=True)
class ComplexApprox:
    re: float
    im: float
    precision_bits: int = 53

    def __post_init__(self):
        if not (mpmath.isfinite(self.re) and mpmath.isfinite(self.im)):
            raise ValueError("non-finite embedding value")
        if self.precision_bits < 53:
            raise ValueError("precision_bits must be at least 53")

    def __complex__(self):
        return complex(self.re, self.im)

    def format(self, digits: int = 15) -> str:
        re_s = f"{self.re:.{digits}g}"
        if self.im == 0:
            return re_s
        sign = "-" if self.im < 0 else "+"
        return f"{re_s} {sign} {abs(self.im):.{digits}g}*I"


def nf_add(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.field != b.field:
        raise FieldMismatchError("nf_add: elements of different fields")
    return a + b


def nf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.field != b.field:
        raise FieldMismatchError("nf_mul: elements of different fields")
    return a * b


def nf_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def nf_embed(a: FieldElement, root_index: int, precision_bits: int = 53) -> ComplexApprox:
    """Value of ``a`` at the ``root_index``-th root of the minimal polynomial."""
    d = a.field.degree
    if not 0 <= root_index < d:
        raise IndexError(f"root_index {root_index} out of range for degree {d}")
    prec = max(int(precision_bits), 53)
    root = _field_roots(a.field.min_poly, prec)[root_index]
    with mpmath.workprec(prec + 64):
        acc = mpmath.mpc(0)
        for c in reversed(a.coeffs):
            acc = acc * root + mpmath.mpf(int(c.numerator)) / int(c.denominator)
        im = acc.imag
        # below the working precision: the value is real at this root
        if abs(im) <= mpmath.mpf(2) ** (-prec) * max(1, abs(acc.real)):
            im = mpmath.mpf(0)
        return ComplexApprox(float(acc.real), float(im), prec)


QQ = NumberField([0, 1], name="w")
"""The rationals, as the degree-one field Q[w]/(w)."""


def elements(field: NumberField, values: Iterable) -> list[FieldElement]:
    return [field(v) for v in values]
