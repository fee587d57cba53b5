"""Dense univariate polynomials over an exact coefficient field.

The coefficient field is duck-typed: it must provide ``zero``, ``one``,
``from_int`` and elements supporting ``+ - * /``, equality and hashing.
This lets the same class serve F_p, F_q, F_p(u) and their fraction fields.
"""

from __future__ import annotations

from .errors import InputError


class Poly:
    """Immutable dense polynomial; ``coeffs[i]`` is the x^i coefficient.

    Trailing zeros are stripped; the zero polynomial has an empty
    coefficient tuple and degree -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        clean = list(coeffs)
        while clean and not clean[-1]:
            clean.pop()
        self.field = field
        self.coeffs = tuple(clean)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, field) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field) -> "Poly":
        return cls(field, (field.one,))

    @classmethod
    def x(cls, field) -> "Poly":
        return cls(field, (field.zero, field.one))

    @classmethod
    def constant(cls, field, value) -> "Poly":
        return cls(field, (value,))

    @classmethod
    def from_ints(cls, field, ints) -> "Poly":
        return cls(field, [field.from_int(n) for n in ints])

    # -- structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def leading(self):
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def sort_key(self):
        """Total order: degree first, then coefficient keys from the top."""
        return (self.degree, tuple(c.sort_key() for c in reversed(self.coeffs)))

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.field, out)

    def __neg__(self) -> "Poly":
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.coeffs or not other.coeffs:
            return Poly.zero(self.field)
        zero = self.field.zero
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    def scale(self, c) -> "Poly":
        return Poly(self.field, [c * a for a in self.coeffs])

    def __pow__(self, n: int) -> "Poly":
        result = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        field = self.field
        rem = list(self.coeffs)
        dd = divisor.degree
        lead_inv = field.one / divisor.leading()
        quo = [field.zero] * max(0, len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = c * lead_inv
            quo[i - dd] = q
            for j, d in enumerate(divisor.coeffs):
                rem[i - dd + j] = rem[i - dd + j] - q * d
        return Poly(field, quo), Poly(field, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise InputError("polynomial division is not exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.one / self.leading())

    def derivative(self) -> "Poly":
        field = self.field
        return Poly(field, [field.from_int(i) * c for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, point):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def shift_up(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly(self.field, (self.field.zero,) * k + self.coeffs)

    def substitute_power(self, k: int) -> "Poly":
        """Return f(x^k)."""
        if k == 1 or self.is_zero():
            return self
        zero = self.field.zero
        out = [zero] * (self.degree * k + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return Poly(self.field, out)

    def map_coeffs(self, fn, field=None) -> "Poly":
        return Poly(field if field is not None else self.field,
                    [fn(c) for c in self.coeffs])


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor (monic(f) when g = 0)."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_ext_gcd(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (d, s, t) with d = gcd monic and s*f + t*g = d."""
    field = f.field
    r0, r1 = f, g
    s0, s1 = Poly.one(field), Poly.zero(field)
    t0, t1 = Poly.zero(field), Poly.one(field)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = field.one / r0.leading()
    unit = Poly.constant(field, c)
    return r0.scale(c), s0 * unit, t0 * unit


def pow_mod(base: Poly, exponent: int, modulus: Poly) -> Poly:
    result = Poly.one(base.field)
    acc = base % modulus
    while exponent:
        if exponent & 1:
            result = (result * acc) % modulus
        acc = (acc * acc) % modulus
        exponent >>= 1
    return result


def _factor_str(c) -> str:
    s = c.as_factor_str() if hasattr(c, "as_factor_str") else str(c)
    return s


def poly_str_compact(f: Poly, var: str) -> str:
    """Ascending, whitespace-free rendering: "1+t", "t^2", "(u+1)*t"."""
    if f.is_zero():
        return "0"
    parts = []
    for i, c in enumerate(f.coeffs):
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
            continue
        power = var if i == 1 else f"{var}^{i}"
        if c == f.field.one:
            parts.append(power)
        else:
            parts.append(f"{_factor_str(c)}*{power}")
    return "+".join(parts)


def poly_str_pretty(f: Poly, var: str = "x") -> str:
    """Descending, spaced rendering for reports: "x^2 - 3"."""
    if f.is_zero():
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = f.coeff(i)
        if not c:
            continue
        s = str(c)
        negative = s.startswith("-")
        mag = s[1:] if negative else s
        if i == 0:
            term = mag
        else:
            power = var if i == 1 else f"{var}^{i}"
            if mag == "1":
                term = power
            else:
                mag_f = _factor_str(c if not negative else -c)
                term = f"{mag_f}*{power}"
        if not parts:
            parts.append(f"-{term}" if negative else term)
        else:
            parts.append(f"- {term}" if negative else f"+ {term}")
    return " ".join(parts)


class PolyFraction:
    """Reduced fraction of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, _normalized: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lead = den.leading()
            if lead != den.field.one:
                inv = den.field.one / lead
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: Poly) -> "PolyFraction":
        return cls(p, Poly.one(p.field), _normalized=True)

    @property
    def field(self):
        return self.den.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, PolyFraction)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def sort_key(self):
        return (self.num.sort_key(), self.den.sort_key())

    def __repr__(self):
        return f"PolyFraction({self.num!r}, {self.den!r})"

    def __add__(self, other: "PolyFraction") -> "PolyFraction":
        return PolyFraction(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    def __neg__(self) -> "PolyFraction":
        return PolyFraction(-self.num, self.den, _normalized=True)

    def __sub__(self, other: "PolyFraction") -> "PolyFraction":
        return self + (-other)

    def __mul__(self, other: "PolyFraction") -> "PolyFraction":
        return PolyFraction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "PolyFraction") -> "PolyFraction":
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return PolyFraction(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int) -> "PolyFraction":
        if n < 0:
            return PolyFraction(self.den ** (-n), self.num ** (-n))
        return PolyFraction(self.num ** n, self.den ** n, _normalized=True)
