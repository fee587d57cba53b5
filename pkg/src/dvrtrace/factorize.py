"""Factorization and separability analysis over the residue fields.

Finite fields get the standard distinct-degree / equal-degree pipeline with
a seeded splitting generator, so output is reproducible. F_p(u) gets a
bounded trial-divisor search after clearing denominators; the coefficient
bounds come from the Newton polygon at the infinite place, so a completed
search is a proof of irreducibility. Inputs past the supported bounds
raise CapabilityError rather than risk a wrong answer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapabilityError, InputError, InternalError
from .fields import ExtField, PrimeField, RationalFunctionField, finite_field
from .polys import Poly, poly_gcd, pow_mod

RATFUNC_X_DEGREE_CAP = 6
RATFUNC_ENUM_CAP = 200_000
_EDF_SEED = 0x5EED


@dataclass(frozen=True)
class FactorList:
    """Complete factorization ``unit * prod(poly^mult)`` of the input."""

    unit: object
    factors: tuple  # ((Poly, int), ...) sorted by degree then coefficients

    def expand(self) -> Poly:
        field = self.factors[0][0].field if self.factors else None
        if field is None:
            raise InputError("cannot expand an empty factorization")
        out = Poly.constant(field, self.unit)
        for poly, mult in self.factors:
            out = out * poly ** mult
        return out

    def is_prime_power(self) -> bool:
        return len(self.factors) == 1

    def distinct_count(self) -> int:
        return len(self.factors)


def _sorted_factors(acc: dict) -> tuple:
    return tuple(sorted(acc.items(), key=lambda item: item[0].sort_key()))


# ---------------------------------------------------------------------------
# finite fields
# ---------------------------------------------------------------------------

def _frobenius_contract(f: Poly) -> Poly:
    """For f with f' = 0 over a perfect field, return h with h^p = f."""
    field = f.field
    p = field.char
    out = []
    for i, c in enumerate(f.coeffs):
        if i % p == 0:
            out.append(field.pth_root(c))
        elif c:
            raise InternalError("contract called with nonzero derivative")
    return Poly(field, out)


def _edf_split(h: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Split a product of distinct degree-d irreducibles into its factors."""
    if h.degree == d:
        return [h]
    field = h.field
    q = field.order
    while True:
        r = Poly(field, [field.sample(rng) for _ in range(h.degree)])
        if r.degree < 1:
            continue
        if q % 2 == 1:
            s = pow_mod(r, (q ** d - 1) // 2, h) - Poly.one(field)
        else:
            # char 2: additive trace of r over F_2 within each factor
            k = q.bit_length() - 1
            s = Poly.zero(field)
            acc = r % h
            for _ in range(k * d):
                s = (s + acc) % h
                acc = (acc * acc) % h
        g = poly_gcd(s, h)
        if 0 < g.degree < h.degree:
            return _edf_split(g, d, rng) + _edf_split(h.exact_div(g), d, rng)


def _factor_squarefree_finite(f: Poly) -> list[Poly]:
    """Irreducible factors of a monic squarefree f over a finite field."""
    field = f.field
    q = field.order
    rng = random.Random((_EDF_SEED, q, f.degree))
    out = []
    work = f
    x = Poly.x(field)
    frob = pow_mod(x, q, work)
    d = 1
    while work.degree >= 2 * d:
        g = poly_gcd(frob - x, work)
        if g.degree > 0:
            out.extend(_edf_split(g, d, rng))
            work = work.exact_div(g)
            frob = frob % work
        d += 1
        if work.degree >= 2 * d:
            frob = pow_mod(frob, q, work)
    if work.degree > 0:
        out.append(work)
    return out


def _factor_finite(f: Poly) -> dict:
    acc: dict[Poly, int] = {}

    def collect(g: Poly, mult: int):
        if g.degree <= 0:
            return
        gp = g.derivative()
        if gp.is_zero():
            collect(_frobenius_contract(g), mult * g.field.char)
            return
        squarefree = g.exact_div(poly_gcd(g, gp))
        for q in _factor_squarefree_finite(squarefree.monic()):
            count = 0
            while True:
                quo, rem = g.divmod(q)
                if rem.is_zero():
                    g = quo
                    count += 1
                else:
                    break
            acc[q] = acc.get(q, 0) + count * mult
        collect(g, mult)

    collect(f, 1)
    return acc


# ---------------------------------------------------------------------------
# F_p(u): bounded search over F_p[u][x]
# ---------------------------------------------------------------------------

def _lcm_poly(a: Poly, b: Poly) -> Poly:
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def _bivar_divmod(f: list[Poly], g: list[Poly]) -> tuple[list[Poly], list[Poly]]:
    """Division in F_p[u][x] by g monic in x; coefficient lists are u-polys."""
    base = g[-1].field
    rem = list(f)
    dg = len(g) - 1
    quo = [Poly.zero(base)] * max(0, len(rem) - dg)
    for i in range(len(rem) - 1, dg - 1, -1):
        c = rem[i]
        if c.is_zero():
            continue
        quo[i - dg] = c
        for j, d in enumerate(g):
            rem[i - dg + j] = rem[i - dg + j] - c * d
    while rem and rem[-1].is_zero():
        rem.pop()
    return quo, rem


def _iter_u_polys(base: PrimeField, max_deg: int):
    p = base.p
    for count in range(p ** (max_deg + 1)):
        digits, n = [], count
        for _ in range(max_deg + 1):
            n, r = divmod(n, p)
            digits.append(r)
        yield Poly.from_ints(base, digits)


def _factor_integral_bivar(f: list[Poly]) -> list[list[Poly]]:
    """Factor f in F_p[u][x], f monic in x, into monic irreducible factors.

    Minimal-degree divisor search: the first divisor found is irreducible.
    Coefficient u-degree bounds follow from the root-degree bound
    rho = max deg_u(f_i) / (n - i), which every monic divisor obeys.
    """
    n = len(f) - 1
    if n <= 1:
        return [f] if n == 1 else []
    base = f[-1].field
    p = base.p
    rho = Fraction(0)
    for i in range(n):
        if not f[i].is_zero():
            rho = max(rho, Fraction(f[i].degree, n - i))
    for d in range(1, n // 2 + 1):
        bounds = [int((d - j) * rho) for j in range(d)]
        total = 1
        for b in bounds:
            total *= p ** (b + 1)
        if total > RATFUNC_ENUM_CAP:
            raise CapabilityError(
                f"trial factorization over F_{p}(u) needs {total} candidates "
                f"at degree {d} (cap {RATFUNC_ENUM_CAP})")
        coeff_choices = [list(_iter_u_polys(base, b)) for b in bounds]

        def candidates(idx: int, chosen: list[Poly]):
            if idx == d:
                yield chosen + [Poly.one(base)]
                return
            for c in coeff_choices[idx]:
                yield from candidates(idx + 1, chosen + [c])

        for g in candidates(0, []):
            quo, rem = _bivar_divmod(f, g)
            if not rem:
                return [g] + _factor_integral_bivar(quo)
    return [f]


def _factor_ratfunc(f: Poly) -> dict:
    field: RationalFunctionField = f.field
    if f.degree > RATFUNC_X_DEGREE_CAP:
        raise CapabilityError(
            f"factorization over F_{field.p}(u) supports x-degree "
            f"<= {RATFUNC_X_DEGREE_CAP}, got {f.degree}")
    base = field.base
    monic = f.monic()
    n = monic.degree
    den = Poly.one(base)
    for c in monic.coeffs:
        den = _lcm_poly(den, c.frac.den)
    big_d = field.from_base_poly(den)
    # F(x) = den^n * monic(x/den) is monic with coefficients in F_p[u]
    integral = []
    for i, c in enumerate(monic.coeffs):
        scaled = c * big_d ** (n - i)
        if not scaled.is_polynomial():
            raise InternalError("denominator clearing failed")
        integral.append(scaled.frac.num)
    acc: dict[Poly, int] = {}
    for g in _factor_integral_bivar(integral):
        # map back through x -> den * x and renormalize to monic
        dg = len(g) - 1
        coeffs = [field.from_base_poly(g[j]) * big_d ** (j - dg) for j in range(dg + 1)]
        poly = Poly(field, coeffs)
        acc[poly] = acc.get(poly, 0) + 1
    return acc


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def factor(f: Poly) -> FactorList:
    """Complete factorization into monic irreducibles, deterministic order."""
    if f.is_zero():
        raise InputError("cannot factor the zero polynomial")
    unit = f.leading()
    if f.degree == 0:
        return FactorList(unit, ())
    monic = f.monic()
    if getattr(f.field, "is_finite", False):
        acc = _factor_finite(monic)
    elif isinstance(f.field, RationalFunctionField):
        acc = _factor_ratfunc(monic)
    else:
        raise CapabilityError(f"no factorization over {f.field!r}")
    result = FactorList(unit, _sorted_factors(acc))
    if result.expand() != f:
        raise InternalError("factorization does not reproduce its input")
    return result


def is_irreducible(f: Poly) -> bool:
    if f.degree < 1:
        return False
    if isinstance(f.field, PrimeField) or isinstance(f.field, ExtField):
        return _is_irreducible_finite(f)
    fl = factor(f)
    return len(fl.factors) == 1 and fl.factors[0][1] == 1


def _is_irreducible_finite(f: Poly) -> bool:
    """Rabin's irreducibility test over F_q."""
    field = f.field
    q = field.order
    m = f.degree
    x = Poly.x(field)
    work = f.monic()
    if pow_mod(x, q ** m, work) != x % work:
        return False
    primes, k = [], m
    d = 2
    while d * d <= k:
        if k % d == 0:
            primes.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        primes.append(k)
    for ell in primes:
        g = pow_mod(x, q ** (m // ell), work) - x
        if poly_gcd(g, work).degree > 0:
            return False
    return True


def separability_profile(g: Poly) -> tuple[int, Poly]:
    """Largest m with g(x) = h(x^(p^m)) and h separable; h irreducible.

    The separable degree of field[x]/(g) over field equals deg h.
    """
    if not g.is_monic():
        g = g.monic()
    if not is_irreducible(g):
        raise InputError("separability profile requires an irreducible input")
    char = g.field.char
    if char == 0:
        return 0, g
    m = 0
    h = g
    while h.derivative().is_zero():
        contracted = []
        for i, c in enumerate(h.coeffs):
            if i % char == 0:
                contracted.append(c)
            elif c:
                raise InternalError("zero derivative with stray coefficients")
        h = Poly(g.field, contracted)
        m += 1
    if poly_gcd(h, h.derivative()).degree != 0:
        raise InternalError("inseparable core after full contraction")
    return m, h


def squarefree_part_degree(f: Poly) -> int:
    """Number of distinct roots of f in an algebraic closure (finite fields).

    Uses only gcd arithmetic and Frobenius contraction, independently of
    factor(); over a perfect field the radical is separable, so its degree
    counts geometric roots.
    """
    if f.is_zero():
        raise InputError("zero polynomial has no root count")
    if not getattr(f.field, "is_finite", False):
        raise CapabilityError("root counting is supported over finite fields only")
    return _radical(f.monic()).degree


def _radical(f: Poly) -> Poly:
    if f.degree <= 0:
        return Poly.one(f.field)
    fp = f.derivative()
    if fp.is_zero():
        return _radical(_frobenius_contract(f))
    tame_part = f.exact_div(poly_gcd(f, fp)).monic()
    rest = f
    g = poly_gcd(rest, tame_part)
    while g.degree > 0:
        rest = rest.exact_div(g)
        g = poly_gcd(rest, tame_part)
    return (tame_part * _radical(rest.monic())).monic()


# ---------------------------------------------------------------------------
# finite-field extensions with explicit embeddings
# ---------------------------------------------------------------------------

def extend_field(k, m: int):
    """Return (K, embed) with K/k of degree m and embed a field embedding."""
    if m == 1:
        return k, lambda a: a
    if isinstance(k, PrimeField):
        big = finite_field(k.p, m)
        return big, lambda a: big.from_int(a.value)
    if isinstance(k, ExtField):
        big = finite_field(k.p, k.degree * m)
        mod_in_big = Poly(big, [big.from_int(c.value) for c in k.modulus.coeffs])
        linears = [poly for poly, _ in factor(mod_in_big).factors if poly.degree == 1]
        if len(linears) != k.degree:
            raise InternalError("modulus does not split in the extension")
        root = -linears[0].coeff(0)
        def embed(a, _root=root, _big=big):
            acc = _big.zero
            for c in reversed(a.poly.coeffs):
                acc = acc * _root + _big.from_int(c.value)
            return acc
        return big, embed
    raise CapabilityError(f"cannot extend {k!r}")
