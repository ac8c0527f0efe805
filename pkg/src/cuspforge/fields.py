"""Exact scalars: arbitrary-precision rationals and number fields Q[a]/(m(a)).

Rationals are `fractions.Fraction` (canonical by construction: reduced,
positive denominator).  Number-field elements live on an integral power
basis: the generator a is rescaled internally by an integer c so that the
minimal polynomial of c*a is monic with integer coefficients.  An element is
then an integer coefficient vector plus one positive denominator, kept in
lowest terms, so products need integer arithmetic only.

Minimal polynomials must be squarefree but need not be irreducible.
Inverting an element whose representative shares a factor with the modulus
raises `SplitEvent` carrying both factors; callers rerun their computation
in each factor field.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Union

Rationalish = Union[int, Fraction, str]


def fraction(x: Rationalish) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a rational, or None if none exists in Q."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# dense univariate polynomials over Fraction (ascending coefficient lists)
# ---------------------------------------------------------------------------

def utrim(c: list[Fraction]) -> list[Fraction]:
    while c and not c[-1]:
        c.pop()
    return c


def udeg(c: Sequence[Fraction]) -> int:
    return len(c) - 1


def uadd(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return utrim(out)


def uscale(a, s: Fraction):
    if not s:
        return []
    return [v * s for v in a]

def umul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, av in enumerate(a):
        if av:
            for j, bv in enumerate(b):
                if bv:
                    out[i + j] += av * bv
    return utrim(out)


def udivmod(a, b):
    """Quotient and remainder of dense Fraction polynomials."""
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    r = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lcb = b[-1]
    while len(r) >= len(b):
        f = r[-1] / lcb
        k = len(r) - len(b)
        q[k] = f
        for i, bv in enumerate(b):
            r[i + k] -= f * bv
        utrim(r)
        if not r:
            break
        # guard against float-style stagnation (cannot happen with Fractions)
        if len(r) >= len(b) and not r[-1]:
            utrim(r)
    return utrim(q), r


def umonic(a):
    if not a:
        return []
    lc = a[-1]
    if lc == 1:
        return list(a)
    return [v / lc for v in a]


def ugcd(a, b):
    """Monic gcd over Q (Euclid with monic normalisation each step)."""
    a, b = utrim(list(a)), utrim(list(b))
    while b:
        _, r = udivmod(a, b)
        a, b = b, r
    return umonic(a)


def uxgcd(a, b):
    """Extended Euclid: returns (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = utrim(list(a)), utrim(list(b))
    u0, u1 = [Fraction(1)], []
    v0, v1 = [], [Fraction(1)]
    while r1:
        q, r = udivmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, uadd(u0, uscale(umul(q, u1), Fraction(-1)))
        v0, v1 = v1, uadd(v0, uscale(umul(q, v1), Fraction(-1)))
    if not r0:
        return [], u0, v0
    lc = r0[-1]
    inv = 1 / lc
    return uscale(r0, inv), uscale(u0, inv), uscale(v0, inv)


def uderiv(a):
    return utrim([a[i] * i for i in range(1, len(a))])


def usqfree(a):
    """Squarefree part a / gcd(a, a'), monic."""
    if not a:
        raise ZeroDivisionError("squarefree part of zero")
    g = ugcd(a, uderiv(a))
    if udeg(g) == 0:
        return umonic(a)
    q, r = udivmod(a, g)
    assert not r
    return umonic(q)


def ueval(a, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# rational field marker
# ---------------------------------------------------------------------------

class RationalField:
    """The field Q.  Elements are `fractions.Fraction`."""

    degree = 1

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, NFElt):
            q = x.as_fraction()
            if q is None:
                raise TypeError("number-field element does not lie in Q")
            return q
        return Fraction(x)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def describe(self) -> str:
        return "Q"

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")


QQ = RationalField()


# ---------------------------------------------------------------------------
# number fields
# ---------------------------------------------------------------------------

class MinimalPolynomial:
    """Defining polynomial of an extension Q[a]/(m(a)).

    Coefficients ascend by power.  Degree >= 1, nonzero leading coefficient,
    and squarefreeness (gcd with the derivative is constant) are enforced at
    construction; irreducibility is deliberately not checked.
    """

    __slots__ = ("symbol", "coeffs")

    def __init__(self, symbol: str, coeffs: Sequence[Rationalish]):
        cs = utrim([fraction(c) for c in coeffs])
        if udeg(cs) < 1:
            raise ValueError("minimal polynomial must have degree >= 1")
        g = ugcd(cs, uderiv(cs))
        if udeg(g) != 0:
            raise ValueError("minimal polynomial must be squarefree")
        self.symbol = symbol
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: Rationalish) -> Fraction:
        return ueval(list(self.coeffs), fraction(x))

    def __eq__(self, other):
        return (
            isinstance(other, MinimalPolynomial)
            and self.symbol == other.symbol
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.symbol, self.coeffs))

    def __repr__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.symbol if i == 1 else f"{self.symbol}^{i}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            terms.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else ("-" + s[2:] if s.startswith("- ") else "0")


class SplitEvent(ArithmeticError):
    """Raised when inversion exposes a factor of a reducible modulus.

    Carries two minimal polynomials whose product equals the modulus up to a
    nonzero rational unit; this is verified at construction.
    """

    def __init__(self, field: "NumberField", factor_a: MinimalPolynomial, factor_b: MinimalPolynomial):
        prod = umul(list(factor_a.coeffs), list(factor_b.coeffs))
        m = list(field.minimal.coeffs)
        if udeg(prod) != udeg(m):
            raise AssertionError("split factors do not multiply to the modulus")
        unit = m[-1] / prod[-1]
        if uadd(uscale(prod, unit), uscale(m, Fraction(-1))):
            raise AssertionError("split factors do not multiply to the modulus")
        self.field = field
        self.factor_a = factor_a
        self.factor_b = factor_b
        super().__init__(
            f"modulus {field.minimal!r} splits as ({factor_a!r})*({factor_b!r})"
        )


def _factor_int(n: int) -> list[tuple[int, int]]:
    # Trial division; a large leftover is kept whole (safe, possibly
    # non-minimal for the scale computation).
    out = []
    for p in (2, 3, 5):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    p = 7
    while p * p <= n and p < 100000:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 2
    if n > 1:
        out.append((n, 1))
    return out


class NumberField:
    """Q[a]/(m(a)) with exact arithmetic on an integral power basis."""

    def __init__(self, minimal: MinimalPolynomial):
        self.minimal = minimal
        d = minimal.degree
        self.degree = d
        self.symbol = minimal.symbol
        lc = minimal.coeffs[-1]
        # smallest-ish c with c^(d-i) * a_i/a_d integral for all i
        primes: dict[int, int] = {}
        for i in range(d):
            den = (minimal.coeffs[i] / lc).denominator
            if den == 1:
                continue
            k = d - i
            for p, e in _factor_int(den):
                need = -(-e // k)
                if primes.get(p, 0) < need:
                    primes[p] = need
        c = 1
        for p, e in primes.items():
            c *= p ** e
        self.scale = c
        monic = []
        for i in range(d):
            q = minimal.coeffs[i] * c ** (d - i) / lc
            assert q.denominator == 1
            monic.append(q.numerator)
        monic.append(1)
        self._monic = tuple(monic)
        # reduction rows: shat^k = sum_j rows[k-d][j] * shat^j for k = d..2d-2
        row = [-monic[j] for j in range(d)]
        rows = [tuple(row)]
        for _ in range(d + 1, 2 * d - 1):
            prev = rows[-1]
            top = prev[-1]
            nxt = [0] + list(prev[:-1])
            if top:
                r0 = rows[0]
                for j in range(d):
                    nxt[j] += top * r0[j]
            rows.append(tuple(nxt))
        self._rows = tuple(rows)
        self.zero = NFElt(self, (0,) * d, 1)
        self.one = NFElt(self, (1,) + (0,) * (d - 1), 1)
        gen = [0] * d
        gen[1 if d > 1 else 0] = 1
        if d > 1:
            self.gen = NFElt(self, tuple(gen), c)
        else:
            # degree-1 "extension": a is the rational root
            self.gen = self.from_fraction(Fraction(-monic[0], c))

    # -- construction -------------------------------------------------------

    def _make(self, nums: list[int], den: int) -> "NFElt":
        if den < 0:
            den = -den
            nums = [-v for v in nums]
        g = den
        for v in nums:
            if v:
                g = math.gcd(g, v)
                if g == 1:
                    break
        if g > 1:
            den //= g
            nums = [v // g for v in nums]
        return NFElt(self, tuple(nums), den)

    def from_fraction(self, q: Rationalish) -> "NFElt":
        q = fraction(q)
        nums = [q.numerator] + [0] * (self.degree - 1)
        return NFElt(self, tuple(nums), q.denominator)

    def from_coeffs(self, qs: Sequence[Rationalish]) -> "NFElt":
        """Element from coefficients on the a-power basis (ascending)."""
        d = self.degree
        qs = [fraction(q) for q in qs]
        if len(qs) > d:
            # reduce mod m first
            _, rem = udivmod(qs, list(self.minimal.coeffs))
            qs = rem
        rs = [q / self.scale ** i for i, q in enumerate(qs)]
        den = 1
        for r in rs:
            den = den * r.denominator // math.gcd(den, r.denominator)
        nums = [int(r * den) for r in rs] + [0] * (d - len(rs))
        return self._make(nums, den)

    def coerce(self, x) -> "NFElt":
        if isinstance(x, NFElt):
            if x.field == self:
                return x
            raise TypeError("element of a different number field")
        if isinstance(x, (int, Fraction)):
            return self.from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    def project(self, x: "NFElt", target: "NumberField") -> "NFElt":
        """Image of x under Q[a]/(m) -> Q[a]/(f) for a factor f of m."""
        return target.from_coeffs(x.to_coeffs())

    # -- misc ---------------------------------------------------------------

    def describe(self) -> str:
        return f"Q[{self.symbol}]/({self.minimal!r})"

    def __repr__(self):
        return self.describe()

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minimal == other.minimal

    def __hash__(self):
        return hash(self.minimal)


class NFElt:
    """Element of a NumberField: integer vector over one positive denominator."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: NumberField, num: tuple[int, ...], den: int):
        self.field = field
        self.num = num
        self.den = den

    # -- ring ops -----------------------------------------------------------

    def _coerced(self, other):
        if isinstance(other, NFElt):
            if other.field != self.field:
                raise TypeError("number-field mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_fraction(other)
        return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        da, db = self.den, o.den
        g = math.gcd(da, db)
        ma, mb = db // g, da // g
        nums = [a * ma + b * mb for a, b in zip(self.num, o.num)]
        return self.field._make(nums, da * ma)

    __radd__ = __add__

    def __neg__(self):
        return NFElt(self.field, tuple(-v for v in self.num), self.den)

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        f = self.field
        d = f.degree
        na, nb = self.num, o.num
        conv = [0] * (2 * d - 1)
        for i in range(d):
            ai = na[i]
            if ai:
                for j in range(d):
                    bj = nb[j]
                    if bj:
                        conv[i + j] += ai * bj
        out = conv[:d]
        rows = f._rows
        for k in range(d, 2 * d - 1):
            ck = conv[k]
            if ck:
                row = rows[k - d]
                for j in range(d):
                    rj = row[j]
                    if rj:
                        out[j] += ck * rj
        return f._make(out, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "NFElt":
        if not self:
            raise ZeroDivisionError("inversion of zero in a number field")
        f = self.field
        p = [Fraction(v, self.den) for v in self.num]
        utrim(p)
        mhat = [Fraction(v) for v in f._monic]
        g, u, _ = uxgcd(p, mhat)
        if udeg(g) == 0:
            return f._from_hat(u)
        # zero divisor: g is a proper factor of the (rescaled) modulus
        c = f.scale
        fa = MinimalPolynomial(f.symbol, [g[i] * c ** i for i in range(len(g))])
        q, r = udivmod(mhat, g)
        assert not r
        fb = MinimalPolynomial(f.symbol, [q[i] * c ** i for i in range(len(q))])
        raise SplitEvent(f, fa, fb)

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        acc = self.field.one
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    # -- structure ----------------------------------------------------------

    def __bool__(self):
        return any(self.num)

    def __eq__(self, other):
        if isinstance(other, NFElt):
            return (
                self.field == other.field
                and self.num == other.num
                and self.den == other.den
            )
        if isinstance(other, (int, Fraction)):
            q = self.as_fraction()
            return q is not None and q == other
        return NotImplemented

    def __hash__(self):
        q = self.as_fraction()
        if q is not None:
            return hash(q)
        return hash((self.num, self.den))

    def to_coeffs(self) -> tuple[Fraction, ...]:
        """Coefficients on the a-power basis (ascending)."""
        c = self.field.scale
        return tuple(
            Fraction(self.num[i] * c ** i, self.den) for i in range(self.field.degree)
        )

    def as_fraction(self) -> Fraction | None:
        if any(self.num[1:]):
            return None
        return Fraction(self.num[0], self.den)

    def __repr__(self):
        qs = self.to_coeffs()
        sym = self.field.symbol
        terms = []
        for i in range(len(qs) - 1, -1, -1):
            c = qs[i]
            if not c:
                continue
            mono = "" if i == 0 else (sym if i == 1 else f"{sym}^{i}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            terms.append(("- " if c < 0 else "+ ") + body)
        if not terms:
            return "0"
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _from_hat(self, u):
    """Element from Fraction coefficients on the internal (rescaled) basis."""
    d = self.degree
    den = 1
    for q in u:
        den = den * q.denominator // math.gcd(den, q.denominator)
    nums = [int(q * den) for q in u] + [0] * (d - len(u))
    return self._make(nums, den)


NumberField._from_hat = _from_hat
