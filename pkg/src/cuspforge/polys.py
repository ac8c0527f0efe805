"""Sparse multivariate polynomials over an exact field, plus monomial orders.

A polynomial is an immutable mapping from exponent tuples to nonzero field
coefficients, tied to a ring (ordered variable list + coefficient field).
The representation is sparse-distributed: the production polynomials here
have few terms in high degree, so dense layouts would waste both memory and
coefficient work.

Monomial orders are global total orders encoded as integer sort keys
(bigger key = bigger monomial), so leading-term hunts are plain integer
comparisons.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from cuspforge.fields import QQ, NFElt, NumberField, RationalField, fraction

Scalar = Union[int, Fraction, NFElt]

_EXP_BITS = 16
_EXP_MASK = (1 << _EXP_BITS) - 1


class MonomialOrder:
    """Base for global monomial orders; provides packed integer keys."""

    name = "?"

    def key_func(self, nvars: int):
        raise NotImplementedError

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(self) is type(other) and repr(self) == repr(other)

    def __hash__(self):
        return hash(repr(self))


class _Grevlex(MonomialOrder):
    name = "grevlex"

    def key_func(self, nvars: int):
        B = _EXP_BITS
        M = _EXP_MASK

        def key(e, _B=B, _M=M, _n=nvars):
            k = sum(e)
            for i in range(_n - 1, -1, -1):
                k = (k << _B) | (_M - e[i])
            return k

        return key


class _Lex(MonomialOrder):
    name = "lex"

    def key_func(self, nvars: int):
        B = _EXP_BITS

        def key(e, _B=B, _n=nvars):
            k = 0
            for i in range(_n):
                k = (k << _B) | e[i]
            return k

        return key


class BlockOrder(MonomialOrder):
    """Eliminates the first k variables: compare total degree in the first
    block, grevlex within it, then grevlex on the rest."""

    def __init__(self, k: int):
        if k < 0:
            raise ValueError("block size must be >= 0")
        self.k = k
        self.name = f"block:{k}"

    def key_func(self, nvars: int):
        B = _EXP_BITS
        M = _EXP_MASK
        k = self.k
        if k > nvars:
            raise ValueError("block size exceeds variable count")

        def key(e, _B=B, _M=M, _k=k, _n=nvars):
            acc = sum(e[:_k])
            for i in range(_k - 1, -1, -1):
                acc = (acc << _B) | (_M - e[i])
            acc = (acc << _B) | sum(e[_k:])
            for i in range(_n - 1, _k - 1, -1):
                acc = (acc << _B) | (_M - e[i])
            return acc

        return key


GREVLEX = _Grevlex()
LEX = _Lex()


def block_order(k: int) -> BlockOrder:
    return BlockOrder(k)


def order_from_name(name: str) -> MonomialOrder:
    if name == "grevlex":
        return GREVLEX
    if name == "lex":
        return LEX
    if name.startswith("block:"):
        return BlockOrder(int(name.split(":", 1)[1]))
    raise ValueError(f"unknown monomial order {name!r}")


class PolyRing:
    """An ordered variable list over an exact coefficient field."""

    __slots__ = ("vars", "field", "_index", "_key_cache")

    def __init__(self, vars: Sequence[str], field=QQ):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ValueError("duplicate variable names")
        if not vars:
            raise ValueError("a ring needs at least one variable")
        self.vars = vars
        self.field = field
        self._index = {v: i for i, v in enumerate(vars)}
        self._key_cache: dict[MonomialOrder, object] = {}

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def key_func(self, order: MonomialOrder):
        f = self._key_cache.get(order)
        if f is None:
            f = order.key_func(self.nvars)
            self._key_cache[order] = f
        return f

    # -- element constructors ------------------------------------------------

    def coerce_scalar(self, c) -> Scalar:
        return self.field.coerce(c)

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.coerce_scalar(c)
        if not c:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Polynomial":
        i = self._index.get(name)
        if i is None:
            raise KeyError(f"unknown variable {name!r}")
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.coerce_scalar(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.var(v) for v in self.vars]

    def from_terms(self, terms: Mapping[tuple, Scalar]) -> "Polynomial":
        clean = {}
        for e, c in terms.items():
            c = self.coerce_scalar(c)
            if c:
                clean[tuple(e)] = c
        return Polynomial(self, clean)

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        return self.from_terms({tuple(exps): coeff})

    # -- derived rings ---------------------------------------------------------

    def with_prefix_vars(self, extra: Sequence[str]) -> "PolyRing":
        return PolyRing(tuple(extra) + self.vars, self.field)

    def subring(self, keep: Sequence[str]) -> "PolyRing":
        keep = tuple(keep)
        for v in keep:
            if v not in self._index:
                raise KeyError(f"{v!r} is not a variable of this ring")
        return PolyRing(keep, self.field)

    def reordered(self, new_order: Sequence[str]) -> "PolyRing":
        if sorted(new_order) != sorted(self.vars):
            raise ValueError("reordering must permute the variable set")
        return PolyRing(tuple(new_order), self.field)

    def fresh_name(self, base: str) -> str:
        if base not in self._index:
            return base
        i = 0
        while f"{base}{i}" in self._index:
            i += 1
        return f"{base}{i}"

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.vars == other.vars
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.vars, self.field))

    def __repr__(self):
        return f"{self.field!r}[{','.join(self.vars)}]"


class Polynomial:
    """Immutable sparse polynomial; `terms` maps exponent tuple -> coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- basic structure -------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Scalar:
        if not self.terms:
            return self.ring.coerce_scalar(0)
        z = (0,) * self.ring.nvars
        if set(self.terms) != {z}:
            raise ValueError("not a constant polynomial")
        return self.terms[z]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> int:
        i = self.ring._index[var]
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def variables_used(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(self.ring.vars[i])
        return used

    def is_homogeneous(self, vars: Sequence[str] | None = None) -> tuple[bool, int | None]:
        """(True, d) when all terms share subset-degree d; zero gives (True, None)."""
        if not self.terms:
            return True, None
        if vars is None:
            idx = range(self.ring.nvars)
        else:
            idx = [self.ring._index[v] for v in vars]
        degs = {sum(e[i] for i in idx) for e in self.terms}
        if len(degs) == 1:
            return True, degs.pop()
        return False, None

    def coeff(self, exps: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exps), self.ring.coerce_scalar(0))

    def leading(self, order: MonomialOrder = GREVLEX):
        """(exponent, coefficient) of the leading term, or None if zero."""
        if not self.terms:
            return None
        keyf = self.ring.key_func(order)
        e = max(self.terms, key=keyf)
        return e, self.terms[e]

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[tuple, Scalar]]:
        keyf = self.ring.key_func(order)
        return [(e, self.terms[e]) for e in sorted(self.terms, key=keyf, reverse=True)]

    # -- arithmetic ------------------------------------------------------------

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ValueError("ring mismatch")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        self._check_ring(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for e, c in b.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring.coerce_scalar(other)
            if not c:
                return self.ring.zero
            return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()})
        self._check_ring(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                s = out.get(e)
                if s is None:
                    if c:
                        out[e] = c
                else:
                    s = s + c
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        acc = self.ring.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    # -- calculus / substitution ------------------------------------------------

    def derivative(self, var: str) -> "Polynomial":
        i = self.ring._index.get(var)
        if i is None:
            raise KeyError(f"unknown variable {var!r}")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                nc = c * k
                s = out.get(ne)
                out[ne] = nc if s is None else s + nc
        return Polynomial(self.ring, {e: c for e, c in out.items() if c})

    def substitute(self, assignment: Mapping[str, object]) -> "Polynomial":
        """Simultaneous substitution; values are polynomials or scalars of this ring."""
        ring = self.ring
        subs: dict[int, Polynomial] = {}
        for v, val in assignment.items():
            i = ring._index.get(v)
            if i is None:
                raise KeyError(f"unknown variable {v!r}")
            subs[i] = val if isinstance(val, Polynomial) else ring.constant(val)
            if subs[i].ring != ring:
                raise ValueError("ring mismatch in substitution value")
        powers: dict[int, list[Polynomial]] = {i: [ring.one] for i in subs}
        out = ring.zero
        for e, c in self.terms.items():
            rest = list(e)
            fac = None
            for i, p in subs.items():
                k = e[i]
                rest[i] = 0
                if k:
                    cache = powers[i]
                    while len(cache) <= k:
                        cache.append(cache[-1] * p)
                    fac = cache[k] if fac is None else fac * cache[k]
            base = Polynomial(ring, {tuple(rest): c})
            out = out + (base if fac is None else base * fac)
        return out

    def restrict(self, assignment: Mapping[str, object]) -> "Polynomial":
        """Substitute scalars for some variables and drop them from the ring."""
        ring = self.ring
        vals = {}
        for v, s in assignment.items():
            if v not in ring._index:
                raise KeyError(f"unknown variable {v!r}")
            vals[ring._index[v]] = ring.coerce_scalar(s)
        keep = [i for i in range(ring.nvars) if i not in vals]
        if not keep:
            raise ValueError("restriction must keep at least one variable")
        sub = ring.subring([ring.vars[i] for i in keep])
        out: dict = {}
        for e, c in self.terms.items():
            f = c
            dead = False
            for i, s in vals.items():
                k = e[i]
                if k:
                    if not s:
                        dead = True
                        break
                    f = f * s ** k
            if dead:
                continue
            ne = tuple(e[i] for i in keep)
            acc = out.get(ne)
            acc = f if acc is None else acc + f
            if acc:
                out[ne] = acc
            elif ne in out:
                del out[ne]
        return Polynomial(sub, out)

    def evaluate(self, assignment: Mapping[str, object]) -> Scalar:
        """Full evaluation at a point; every variable must be assigned."""
        ring = self.ring
        vals = []
        for v in ring.vars:
            if v not in assignment:
                raise KeyError(f"missing value for {v!r}")
            vals.append(ring.coerce_scalar(assignment[v]))
        total = ring.coerce_scalar(0)
        for e, c in self.terms.items():
            f = c
            for i, k in enumerate(e):
                if k:
                    f = f * vals[i] ** k
            total = total + f
        return total

    def to_ring(self, target: PolyRing, rename: Mapping[str, str] | None = None) -> "Polynomial":
        """Re-express in another ring by variable name (injective embedding)."""
        rename = rename or {}
        where = []
        for i, v in enumerate(self.ring.vars):
            tv = rename.get(v, v)
            j = target._index.get(tv)
            where.append(j)
        out: dict = {}
        for e, c in self.terms.items():
            ne = [0] * target.nvars
            for i, k in enumerate(e):
                if k:
                    j = where[i]
                    if j is None:
                        raise ValueError(
                            f"variable {self.ring.vars[i]!r} has no image in target ring"
                        )
                    ne[j] = k
            out[tuple(ne)] = target.coerce_scalar(c)
        return Polynomial(target, out)

    def map_coefficients(self, fn, target_ring: PolyRing) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            nc = fn(c)
            if nc:
                out[e] = nc
        return Polynomial(target_ring, out)

    # -- univariate helpers ------------------------------------------------------

    def univariate_in(self) -> str | None:
        used = self.variables_used()
        if len(used) == 1:
            return used.pop()
        return None

    def univariate_coeffs(self, var: str) -> list:
        """Dense ascending coefficient list; fails if other variables occur."""
        i = self.ring._index[var]
        out = [self.ring.coerce_scalar(0)] * (self.degree_in(var) + 1)
        for e, c in self.terms.items():
            if any(x for j, x in enumerate(e) if j != i):
                raise ValueError(f"polynomial is not univariate in {var!r}")
            out[e[i]] = c
        return out

    # -- comparisons ---------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __repr__(self):
        return format_polynomial(self)


def univariate_squarefree_part(f: Polynomial) -> Polynomial:
    """f / gcd(f, f') for univariate f, content-normalised (monic)."""
    if not f:
        raise ZeroDivisionError("squarefree part of the zero polynomial")
    var = f.univariate_in()
    if var is None:
        if f.is_constant():
            raise ValueError("squarefree part needs a univariate nonconstant input")
        raise ValueError("polynomial is not univariate")
    coeffs = f.univariate_coeffs(var)
    ring = f.ring
    if isinstance(ring.field, RationalField):
        from cuspforge.fields import usqfree

        sq = usqfree(coeffs)
    else:
        sq = _usqfree_field(coeffs, ring.field)
    i = ring._index[var]
    out = {}
    for k, c in enumerate(sq):
        if c:
            e = [0] * ring.nvars
            e[i] = k
            out[tuple(e)] = ring.coerce_scalar(c)
    return Polynomial(ring, out)


def _udivmod_field(a: list, b: list, field):
    r = list(a)
    q = [field.zero] * max(len(a) - len(b) + 1, 0)
    inv_lc = b[-1].inverse()
    while len(r) >= len(b):
        f = r[-1] * inv_lc
        k = len(r) - len(b)
        q[k] = f
        for i, bv in enumerate(b):
            r[i + k] = r[i + k] - f * bv
        while r and not r[-1]:
            r.pop()
        if not r:
            break
    return q, r


def _usqfree_field(a: list, field):
    """Squarefree part over a number field (monic gcd chain)."""
    def trim(c):
        while c and not c[-1]:
            c.pop()
        return c

    def monic(c):
        if not c:
            return c
        inv = c[-1].inverse()
        return [v * inv for v in c]

    a = trim(list(a))
    da = trim([a[i] * i for i in range(1, len(a))])
    x, y = list(a), da
    while y:
        _, r = _udivmod_field(x, y, field)
        x, y = y, monic(trim(r))
    g = monic(x)
    if len(g) - 1 == 0:
        return monic(list(a))
    q, r = _udivmod_field(a, g, field)
    assert not r
    return monic(trim(q))


# ---------------------------------------------------------------------------
# canonical text form
# ---------------------------------------------------------------------------

def _format_scalar(c) -> tuple[str, bool, bool]:
    """(text, negative, needs_parens) for a coefficient."""
    if isinstance(c, NFElt):
        q = c.as_fraction()
        if q is not None:
            return str(abs(q)), q < 0, False
        return repr(c), False, True
    q = fraction(c)
    return str(abs(q)), q < 0, False


def format_polynomial(p: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    """Deterministic canonical text: descending terms, explicit '*', '^'."""
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.sorted_terms(order):
        text, neg, parens = _format_scalar(c)
        monos = []
        for i, k in enumerate(e):
            if k == 1:
                monos.append(p.ring.vars[i])
            elif k > 1:
                monos.append(f"{p.ring.vars[i]}^{k}")
        if parens:
            body = "(" + text + ")"
            if monos:
                body += "*" + "*".join(monos)
        elif not monos:
            body = text
        elif text == "1":
            body = "*".join(monos)
        else:
            body = text + "*" + "*".join(monos)
        parts.append(("- " if neg else "+ ") + body)
    s = " ".join(parts)
    if s.startswith("+ "):
        return s[2:]
    return "-" + s[3:]
