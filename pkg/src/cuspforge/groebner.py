"""Reduced Groebner bases over Q and over Q[a]/(m).

Buchberger's algorithm with Gebauer-Moeller pair elimination and sugar-degree
pair selection.  Over Q the reduction arithmetic is fraction-free:
polynomials are scaled to primitive integer form and each reduction chain
tracks a single rational multiplier, so the inner loop is pure integer work.
Over a number field, basis members are kept monic and coefficients stay
reduced mod the modulus.  Both conventions exist to contain coefficient
growth, the dominant failure mode in this domain.

Long computations poll a ComputeContext for cancellation and report pair
statistics through its progress callback.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction
from heapq import heapify, heappop, heappush

from cuspforge.fields import NFElt, NumberField, RationalField
from cuspforge.polys import GREVLEX, MonomialOrder, PolyRing, Polynomial


class ResourceLimit(RuntimeError):
    """A computation exceeded its time budget."""


class ComputationCancelled(RuntimeError):
    """A computation observed its cancellation token."""


class ComputeContext:
    """Cancellation token, deadline, and progress reporting for long runs."""

    def __init__(self, deadline_seconds=None, cancel=None, progress=None,
                 progress_interval=2.0):
        self.started = time.monotonic()
        self.deadline = (
            self.started + deadline_seconds if deadline_seconds is not None else None
        )
        self.cancel = cancel
        self.progress = progress
        self.progress_interval = progress_interval
        self._next_report = self.started + progress_interval

    def poll(self, stats=None):
        now = time.monotonic()
        if self.cancel is not None:
            cancelled = self.cancel() if callable(self.cancel) else self.cancel.is_set()
            if cancelled:
                raise ComputationCancelled("computation cancelled")
        if self.deadline is not None and now > self.deadline:
            raise ResourceLimit("time budget exhausted")
        if self.progress is not None and now >= self._next_report:
            self._next_report = now + self.progress_interval
            self.progress(dict(stats) if stats else {})


def _mask(e) -> int:
    m = 0
    for i, x in enumerate(e):
        if x:
            m |= 1 << i
    return m


class _Entry:
    __slots__ = ("terms", "items", "lexp", "lkey", "lcoef", "sugar", "mask", "idx")

    def __init__(self, terms, lexp, lkey, lcoef, sugar, idx):
        self.terms = terms
        self.items = list(terms.items())
        self.lexp = lexp
        self.lkey = lkey
        self.lcoef = lcoef
        self.sugar = sugar
        self.mask = _mask(lexp)
        self.idx = idx


def _int_normalize(terms: dict, keyf) -> dict:
    """Strip integer content; flip sign so the leading coefficient is > 0."""
    if not terms:
        return terms
    g = 0
    for v in terms.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    if g > 1:
        terms = {e: v // g for e, v in terms.items()}
    le = max(terms, key=keyf)
    if terms[le] < 0:
        terms = {e: -v for e, v in terms.items()}
    return terms


def _to_int_terms(p: Polynomial) -> dict:
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    return {e: int(c * den) for e, c in p.terms.items()}


def _frac_to_primitive(terms: dict, keyf) -> dict:
    """Fraction term dict -> primitive integer dict (positive leading coeff)."""
    den = 1
    for c in terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    return _int_normalize({e: int(c * den) for e, c in terms.items()}, keyf)


def _entry_from_poly(p: Polynomial, keyf, int_mode: bool, sugar=None, idx=-1) -> _Entry:
    if int_mode:
        terms = _int_normalize(_to_int_terms(p), keyf)
    else:
        terms = dict(p.terms)
        le = max(terms, key=keyf)
        lc = terms[le]
        if lc != p.ring.field.one:
            inv = lc.inverse()
            terms = {e: v * inv for e, v in terms.items()}
    le = max(terms, key=keyf)
    s = sugar if sugar is not None else max(sum(e) for e in terms)
    return _Entry(terms, le, keyf(le), terms[le], s, idx)


def _reduce(terms, sugar, reducers, keyf, int_mode, stats=None, ctx=None):
    """Full normal-form reduction; `terms` is consumed.

    Over Q (`int_mode`), reducers carry primitive integer coefficients while
    the working polynomial carries true reduced Fractions: each coefficient
    stays at its mathematical size instead of accumulating a chain-wide
    fraction-free multiplier.  Over a number field, reducers are monic and
    element canonicalisation plays the same role.  Reducers must be sorted by
    ascending leading key.  Returns (reduced_terms, sugar).
    """
    if not terms:
        return terms, sugar
    heap = [(-keyf(e), e) for e in terms]
    heapify(heap)
    done = set()
    steps = 0
    while heap:
        negk, e = heappop(heap)
        c = terms.get(e)
        if c is None or e in done:
            continue
        k = -negk
        me = _mask(e)
        red = None
        for r in reducers:
            if r.lkey > k:
                break
            if r.mask & ~me:
                continue
            le = r.lexp
            for a, b in zip(le, e):
                if a > b:
                    break
            else:
                red = r
                break
        if red is None:
            done.add(e)
            continue
        le = red.lexp
        delta = tuple(x - y for x, y in zip(e, le))
        factor = c / red.lcoef if int_mode else c
        shifted = any(delta)
        for e2, c2 in red.items:
            if e2 == le:
                continue
            ne = tuple(x + y for x, y in zip(e2, delta)) if shifted else e2
            v = terms.get(ne)
            if v is None:
                nv = -(factor * c2)
                if nv:
                    terms[ne] = nv
                    heappush(heap, (-keyf(ne), ne))
            else:
                v = v - factor * c2
                if v:
                    terms[ne] = v
                else:
                    del terms[ne]
        del terms[e]
        ds = red.sugar + sum(delta)
        if ds > sugar:
            sugar = ds
        steps += 1
        if ctx is not None and steps % 256 == 0:
            ctx.poll(stats)
    return terms, sugar


class GroebnerBasis:
    """A reduced, monic Groebner basis with its computation statistics."""

    __slots__ = ("ring", "order", "polys", "stats", "_entries", "_keyf")

    def __init__(self, ring: PolyRing, order: MonomialOrder, polys: tuple, stats: dict):
        self.ring = ring
        self.order = order
        self.polys = polys
        self.stats = stats
        self._entries = None
        self._keyf = ring.key_func(order)

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    @property
    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0] == self.ring.one

    def leading_exponents(self) -> list[tuple]:
        return [p.leading(self.order)[0] for p in self.polys]

    def entries(self):
        if self._entries is None:
            int_mode = isinstance(self.ring.field, RationalField)
            es = [
                _entry_from_poly(p, self._keyf, int_mode, idx=i)
                for i, p in enumerate(self.polys)
            ]
            es.sort(key=lambda r: (r.lkey, r.idx))
            self._entries = es
        return self._entries

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def __repr__(self):
        return f"GroebnerBasis({len(self.polys)} polys, order={self.order!r})"


def _finalize(ring, order, entries, keyf, int_mode, stats, ctx=None) -> GroebnerBasis:
    """Inter-reduce, make monic, sort: the unique reduced basis."""
    entries = sorted(entries, key=lambda r: (r.lkey, r.idx))
    kept = []
    for r in entries:
        redundant = False
        for s in kept:
            if s.mask & ~r.mask:
                continue
            for a, b in zip(s.lexp, r.lexp):
                if a > b:
                    break
            else:
                redundant = True
                break
        if not redundant:
            kept.append(r)
    final = []
    for r in kept:
        others = [s for s in kept if s is not r]
        work = {e: Fraction(v) for e, v in r.terms.items()} if int_mode else dict(r.terms)
        terms, _ = _reduce(work, r.sugar, others, keyf, int_mode, stats, ctx)
        if not terms:
            continue
        final.append(_make_output_poly(ring, terms, keyf, int_mode))
    final.sort(key=lambda p: keyf(p.leading(order)[0]))
    return GroebnerBasis(ring, order, tuple(final), stats)


def _make_output_poly(ring, terms, keyf, int_mode) -> Polynomial:
    le = max(terms, key=keyf)
    lc = terms[le]
    if int_mode:
        return Polynomial(ring, {e: v / lc for e, v in terms.items()})
    inv = lc.inverse()
    return Polynomial(ring, {e: v * inv for e, v in terms.items()})


def buchberger(gens, order: MonomialOrder = GREVLEX, ctx: ComputeContext | None = None,
               stats_out: dict | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by `gens`.

    Deterministic for fixed input.  Raises SplitEvent if a number-field
    leading coefficient turns out to be a zero divisor; the caller reruns in
    each factor field.
    """
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("cannot take a Groebner basis of the zero ideal with no generators")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("ring mismatch among generators")
    int_mode = isinstance(ring.field, RationalField)
    keyf = ring.key_func(order)
    stats = {
        "pairs_generated": 0,
        "pairs_eliminated": 0,
        "pairs_processed": 0,
        "zero_reductions": 0,
        "max_sugar": 0,
        "max_degree": 0,
        "basis_size": 0,
    }

    entries: list[_Entry] = []
    reducers: list[_Entry] = []  # kept sorted by (lkey, idx)
    pairs: dict[tuple, tuple] = {}  # (i,j) -> (lcm_exp, lcm_key, sugar)
    pq: list = []

    def lcm_exp(a, b):
        return tuple(x if x >= y else y for x, y in zip(a, b))

    def insert_reducer(r):
        lo, hi = 0, len(reducers)
        key = (r.lkey, r.idx)
        while lo < hi:
            mid = (lo + hi) // 2
            s = reducers[mid]
            if (s.lkey, s.idx) < key:
                lo = mid + 1
            else:
                hi = mid
        reducers.insert(lo, r)

    def add_member(terms, sugar):
        t = len(entries)
        le = max(terms, key=keyf)
        ent = _Entry(terms, le, keyf(le), terms[le], sugar, t)
        # Gebauer-Moeller update
        cand = []
        for g in entries:
            l = lcm_exp(g.lexp, le)
            cand.append((keyf(l), g.idx, l, g))
        cand.sort(key=lambda c: (c[0], c[1]))
        stats["pairs_generated"] += len(cand)
        D = []
        rest = list(cand)
        while rest:
            lk, gi, l, g = rest.pop(0)
            coprime = all(a == 0 or b == 0 for a, b in zip(g.lexp, le))
            if not coprime:
                dominated = False
                for lk2, _, l2, _ in rest + D:
                    if l2 != l and all(x <= y for x, y in zip(l2, l)):
                        dominated = True
                        break
                if dominated:
                    stats["pairs_eliminated"] += 1
                    continue
                D.append((lk, gi, l, g))
            else:
                stats["pairs_eliminated"] += 1
        # filter old pairs through the new leading monomial
        for (i, j), (l, lk, sg) in list(pairs.items()):
            gi, gj = entries[i], entries[j]
            divides = all(a <= b for a, b in zip(le, l))
            if divides and lcm_exp(gi.lexp, le) != l and lcm_exp(gj.lexp, le) != l:
                del pairs[(i, j)]
                stats["pairs_eliminated"] += 1
        for lk, gi, l, g in D:
            sg = max(g.sugar + sum(l) - sum(g.lexp), sugar + sum(l) - sum(le))
            pairs[(gi, t)] = (l, lk, sg)
            heappush(pq, (sg, lk, gi, t))
        entries.append(ent)
        insert_reducer(ent)
        stats["basis_size"] = len(entries)
        d = sum(le)
        if d > stats["max_degree"]:
            stats["max_degree"] = d
        return ent

    unit_found = False
    for g in gens:
        if unit_found:
            break
        e0 = _entry_from_poly(g, keyf, int_mode)
        work = {e: Fraction(v) for e, v in e0.terms.items()} if int_mode else dict(e0.terms)
        terms, sugar = _reduce(work, e0.sugar, reducers, keyf, int_mode, stats, ctx)
        if not terms:
            continue
        if int_mode:
            terms = _frac_to_primitive(terms, keyf)
        if len(terms) == 1 and not any(next(iter(terms))):
            unit_found = True
            break
        add_member(terms, sugar)

    while pq and not unit_found:
        if ctx is not None:
            ctx.poll(stats)
        sg, lk, i, j = heappop(pq)
        info = pairs.pop((i, j), None)
        if info is None:
            continue
        l, _, _ = info
        gi, gj = entries[i], entries[j]
        di = tuple(x - y for x, y in zip(l, gi.lexp))
        dj = tuple(x - y for x, y in zip(l, gj.lexp))
        s: dict = {}
        if int_mode:
            a, b = gi.lcoef, gj.lcoef
            g0 = math.gcd(a, b)
            ca, cb = Fraction(b // g0), Fraction(a // g0)
            for e2, c2 in gi.items:
                ne = tuple(x + y for x, y in zip(e2, di))
                s[ne] = s.get(ne, 0) + ca * c2
            for e2, c2 in gj.items:
                ne = tuple(x + y for x, y in zip(e2, dj))
                v = s.get(ne, 0) - cb * c2
                if v:
                    s[ne] = v
                elif ne in s:
                    del s[ne]
        else:
            for e2, c2 in gi.items:
                ne = tuple(x + y for x, y in zip(e2, di))
                s[ne] = c2
            for e2, c2 in gj.items:
                ne = tuple(x + y for x, y in zip(e2, dj))
                v = s.get(ne)
                v = -c2 if v is None else v - c2
                if v:
                    s[ne] = v
                elif ne in s:
                    del s[ne]
        sugar = max(gi.sugar + sum(di), gj.sugar + sum(dj))
        stats["pairs_processed"] += 1
        if sugar > stats["max_sugar"]:
            stats["max_sugar"] = sugar
        terms, sugar = _reduce(s, sugar, reducers, keyf, int_mode, stats, ctx)
        if not terms:
            stats["zero_reductions"] += 1
            continue
        if int_mode:
            terms = _frac_to_primitive(terms, keyf)
        else:
            le = max(terms, key=keyf)
            lc = terms[le]
            if lc != ring.field.one:
                inv = lc.inverse()
                terms = {e: v * inv for e, v in terms.items()}
        if len(terms) == 1 and not any(next(iter(terms))):
            unit_found = True
            break
        add_member(terms, sugar)

    if unit_found:
        gb = GroebnerBasis(ring, order, (ring.one,), stats)
    else:
        gb = _finalize(ring, order, entries, keyf, int_mode, stats, ctx)
    if stats_out is not None:
        stats_out.update(stats)
    return gb


def normal_form(f: Polynomial, basis, order: MonomialOrder | None = None) -> Polynomial:
    """Exact normal form of f modulo a basis (GroebnerBasis or polynomial list)."""
    if isinstance(basis, GroebnerBasis):
        if f.ring != basis.ring:
            raise ValueError("ring mismatch")
        if order is not None and order != basis.order:
            raise ValueError("order mismatch with the basis")
        order = basis.order
        reducers = basis.entries()
        ring = basis.ring
    else:
        polys = [p for p in basis if p]
        if order is None:
            order = GREVLEX
        ring = f.ring
        keyf = ring.key_func(order)
        int_mode = isinstance(ring.field, RationalField)
        reducers = [_entry_from_poly(p, keyf, int_mode, idx=i) for i, p in enumerate(polys)]
        reducers.sort(key=lambda r: (r.lkey, r.idx))
    keyf = ring.key_func(order)
    int_mode = isinstance(ring.field, RationalField)
    if not f:
        return f
    terms = dict(f.terms)
    terms, _ = _reduce(terms, f.total_degree(), reducers, keyf, int_mode)
    return Polynomial(ring, terms)


def _inv_scalar(c):
    if isinstance(c, Fraction):
        return 1 / c
    return c.inverse()


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    """The S-polynomial of f and g (exact, over the coefficient field)."""
    if f.ring != g.ring:
        raise ValueError("ring mismatch")
    ef, cf = f.leading(order)
    eg, cg = g.leading(order)
    l = tuple(max(a, b) for a, b in zip(ef, eg))
    mf = f.ring.monomial([a - b for a, b in zip(l, ef)])
    mg = f.ring.monomial([a - b for a, b in zip(l, eg)])
    return (mf * f) * _inv_scalar(cf) - (mg * g) * _inv_scalar(cg)


def divexact(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    """Exact quotient f/g; raises ValueError when g does not divide f."""
    if f.ring != g.ring:
        raise ValueError("ring mismatch")
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    keyf = ring.key_func(order)
    rem = dict(f.terms)
    eg, cg = g.leading(order)
    inv_cg = _inv_scalar(cg)
    gitems = list(g.terms.items())
    q: dict = {}
    while rem:
        e = max(rem, key=keyf)
        c = rem[e]
        d = tuple(x - y for x, y in zip(e, eg))
        if any(x < 0 for x in d):
            raise ValueError("not an exact multiple")
        qc = c * inv_cg
        q[d] = qc
        for e2, c2 in gitems:
            ne = tuple(x + y for x, y in zip(e2, d))
            v = rem.get(ne)
            v = (-(qc * c2)) if v is None else v - qc * c2
            if v:
                rem[ne] = v
            elif ne in rem:
                del rem[ne]
    return Polynomial(ring, q)
