"""Buchberger's algorithm over Q and the primitive-element certificate.

Internally monomials are packed into a single Python integer, one 16-bit
field per variable with the highest-priority variable in the most
significant field (and the total degree above everything for graded lex).
Integer comparison then realizes the monomial order, multiplication of
monomials is addition, and divisibility is one subtraction and mask.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpq

from .poly import MonomialOrder, MvPoly, VarSet

log = logging.getLogger(__name__)

FIELD_BITS = 16
MAX_PACKED_EXPONENT = (1 << (FIELD_BITS - 1)) - 1

GB_VARS = VarSet(["a", "c", "v", "b", "u", "t", "s"])
THETA_ORDER = MonomialOrder.lex(["a", "c", "v", "b", "u", "t", "s"])


class BudgetExceeded(RuntimeError):
    """Raised when Buchberger exceeds its pair or term budget."""


class CertificateNotFound(RuntimeError):
    pass


# -- packed monomial ring -----------------------------------------------------

class PackedRing:
    """Conversion between exponent tuples and packed monomials for one order."""

    def __init__(self, varset: VarSet, order: MonomialOrder):
        self.varset = varset
        self.order = order
        self.perm = order.permutation(varset)
        self.n = len(varset)
        self.graded = order.kind == "grlex"
        nf = self.n + (1 if self.graded else 0)
        self.guard = sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(nf))
        self.field_mask = (1 << FIELD_BITS) - 1
        # shift of each VarSet slot
        self.shift = [0] * self.n
        for rank, slot in enumerate(self.perm):
            self.shift[slot] = FIELD_BITS * (self.n - 1 - rank)
        self.deg_shift = FIELD_BITS * self.n

    def pack(self, e) -> int:
        m = 0
        for k, sh in zip(e, self.shift):
            if k > MAX_PACKED_EXPONENT:
                raise OverflowError(f"exponent {k} too large for packed monomials")
            m |= k << sh
        if self.graded:
            m |= sum(e) << self.deg_shift
        return m

    def unpack(self, m: int) -> Tuple[int, ...]:
        mask = self.field_mask
        return tuple((m >> sh) & mask for sh in self.shift)

    def divides(self, d: int, m: int) -> bool:
        g = self.guard
        return ((m | g) - d) & g == g

    def lcm(self, m1: int, m2: int) -> int:
        e1, e2 = self.unpack(m1), self.unpack(m2)
        return self.pack(tuple(max(a, b) for a, b in zip(e1, e2)))

    def to_packed(self, p: MvPoly) -> Dict[int, mpq]:
        if p.vars != self.varset:
            raise ValueError(f"polynomial over {p.vars}, ring over {self.varset}")
        return {self.pack(e): c for e, c in p.terms.items()}

    def to_poly(self, d: Dict[int, mpq]) -> MvPoly:
        return MvPoly(self.varset, {self.unpack(m): c for m, c in d.items()}, _trusted=True)


class _Elem:
    """Basis element: packed dict plus leading data, kept monic."""

    __slots__ = ("lm", "terms", "tail")

    def __init__(self, terms: Dict[int, mpq]):
        lm = max(terms)
        lc = terms[lm]
        if lc != 1:
            inv = 1 / lc
            terms = {m: c * inv for m, c in terms.items()}
        self.lm = lm
        self.terms = terms
        self.tail = [(m, c) for m, c in terms.items() if m != lm]


class _Counter:
    def __init__(self, max_reductions: int, max_terms: int):
        self.reductions = 0
        self.terms = 0
        self.max_reductions = max_reductions
        self.max_terms = max_terms

    def tick(self, size: int):
        self.reductions += 1
        self.terms += size
        if self.reductions > self.max_reductions:
            raise BudgetExceeded(f"more than {self.max_reductions} pair reductions")
        if self.terms > self.max_terms:
            raise BudgetExceeded(f"more than {self.max_terms} terms processed")


def _normal_form(ring: PackedRing, p: Dict[int, mpq], basis: Sequence[_Elem],
                 counter: _Counter | None = None) -> Dict[int, mpq]:
    p = dict(p)
    heap = [-m for m in p]
    heapq.heapify(heap)
    rem: Dict[int, mpq] = {}
    g = ring.guard
    pop, push = heapq.heappop, heapq.heappush
    steps = 0
    while heap:
        m = -pop(heap)
        c = p.pop(m, None)
        if c is None:
            continue
        mg = m | g
        for el in basis:
            if (mg - el.lm) & g == g:
                q = m - el.lm
                get = p.get
                for tm, tc in el.tail:
                    k = tm + q
                    v = get(k)
                    if v is None:
                        p[k] = -c * tc
                        push(heap, -k)
                    else:
                        v -= c * tc
                        if v:
                            p[k] = v
                        else:
                            del p[k]
                steps += len(el.tail)
                break
        else:
            rem[m] = c
    if counter is not None:
        counter.tick(steps)
    return rem


def _s_poly_packed(a: _Elem, b: _Elem, lcm: int) -> Dict[int, mpq]:
    qa = lcm - a.lm
    qb = lcm - b.lm
    out = {m + qa: c for m, c in a.tail}
    for m, c in b.tail:
        k = m + qb
        v = out.get(k, 0) - c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


# -- public operations ---------------------------------------------------------

def s_polynomial(p: MvPoly, q: MvPoly, order: MonomialOrder) -> MvPoly:
    """S-polynomial of ``p`` and ``q`` with monic leading terms."""
    if not p or not q:
        raise ValueError("S-polynomial of a zero polynomial")
    if p.vars != q.vars:
        raise ValueError("VarSet mismatch")
    ring = PackedRing(p.vars, order)
    a, b = _Elem(ring.to_packed(p)), _Elem(ring.to_packed(q))
    return ring.to_poly(_s_poly_packed(a, b, ring.lcm(a.lm, b.lm)))


def reduce(p: MvPoly, basis: Sequence[MvPoly], order: MonomialOrder) -> MvPoly:
    """Full normal form of ``p`` modulo ``basis`` (divisors tried in list order)."""
    if any(not g for g in basis):
        raise ValueError("zero polynomial in basis")
    if not p:
        return p
    ring = PackedRing(p.vars, order)
    elems = [_Elem(ring.to_packed(g)) for g in basis]
    return ring.to_poly(_normal_form(ring, ring.to_packed(p), elems))


@dataclass
class GroebnerBasis:
    polys: List[MvPoly]
    order: MonomialOrder
    stats: Dict[str, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    @property
    def vars(self) -> VarSet:
        return self.polys[0].vars

    def leading_monomials(self) -> List[Tuple[int, ...]]:
        return [p.leading_term(self.order)[0] for p in self.polys]

    def reduce(self, p: MvPoly) -> MvPoly:
        return reduce(p, self.polys, self.order)

    def contains(self, p: MvPoly) -> bool:
        return not self.reduce(p)


def _update(ring: PackedRing, basis: List[_Elem], alive: List[bool], pairs: List[Tuple[int, int, int]],
            h: int) -> List[Tuple[int, int, int]]:
    """Gebauer-Moeller installation of the new element ``basis[h]``.

    ``pairs`` holds (lcm, i, j) triples.  Returns the new pair list and
    marks basis elements whose leading monomial ``h`` divides.
    """
    lm_h = basis[h].lm
    divides = ring.divides
    lcm = ring.lcm
    cand = [(lcm(basis[i].lm, lm_h), i) for i in range(h) if alive[i]]

    kept: List[Tuple[int, int, bool]] = []
    while cand:
        l1, i = cand.pop(0)
        coprime = l1 == basis[i].lm + lm_h
        if coprime or not (any(divides(l2, l1) for l2, _ in cand)
                           or any(divides(l2, l1) for l2, _, _ in kept)):
            kept.append((l1, i, coprime))
    new_pairs = [(l, i, h) for l, i, coprime in kept if not coprime]

    survivors = []
    for (l, i, j) in pairs:
        if divides(lm_h, l) and l != lcm(basis[i].lm, lm_h) and l != lcm(basis[j].lm, lm_h):
            continue
        survivors.append((l, i, j))

    for i in range(h):
        if alive[i] and divides(lm_h, basis[i].lm):
            alive[i] = False
    return survivors + new_pairs


def buchberger(generators: Sequence[MvPoly], order: MonomialOrder = THETA_ORDER, *,
               max_reductions: int = 10**6, max_terms: int = 10**8) -> GroebnerBasis:
    """Reduced monic Groebner basis of the ideal generated by ``generators``.

    Pair selection is the normal strategy (smallest lcm first, ties broken by
    creation order).  Buchberger's first criterion and the Gebauer-Moeller
    chain criteria prune pairs.
    """
    gens = [g for g in generators if g]
    if not gens:
        raise ValueError("empty ideal")
    varset = gens[0].vars
    ring = PackedRing(varset, order)
    counter = _Counter(max_reductions, max_terms)

    basis: List[_Elem] = []
    alive: List[bool] = []
    pairs: List[Tuple[int, int, int]] = []

    # interreduce the input first so that the run is independent of
    # duplicate or redundant generators
    for g in _interreduce(ring, [ring.to_packed(g) for g in gens]):
        basis.append(_Elem(g))
        alive.append(True)
        pairs = _update(ring, basis, alive, pairs, len(basis) - 1)

    zero_reductions = 0
    while pairs:
        pairs.sort()
        l, i, j = pairs.pop(0)
        sp = _s_poly_packed(basis[i], basis[j], l)
        active = [basis[k] for k in range(len(basis)) if alive[k]]
        h = _normal_form(ring, sp, active, counter)
        if not h:
            zero_reductions += 1
            continue
        basis.append(_Elem(h))
        alive.append(True)
        pairs = _update(ring, basis, alive, pairs, len(basis) - 1)
        log.debug("basis size %d, pairs %d, new lm %s", sum(alive), len(pairs),
                  ring.unpack(basis[-1].lm))

    result = _interreduce(ring, [basis[k].terms for k in range(len(basis)) if alive[k]])
    elems = sorted((_Elem(r) for r in result), key=lambda e: e.lm)
    polys = [ring.to_poly(e.terms) for e in elems]
    stats = {"reductions": counter.reductions, "zero_reductions": zero_reductions,
             "terms_processed": counter.terms, "intermediate_size": len(basis)}
    return GroebnerBasis(polys, order, stats)


def _interreduce(ring: PackedRing, polys: List[Dict[int, mpq]]) -> List[Dict[int, mpq]]:
    """Minimal and fully tail-reduced version of a list of polynomials."""
    elems = [_Elem(p) for p in polys if p]
    changed = True
    while changed:
        changed = False
        elems.sort(key=lambda e: e.lm)
        out: List[_Elem] = []
        for k, el in enumerate(elems):
            others = out + elems[k + 1:]
            r = _normal_form(ring, el.terms, others)
            if not r:
                changed = True
                continue
            new = _Elem(r)
            if new.lm != el.lm or new.terms != el.terms:
                changed = True
            out.append(new)
        elems = out
    # final pass: minimal basis, tails reduced by everything else
    elems.sort(key=lambda e: e.lm)
    minimal = [e for e in elems
               if not any(o is not e and ring.divides(o.lm, e.lm) for o in elems)]
    final = []
    for el in minimal:
        others = [o for o in minimal if o is not el]
        tail = _normal_form(ring, dict(el.tail), others)
        tail[el.lm] = mpq(1)
        final.append(tail)
    return final


def verify_groebner(gb: GroebnerBasis) -> List[Tuple[int, int]]:
    """Pairs whose S-polynomial does not reduce to zero (empty for a Groebner basis)."""
    ring = PackedRing(gb.vars, gb.order)
    elems = [_Elem(ring.to_packed(p)) for p in gb.polys]
    bad = []
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            l = ring.lcm(elems[i].lm, elems[j].lm)
            if l == elems[i].lm + elems[j].lm:
                continue
            if _normal_form(ring, _s_poly_packed(elems[i], elems[j], l), elems):
                bad.append((i, j))
    return bad


def is_reduced(gb: GroebnerBasis) -> bool:
    ring = PackedRing(gb.vars, gb.order)
    elems = [_Elem(ring.to_packed(p)) for p in gb.polys]
    for el in elems:
        if el.terms[el.lm] != 1:
            return False
        for other in elems:
            if other is el:
                continue
            if any(ring.divides(other.lm, m) for m in el.terms):
                return False
    return True


# -- the ideal <f, g, h, j> ------------------------------------------------------

def theta_ideal(varset: VarSet = GB_VARS) -> List[MvPoly]:
    """Generators f, g, h, j relating (a, b, c) to the shifted invariants (s, t, u, v)."""
    a, b, c, s, t, u, v = (varset.var(n) for n in "abcstuv")
    f = 8 * a - 162 * b + 5 * c - s
    g = (80 * a + mpq(91, 2) * c - 2187 * b + a**2 + mpq(7, 2) * a * c
         + mpq(11, 8) * c**2 - t)
    h = b * (8 + 2 * a - c) ** 2 - u
    j = v_relation(a, b, c) - v
    return [f, g, h, j]


def v_relation(a, b, c):
    """3981312 * chi12 / alpha1^12 - 4096 as a polynomial in a, b, c."""
    return (16 * a**4 + (-16 * c + 256) * a**3 + (-7776 * b - 192 * c + 1536) * a**2
            + (2519424 * b**2 + (7776 * c - 62208) * b + (4 * c**3 - 768 * c + 4096)) * a
            + (-68024448 * b**3 + (-1259712 * c + 10077696) * b**2
               + (-1944 * c**2 + 31104 * c - 124416) * b + (-c**4 + 16 * c**3 - 1024 * c)))


def find_ac_free(gb) -> List[MvPoly]:
    """Basis elements in which neither ``a`` nor ``c`` occurs."""
    polys = gb.polys if isinstance(gb, GroebnerBasis) else list(gb)
    out = []
    for p in polys:
        used = set(p.variables())
        if "a" not in used and "c" not in used:
            out.append(p)
    return out


@dataclass
class PrimitiveElementCertificate:
    b_linear: MvPoly
    b_coefficient: MvPoly
    b_pair: Tuple[int, int]
    c_linear: MvPoly
    c_coefficient: MvPoly
    a_expression: MvPoly
    success: bool
    notes: List[str] = field(default_factory=list)

    def summary_lines(self) -> List[str]:
        return [
            f"success={self.success}",
            f"b_linear_terms={len(self.b_linear)} b_coefficient_terms={len(self.b_coefficient)}"
            f" from_pair={self.b_pair}",
            f"c_linear_terms={len(self.c_linear)} c_coefficient_terms={len(self.c_coefficient)}",
            "a_expression=(s + 162*b - 5*c)/8",
        ] + [f"note={n}" for n in self.notes]


def _linear_in(p: MvPoly, var: str) -> bool:
    return p.degree(var) == 1


def find_b_linear(gb: GroebnerBasis) -> Tuple[MvPoly, Tuple[int, int], str]:
    """An ideal element ``B1*b + B0`` with B0, B1 in Q[s,t,u,v], B1 not in the ideal.

    Looks for such an element directly among the a,c-free basis elements,
    then takes the degree-one subresultant in b of pairs of them (smallest
    pairs first).  Returns (primitive element, pair of indices, note).
    """
    from .construct import subresultant_chain

    free = find_ac_free(gb)
    stuv = {"s", "t", "u", "v"}
    for k, p in enumerate(free):
        if _linear_in(p, "b") and set(p.variables()) <= stuv | {"b"}:
            return p.primitive(), (k, k), "b-linear element found directly in the basis"
    cands = sorted(range(len(free)), key=lambda k: (free[k].degree("b"), len(free[k])))
    for x in range(len(cands)):
        for y in range(x + 1, len(cands)):
            p, q = free[cands[x]], free[cands[y]]
            if p.degree("b") < 1 or q.degree("b") < 1:
                continue
            s1 = subresultant_chain(p, q, "b").get(1)
            if s1 is None or not s1 or s1.degree("b") != 1:
                continue
            if gb.reduce(s1.univariate_view("b")[1]):
                pair = (cands[x], cands[y])
                return (s1.primitive(), pair, "b-linear ideal element is the degree-1"
                        f" subresultant of a,c-free elements {pair}")
    raise CertificateNotFound("no element linear in b over Q[s,t,u,v]")


def find_c_linear(gb: GroebnerBasis) -> MvPoly:
    """The smallest a-free basis element of degree one in c with c-coefficient outside the ideal."""
    best = None
    for p in gb.polys:
        used = set(p.variables())
        if "a" not in used and "c" in used and _linear_in(p, "c"):
            if gb.reduce(p.univariate_view("c")[1]) and (best is None or len(p) < len(best)):
                best = p
    if best is None:
        raise CertificateNotFound("no element linear in c over Q[v,b,u,t,s]")
    return best.primitive()


def certify_primitive_element(gb: GroebnerBasis) -> PrimitiveElementCertificate:
    """Exhibit b, c and a as rational functions of (s, t, u, v).

    (i) an ideal element ``B1*b + B0`` (see :func:`find_b_linear`);
    (ii) a basis element of degree one in ``c`` free of ``a``;
    (iii) ``a = (s + 162 b - 5 c) / 8`` read off from ``f``.
    Raises :class:`CertificateNotFound` if a step fails.
    """
    b_lin, pair, note = find_b_linear(gb)
    if gb.reduce(b_lin):
        raise CertificateNotFound("b-linear polynomial is not in the ideal")
    b_coeff = b_lin.univariate_view("b")[1]
    c_lin = find_c_linear(gb)
    c_coeff = c_lin.univariate_view("c")[1]

    varset = gb.vars
    a, b, c, s = (varset.var(n) for n in "abcs")
    f = theta_ideal(varset)[0]
    a_expr = (s + 162 * b - 5 * c) / 8
    if (a - a_expr) * 8 != f:
        raise CertificateNotFound("f is not linear in a with the expected shape")
    return PrimitiveElementCertificate(b_lin, b_coeff, pair, c_lin, c_coeff, a_expr, True, [note])
