"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a mapping from exponent vectors to ``gmpy2.mpq``
coefficients over a fixed, named :class:`VarSet`.  Values are immutable
once constructed; every arithmetic operation returns a new polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

from gmpy2 import gcd, lcm, mpq, mpz

Exponent = Tuple[int, ...]

# exponents are kept well inside a signed machine word
MAX_EXPONENT = 2**31 - 1


class VarSetMismatch(ValueError):
    pass


def to_mpq(c) -> mpq:
    if isinstance(c, str):
        return mpq(Fraction(c))
    return mpq(c)


class VarSet:
    """Ordered tuple of distinct variable names."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if not names:
            raise ValueError("a VarSet needs at least one variable")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarSet({list(self.names)!r})"

    def zero(self) -> "MvPoly":
        return MvPoly(self, {})

    def one(self) -> "MvPoly":
        return MvPoly.constant(self, 1)

    def gens(self) -> List["MvPoly"]:
        return [MvPoly.var(self, n) for n in self.names]

    def var(self, name: str) -> "MvPoly":
        return MvPoly.var(self, name)


class MonomialOrder:
    """Lex or graded-lex order given by a variable priority list.

    ``key(exp)`` maps an exponent vector to a tuple whose natural
    comparison realizes the order, which makes it usable with ``max`` and
    ``sorted``.
    """

    KINDS = ("lex", "grlex")

    def __init__(self, kind: str, priority: Sequence[str]):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.priority = tuple(priority)

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, {list(self.priority)!r})"

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.priority == other.priority)

    def __hash__(self):
        return hash((self.kind, self.priority))

    def permutation(self, varset: VarSet) -> Tuple[int, ...]:
        if sorted(self.priority) != sorted(varset.names):
            raise VarSetMismatch(
                f"order over {self.priority} does not match {varset.names}")
        return tuple(varset.index[n] for n in self.priority)

    def key_function(self, varset: VarSet):
        perm = self.permutation(varset)
        identity = perm == tuple(range(len(perm)))
        if self.kind == "lex":
            if identity:
                return lambda e: e
            return lambda e: tuple(e[i] for i in perm)
        if identity:
            return lambda e: (sum(e),) + e
        return lambda e: (sum(e),) + tuple(e[i] for i in perm)

    @classmethod
    def lex(cls, varset_or_names) -> "MonomialOrder":
        return cls("lex", tuple(varset_or_names))

    @classmethod
    def grlex(cls, varset_or_names) -> "MonomialOrder":
        return cls("grlex", tuple(varset_or_names))


class MvPoly:
    """Immutable sparse polynomial over a :class:`VarSet`."""

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, varset: VarSet, terms: Mapping[Exponent, object], *, _trusted=False):
        self.vars = varset
        if _trusted:
            self._terms = terms
        else:
            n = len(varset)
            clean: Dict[Exponent, mpq] = {}
            for e, c in terms.items():
                e = tuple(int(k) for k in e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for {varset}")
                if any(k < 0 for k in e):
                    raise ValueError(f"negative exponent in {e}")
                if any(k > MAX_EXPONENT for k in e):
                    raise OverflowError(f"exponent {e} out of range")
                c = to_mpq(c)
                if c:
                    c = clean.get(e, 0) + c
                    if c:
                        clean[e] = c
                    else:
                        clean.pop(e, None)
            self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, varset: VarSet, c) -> "MvPoly":
        c = to_mpq(c)
        return cls(varset, {(0,) * len(varset): c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, varset: VarSet, name: str) -> "MvPoly":
        e = [0] * len(varset)
        e[varset.index[name]] = 1
        return cls(varset, {tuple(e): mpq(1)}, _trusted=True)

    @classmethod
    def monomial(cls, varset: VarSet, exp: Exponent, c=1) -> "MvPoly":
        return cls(varset, {tuple(exp): c})

    # -- basic protocol -----------------------------------------------
    @property
    def terms(self) -> Mapping[Exponent, mpq]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def __eq__(self, other):
        if isinstance(other, MvPoly):
            return self.vars == other.vars and self._terms == other._terms
        try:
            c = to_mpq(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self == MvPoly.constant(self.vars, c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._terms.items())))
        return self._hash

    def coeff(self, exp: Exponent) -> mpq:
        return self._terms.get(tuple(exp), mpq(0))

    def constant_term(self) -> mpq:
        return self.coeff((0,) * len(self.vars))

    def sorted_terms(self, order: MonomialOrder | None = None) -> List[Tuple[Exponent, mpq]]:
        """Terms in descending order (default: lex in VarSet order)."""
        key = (order or MonomialOrder.lex(self.vars.names)).key_function(self.vars)
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def __iter__(self) -> Iterator[Tuple[Exponent, mpq]]:
        return iter(self.sorted_terms())

    def leading_term(self, order: MonomialOrder) -> Tuple[Exponent, mpq]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key_function(self.vars)
        e = max(self._terms, key=key)
        return e, self._terms[e]

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if omitted); -1 for zero."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        i = self.vars.index[var]
        return max(e[i] for e in self._terms)

    def variables(self) -> List[str]:
        """Names of variables that actually occur."""
        used = [False] * len(self.vars)
        for e in self._terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return [n for n, u in zip(self.vars.names, used) if u]

    def weighted_degree(self, weights: Mapping[str, int]) -> int:
        w = [weights.get(n, 0) for n in self.vars.names]
        return max((sum(a * b for a, b in zip(w, e)) for e in self._terms), default=-1)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "MvPoly":
        if isinstance(other, MvPoly):
            if other.vars != self.vars:
                raise VarSetMismatch(f"{self.vars} vs {other.vars}")
            return other
        return MvPoly.constant(self.vars, to_mpq(other))

    def __add__(self, other):
        other = self._coerce(other)
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for e, c in small.items():
            r = out.get(e)
            if r is None:
                out[e] = c
            else:
                r += c
                if r:
                    out[e] = r
                else:
                    del out[e]
        return MvPoly(self.vars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return MvPoly(self.vars, {e: -c for e, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "MvPoly":
        c = to_mpq(c)
        if not c:
            return self.vars.zero()
        return MvPoly(self.vars, {e: c * v for e, v in self._terms.items()}, _trusted=True)

    def mul_term(self, exp: Exponent, c) -> "MvPoly":
        c = to_mpq(c)
        if not c:
            return self.vars.zero()
        return MvPoly(self.vars, {tuple(a + b for a, b in zip(e, exp)): c * v
                                  for e, v in self._terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, MvPoly):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        return MvPoly(self.vars, _packed_product(a, b, len(self.vars)), _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        if n and self._terms and max(max(e, default=0) for e in self._terms) * n > MAX_EXPONENT:
            raise OverflowError("exponent overflow in power")
        result = self.vars.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        c = to_mpq(other)
        if not c:
            raise ZeroDivisionError
        return self.scale(1 / c)

    # -- higher level -------------------------------------------------
    def substitute(self, bindings: Mapping[str, "MvPoly"], target: VarSet | None = None) -> "MvPoly":
        """Compose: replace every variable by a polynomial over ``target``.

        Every variable of the source VarSet that occurs in ``self`` must be
        bound.  Powers of each image are cached.
        """
        if target is None:
            images = [p for p in bindings.values() if isinstance(p, MvPoly)]
            if not images:
                raise ValueError("cannot infer target VarSet")
            target = images[0].vars
        used = self.variables()
        missing = [n for n in used if n not in bindings]
        if missing:
            raise KeyError(f"unbound variables {missing}")
        imgs = []
        for n in self.vars.names:
            p = bindings.get(n)
            if p is None:
                imgs.append(None)
                continue
            p = p if isinstance(p, MvPoly) else MvPoly.constant(target, p)
            if p.vars != target:
                raise VarSetMismatch(f"image of {n} is over {p.vars}, expected {target}")
            imgs.append(p)
        cache: Dict[Tuple[int, int], MvPoly] = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = imgs[i] if k == 1 else power(i, k - 1) * imgs[i]
            return cache[key]

        acc: Dict[Exponent, mpq] = {}
        for e, c in self._terms.items():
            term = MvPoly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term._terms.items():
                acc[te] = acc.get(te, 0) + tc
        return MvPoly(target, {e: c for e, c in acc.items() if c}, _trusted=True)

    def eval_rational(self, point: Sequence) -> mpq:
        """Exact value at ``point`` (one rational per variable)."""
        if len(point) != len(self.vars):
            raise ValueError(f"point has {len(point)} entries, expected {len(self.vars)}")
        pt = [to_mpq(x) for x in point]
        return _horner(self._terms, pt, 0)

    def partial_eval(self, values: Mapping[str, object]) -> "MvPoly":
        """Specialize some variables to rationals; the VarSet is kept."""
        idx = [(self.vars.index[n], to_mpq(v)) for n, v in values.items()]
        out: Dict[Exponent, mpq] = {}
        for e, c in self._terms.items():
            e = list(e)
            for i, val in idx:
                if e[i]:
                    c = c * val ** e[i]
                    e[i] = 0
            if c:
                e = tuple(e)
                out[e] = out.get(e, 0) + c
        return MvPoly(self.vars, {e: c for e, c in out.items() if c}, _trusted=True)

    def univariate_view(self, main_var: str) -> List["MvPoly"]:
        """Coefficients in ``main_var``; index ``k`` holds the coefficient of main_var^k.

        The coefficients stay over the same VarSet (with zero exponent in
        ``main_var``) so they recombine with ordinary arithmetic.
        """
        i = self.vars.index[main_var]
        buckets: Dict[int, Dict[Exponent, mpq]] = {}
        for e, c in self._terms.items():
            k = e[i]
            buckets.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        deg = max(buckets, default=0)
        return [MvPoly(self.vars, buckets.get(k, {}), _trusted=True) for k in range(deg + 1)]

    @classmethod
    def from_univariate(cls, coeffs: Sequence["MvPoly"], main_var: str) -> "MvPoly":
        varset = coeffs[0].vars
        i = varset.index[main_var]
        out: Dict[Exponent, mpq] = {}
        for k, p in enumerate(coeffs):
            for e, c in p._terms.items():
                e2 = e[:i] + (e[i] + k,) + e[i + 1:]
                out[e2] = out.get(e2, 0) + c
        return cls(varset, {e: c for e, c in out.items() if c}, _trusted=True)

    def content_and_primitive(self, order: MonomialOrder | None = None) -> Tuple[mpq, "MvPoly"]:
        """Split ``p = c * q`` with ``q`` integral with coprime coefficients.

        ``q`` has positive leading coefficient under ``order``; ``c`` carries
        the sign of the leading coefficient of ``p``.
        """
        if not self._terms:
            raise ValueError("content of the zero polynomial")
        num = mpz(0)
        den = mpz(1)
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        content = mpq(num, den)
        _, lc = self.leading_term(order or MonomialOrder.lex(self.vars.names))
        if lc < 0:
            content = -content
        q = MvPoly(self.vars, {e: c / content for e, c in self._terms.items()}, _trusted=True)
        return content, q

    def primitive(self, order: MonomialOrder | None = None) -> "MvPoly":
        return self.content_and_primitive(order)[1]

    def derivative(self, var: str) -> "MvPoly":
        i = self.vars.index[var]
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return MvPoly(self.vars, out, _trusted=True)

    def rename(self, varset: VarSet, mapping: Mapping[str, str] | None = None) -> "MvPoly":
        """Move to another VarSet, optionally renaming variables."""
        mapping = mapping or {}
        used = set(self.variables())
        src = [varset.index[mapping.get(n, n)] if n in used else None
               for n in self.vars.names]
        n = len(varset)
        out: Dict[Exponent, mpq] = {}
        for e, c in self._terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    ne[src[i]] += k
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c
        return MvPoly(varset, {e: c for e, c in out.items() if c}, _trusted=True)

    def map_coeffs(self, fn) -> "MvPoly":
        return MvPoly(self.vars, {e: fn(c) for e, c in self._terms.items()})

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def __repr__(self):
        from .canon_io import serialize
        text = serialize(self)
        if len(text) > 200:
            text = text[:200] + " ..."
        return f"MvPoly({text})"

    __str__ = __repr__


def _packed_product(a: Mapping[Exponent, mpq], b: Mapping[Exponent, mpq],
                    n: int) -> Dict[Exponent, mpq]:
    """Product of two term dicts.

    Exponent vectors are packed into one integer with fields wide enough
    for the product, and coefficients are cleared to integers, so the
    inner loop is integer addition and mpz multiplication only.
    """
    if not a or not b:
        return {}
    widths = []
    for i in range(n):
        top = max(e[i] for e in a) + max(e[i] for e in b)
        widths.append(max(top.bit_length(), 1))
    offs = []
    acc = 0
    for w in widths:
        offs.append(acc)
        acc += w

    def pack(e):
        k = 0
        for x, o in zip(e, offs):
            if x:
                k |= x << o
        return k

    def cleared(t):
        den = mpz(1)
        for c in t.values():
            d = c.denominator
            if d != 1:
                den = lcm(den, d)
        return den, [(pack(e), mpz(c * den)) for e, c in t.items()]

    da, pa = cleared(a)
    db, pb = cleared(b)
    out: Dict[int, mpz] = {}
    get = out.get
    for kb, cb in pb:
        for ka, ca in pa:
            k = ka + kb
            r = get(k)
            out[k] = ca * cb if r is None else r + ca * cb
    den = da * db
    masks = [((1 << w) - 1, o) for w, o in zip(widths, offs)]
    res: Dict[Exponent, mpq] = {}
    for k, c in out.items():
        if c:
            res[tuple((k >> o) & m for m, o in masks)] = mpq(c, den) if den != 1 else mpq(c)
    return res


def _horner(terms: Mapping[Exponent, mpq], pt: Sequence[mpq], i: int) -> mpq:
    # group by exponent of variable i and recurse on the rest
    if i == len(pt) - 1:
        groups = {}
        for e, c in terms.items():
            groups[e[i]] = groups.get(e[i], 0) + c
        acc = mpq(0)
        x = pt[i]
        for k in range(max(groups, default=0), -1, -1):
            acc = acc * x + groups.get(k, 0)
        return acc
    groups: Dict[int, Dict[Exponent, mpq]] = {}
    for e, c in terms.items():
        groups.setdefault(e[i], {})[e] = c
    acc = mpq(0)
    x = pt[i]
    for k in range(max(groups, default=0), -1, -1):
        g = groups.get(k)
        acc = acc * x + (_horner(g, pt, i + 1) if g else 0)
    return acc


def polys(names: Sequence[str] | str) -> Tuple[VarSet, List[MvPoly]]:
    """Convenience: ``R, (x, y) = polys("x y")``."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    vs = VarSet(names)
    return vs, vs.gens()


class InexactDivision(ArithmeticError):
    pass


def divmod_poly(p: MvPoly, q: MvPoly, *, stop_on_remainder: bool = False):
    """Multivariate division of ``p`` by one divisor ``q`` under lex in VarSet order.

    With ``stop_on_remainder`` the division aborts and returns None as soon
    as a nonzero remainder term appears.
    """
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    if p.vars != q.vars:
        raise VarSetMismatch(f"{p.vars} vs {q.vars}")
    import heapq

    lm = max(q.terms)
    inv = 1 / q.terms[lm]
    tail = [(e, c) for e, c in q.terms.items() if e != lm]
    rem_work = dict(p.terms)
    # max-heap on exponent tuples via negated entries
    heap = [tuple(-k for k in e) for e in rem_work]
    heapq.heapify(heap)
    quot: Dict[Exponent, mpq] = {}
    rem: Dict[Exponent, mpq] = {}
    while heap:
        e = tuple(-k for k in heapq.heappop(heap))
        c = rem_work.pop(e, None)
        if c is None:
            continue
        if all(a >= b for a, b in zip(e, lm)):
            qe = tuple(a - b for a, b in zip(e, lm))
            qc = c * inv
            quot[qe] = qc
            for te, tc in tail:
                k = tuple(a + b for a, b in zip(te, qe))
                v = rem_work.get(k)
                if v is None:
                    rem_work[k] = -qc * tc
                    heapq.heappush(heap, tuple(-x for x in k))
                else:
                    v -= qc * tc
                    if v:
                        rem_work[k] = v
                    else:
                        del rem_work[k]
        else:
            if stop_on_remainder:
                return None
            rem[e] = c
    return MvPoly(p.vars, quot, _trusted=True), MvPoly(p.vars, rem, _trusted=True)


def exact_div(p: MvPoly, q) -> MvPoly:
    """``p / q`` when ``q`` divides ``p`` exactly; raises otherwise."""
    if not isinstance(q, MvPoly):
        return p / q
    if q.is_constant():
        return p / q.constant_term()
    res = divmod_poly(p, q, stop_on_remainder=True)
    if res is None:
        raise InexactDivision("division is not exact")
    return res[0]


def try_divide(p: MvPoly, q: MvPoly) -> MvPoly | None:
    """``p / q`` if the division is exact, else None."""
    if q.is_constant():
        return p / q.constant_term()
    res = divmod_poly(p, q, stop_on_remainder=True)
    return None if res is None else res[0]
