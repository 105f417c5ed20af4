"""Elimination of b and the weighted substitution that produces F(x, y, z; X)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

import math

from .poly import MvPoly, VarSet, exact_div, try_divide

log = logging.getLogger(__name__)


class EliminationError(RuntimeError):
    pass


class WeightViolation(ValueError):
    pass


# -- univariate views with polynomial coefficients -------------------------------

def _strip(p: List[MvPoly]) -> List[MvPoly]:
    while p and not p[-1]:
        p.pop()
    return p


def _prem(a: List[MvPoly], b: List[MvPoly]) -> List[MvPoly]:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r."""
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return list(a)
    lcb = b[-1]
    r = list(a)
    e = da - db + 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        j = len(r) - 1 - db
        r = [lcb * c for c in r]
        for k, bc in enumerate(b):
            if bc:
                r[j + k] = r[j + k] - lr * bc
        r.pop()
        _strip(r)
        e -= 1
    if e > 0 and r:
        f = lcb ** e
        r = [f * c for c in r]
    return r


def _view(p: MvPoly, var: str) -> List[MvPoly]:
    return _strip(p.univariate_view(var)) if p else []


def _join(coeffs: List[MvPoly], var: str, zero: MvPoly) -> MvPoly:
    if not coeffs:
        return zero
    return MvPoly.from_univariate(coeffs, var)


def resultant(p: MvPoly, q: MvPoly, var: str) -> MvPoly:
    """Resultant in ``var`` by the subresultant pseudo-remainder sequence.

    Equals the Sylvester determinant with ``p`` rows first.  A side of
    degree zero in ``var`` yields that constant raised to the other degree.
    """
    if p.vars != q.vars:
        raise ValueError("VarSet mismatch")
    zero = p.vars.zero()
    if not p or not q:
        return zero
    A, B = _view(p, var), _view(q, var)
    da, db = len(A) - 1, len(B) - 1
    if da == 0 and db == 0:
        raise ValueError(f"both polynomials are free of {var}")
    if da == 0:
        return A[0] ** db
    if db == 0:
        return B[0] ** da
    s = 1
    if da < db:
        A, B = B, A
        da, db = db, da
        if da % 2 and db % 2:
            s = -s
    g = h = p.vars.one()
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = _prem(A, B)
        A = B
        if not R:
            return zero
        div = g * h ** delta
        B = [exact_div(c, div) for c in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = exact_div(g ** delta, h ** (delta - 1))
        if len(B) == 1:
            break
    dA = len(A) - 1
    lb = B[0]
    if dA == 1:
        res = lb
    else:
        res = exact_div(lb ** dA, h ** (dA - 1))
    return res if s > 0 else -res


def subresultant_chain(p: MvPoly, q: MvPoly, var: str) -> Dict[int, MvPoly]:
    """Members of the subresultant PRS of ``p`` and ``q`` keyed by degree in ``var``.

    Each member is a nonzero multiple (by an element of the coefficient ring)
    of the subresultant of that degree, and lies in the ideal (p, q).
    """
    A, B = _view(p, var), _view(q, var)
    if len(A) < len(B):
        A, B = B, A
    chain = {len(A) - 1: _join(A, var, p.vars.zero()), len(B) - 1: _join(B, var, p.vars.zero())}
    g = h = p.vars.one()
    while len(B) > 1:
        delta = len(A) - len(B)
        R = _prem(A, B)
        A = B
        if not R:
            break
        div = g * h ** delta
        B = [exact_div(c, div) for c in R]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = exact_div(g ** delta, h ** (delta - 1))
        chain[len(B) - 1] = _join(B, var, p.vars.zero())
    return chain


def sylvester_resultant(p: MvPoly, q: MvPoly, var: str) -> MvPoly:
    """Resultant as the determinant of the Sylvester matrix (Bareiss elimination)."""
    A, B = _view(p, var), _view(q, var)
    m, n = len(A) - 1, len(B) - 1
    N = m + n
    zero = p.vars.zero()
    if N == 0:
        return p.vars.one()
    rows = []
    for i in range(n):
        row = [zero] * N
        for k, c in enumerate(reversed(A)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * N
        for k, c in enumerate(reversed(B)):
            row[i + k] = c
        rows.append(row)
    return bareiss_det(rows, p.vars.one())


def bareiss_det(M: List[List[MvPoly]], one: MvPoly) -> MvPoly:
    """Fraction-free determinant of a square matrix of polynomials."""
    M = [list(r) for r in M]
    n = len(M)
    sign = 1
    prev = one
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return one.vars.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = exact_div(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


# -- multivariate gcd (recursive primitive PRS) ---------------------------------

# -- heuristic gcd ---------------------------------------------------------------
#
# Integer polynomials are kept as dicts exponent -> int.  A variable is
# evaluated at a large integer xi, the gcd of the images is computed
# recursively, and the answer is rebuilt from its balanced xi-adic digits.
# Every candidate is verified by exact division, so a wrong guess only
# costs time; after a few failed attempts the caller falls back to PRS.

def _to_int_dict(p: MvPoly) -> Dict[tuple, int]:
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    return {e: int(c * den) for e, c in p.terms.items()}


def _int_content(d: Dict[tuple, int]) -> int:
    g = 0
    for c in d.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def _max_norm(d: Dict[tuple, int]) -> int:
    return max(abs(c) for c in d.values())


def _evaluate(d: Dict[tuple, int], i: int, xi: int) -> Dict[tuple, int]:
    out: Dict[tuple, int] = {}
    for e, c in d.items():
        k = e[i]
        e2 = e[:i] + (0,) + e[i + 1:]
        out[e2] = out.get(e2, 0) + c * xi ** k
    return {e: c for e, c in out.items() if c}


def _interpolate(d: Dict[tuple, int], i: int, xi: int) -> Dict[tuple, int]:
    out: Dict[tuple, int] = {}
    half = xi // 2
    for e, c in d.items():
        k = 0
        while c:
            r = c % xi
            if r > half:
                r -= xi
            if r:
                out[e[:i] + (k,) + e[i + 1:]] = r
            c = (c - r) // xi
            k += 1
    return out


def _heu_gcd(f: Dict[tuple, int], g: Dict[tuple, int], idx: List[int], nvars: int,
             vs: VarSet) -> Optional[Dict[tuple, int]]:
    """gcd over Z[vars in idx]; the integer contents of f and g are split off first."""
    cf, cg = _int_content(f), _int_content(g)
    cont = math.gcd(cf, cg)
    if not idx:
        return {(0,) * nvars: cont}
    f = {e: c // cf for e, c in f.items()}
    g = {e: c // cg for e, c in g.items()}
    i, rest = idx[0], idx[1:]
    xi = 2 * min(_max_norm(f), _max_norm(g)) + 29
    for _ in range(6):
        ff, gg = _evaluate(f, i, xi), _evaluate(g, i, xi)
        if ff and gg:
            h = _heu_gcd(ff, gg, rest, nvars, vs)
            if h is not None:
                h = _interpolate(h, i, xi)
                c = _int_content(h)
                if c:
                    h = {e: v // c for e, v in h.items()}
                    H = MvPoly(vs, h)
                    if try_divide(MvPoly(vs, f), H) is not None and \
                            try_divide(MvPoly(vs, g), H) is not None:
                        return {e: v * cont for e, v in h.items()}
        xi = xi * 73794 * math.isqrt(math.isqrt(xi)) // 27011
    return None


def heuristic_gcd(p: MvPoly, q: MvPoly) -> Optional[MvPoly]:
    """Primitive gcd of ``p`` and ``q`` by the heuristic method, or None on failure."""
    if not p or not q:
        return None
    f, g = _to_int_dict(p), _to_int_dict(q)
    used = sorted({i for d in (f, g) for e in d for i, k in enumerate(e) if k})
    h = _heu_gcd(f, g, used, len(p.vars), p.vars)
    if h is None:
        return None
    return MvPoly(p.vars, h).primitive()


def _content_in(p_coeffs: List[MvPoly], others: Sequence[str], heuristic: bool = True) -> MvPoly:
    g = None
    for c in p_coeffs:
        if not c:
            continue
        g = c if g is None else poly_gcd(g, c, others, heuristic=heuristic)
        if g.is_constant():
            return g.vars.one()
    return g


def poly_gcd(p: MvPoly, q: MvPoly, variables: Sequence[str] | None = None, *,
             heuristic: bool = True) -> MvPoly:
    """Greatest common divisor over Q, normalized to a primitive integral polynomial.

    The heuristic evaluation gcd is tried first; the recursive primitive
    PRS is the fallback (and the only method with ``heuristic=False``).
    """
    if not p:
        return q.primitive() if q else q
    if not q:
        return p.primitive()
    if variables is None:
        variables = sorted(set(p.variables()) | set(q.variables()),
                           key=lambda n: p.vars.index[n])
    variables = [v for v in variables if p.degree(v) > 0 or q.degree(v) > 0]
    if not variables:
        return p.vars.one()
    if heuristic:
        h = heuristic_gcd(p, q)
        if h is not None:
            return h
    x, rest = variables[0], variables[1:]
    if p.degree(x) == 0 or q.degree(x) == 0:
        # gcd lies in the remaining variables
        a = p if p.degree(x) == 0 else None
        b = q if q.degree(x) == 0 else None
        ca = a if a is not None else _content_in(_view(p, x), rest, heuristic)
        cb = b if b is not None else _content_in(_view(q, x), rest, heuristic)
        return poly_gcd(ca, cb, rest, heuristic=heuristic).primitive()
    A, B = _view(p, x), _view(q, x)
    ca, cb = _content_in(A, rest, heuristic), _content_in(B, rest, heuristic)
    cont = poly_gcd(ca, cb, rest, heuristic=heuristic)
    A = [exact_div(c, ca) for c in A]
    B = [exact_div(c, cb) for c in B]
    if len(A) < len(B):
        A, B = B, A
    while len(B) > 1:
        R = _prem(A, B)
        if not R:
            break
        cr = _content_in(R, rest, heuristic)
        # the polynomial content above is monic up to units; strip the
        # integer content too, or the coefficients grow exponentially
        R = _join([exact_div(c, cr) for c in R], x, p.vars.zero()).primitive()
        A, B = B, _view(R, x)
    if len(B) > 1 and not _prem(A, B):
        g = B
    elif len(B) == 1 and B[0]:
        g = [p.vars.one()]
    else:
        g = B
    gp = _join(g, x, p.vars.zero())
    cg = _content_in(_view(gp, x), rest, heuristic)
    gp = exact_div(gp, cg)
    return (gp * cont).primitive()


def squarefree_part(p: MvPoly, var: str) -> MvPoly:
    """Remove repeated factors of positive degree in ``var``."""
    d = p.derivative(var)
    if not d:
        return p
    g = poly_gcd(p, d)
    if g.degree(var) <= 0:
        return p
    return exact_div(p, g)


# -- the theta substitution ----------------------------------------------------

RELATION_VARS = VarSet(["s", "t", "u", "v"])
F_VARS = VarSet(["x", "y", "z", "X"])


@dataclass(frozen=True)
class ThetaSubstitution:
    """s = x/X^2 - 41, t = y/X^3 - 277, u = 6144 z/X^5, v = 3981312 z/X^6 - 4096, times X^40."""

    weights: Tuple[Tuple[str, int], ...] = (("s", 2), ("t", 3), ("u", 5), ("v", 6))
    shifts: Tuple[Tuple[str, int], ...] = (("s", -41), ("t", -277), ("u", 0), ("v", -4096))
    scales: Tuple[Tuple[str, int], ...] = (("s", 1), ("t", 1), ("u", 6144), ("v", 3981312))
    targets: Tuple[Tuple[str, str], ...] = (("s", "x"), ("t", "y"), ("u", "z"), ("v", "z"))
    total_weight: int = 40
    main_var: str = "X"

    def weight_map(self) -> Dict[str, int]:
        return dict(self.weights)

    def images(self, varset: VarSet = F_VARS) -> Dict[str, MvPoly]:
        """Numerators N_w with var = N_w / X^weight."""
        X = varset.var(self.main_var)
        w, sh, sc, tg = (dict(self.weights), dict(self.shifts), dict(self.scales),
                         dict(self.targets))
        return {n: sc[n] * varset.var(tg[n]) + sh[n] * X ** w[n] for n in w}


THETA = ThetaSubstitution()

# The embedded F is written in rescaled coordinates: its root is 9*theta and
# its x, y, z are 3x, 24y, 2239488z in terms of the substitution above.
# Equivalently s = 27x/X^2 - 41, t = (243/8)y/X^3 - 277, u = 162z/X^5,
# v = 944784z/X^6 - 4096.  Found by matching coefficients; see rescale().
APPENDIX_SCALING: Tuple[Tuple[str, mpq], ...] = (
    ("x", mpq(1, 3)), ("y", mpq(1, 24)), ("z", mpq(1, 2239488)), ("X", mpq(1, 9)),
)


def rescale(P: MvPoly, scaling: Sequence[Tuple[str, object]] = APPENDIX_SCALING) -> MvPoly:
    """``P(c_1 x_1, ..., c_n x_n)`` for the given per-variable factors."""
    idx = [(P.vars.index[n], mpq(c)) for n, c in scaling]
    out = {}
    for e, c in P.terms.items():
        for i, f in idx:
            if e[i]:
                c = c * f ** e[i]
        out[e] = c
    return MvPoly(P.vars, out, _trusted=True)


def theta_substitute(R: MvPoly, sub: ThetaSubstitution = THETA,
                     target: VarSet = F_VARS) -> MvPoly:
    """Image of ``R(s,t,u,v)`` under ``sub``, multiplied by X^total_weight."""
    w = sub.weight_map()
    names = R.vars.names
    wvec = [w[n] for n in names]
    nums = sub.images(target)
    X = target.var(sub.main_var)
    cache: Dict[Tuple[str, int], MvPoly] = {}

    def power(name, k):
        key = (name, k)
        if key not in cache:
            cache[key] = nums[name] if k == 1 else power(name, k - 1) * nums[name]
        return cache[key]

    xpow: Dict[int, MvPoly] = {}
    acc: Dict[tuple, mpq] = {}
    for e, c in R.terms.items():
        weight = sum(a * b for a, b in zip(wvec, e))
        if weight > sub.total_weight:
            raise WeightViolation(f"monomial {e} has weight {weight} > {sub.total_weight}")
        rest = sub.total_weight - weight
        if rest not in xpow:
            xpow[rest] = X ** rest
        term = xpow[rest].scale(c)
        for n, k in zip(names, e):
            if k:
                term = term * power(n, k)
        for te, tc in term.terms.items():
            acc[te] = acc.get(te, 0) + tc
    return MvPoly(target, {e: c for e, c in acc.items() if c}, _trusted=True)


def normalize_F(P: MvPoly, main_var: str = "X") -> Tuple[mpq, MvPoly]:
    """Integral primitive part with positive leading coefficient in ``main_var``.

    Returns ``(factor, F)`` with ``P = factor * F``.
    """
    content, prim = P.content_and_primitive()
    top = prim.univariate_view(main_var)[-1]
    # sign from the lex-leading term of the top coefficient
    lt = max(top.terms)
    if top.terms[lt] < 0:
        content, prim = -content, -prim
    return content, prim


# -- elimination ----------------------------------------------------------------

def to_relation_ring(p: MvPoly) -> MvPoly:
    extra = set(p.variables()) - set(RELATION_VARS.names)
    if extra:
        raise EliminationError(f"relation still involves {sorted(extra)}")
    return p.rename(RELATION_VARS)


def eliminate_relation(G1: MvPoly, G2: MvPoly, var: str = "b", *,
                       weights: Mapping[str, int] | None = None) -> MvPoly:
    """Primitive squarefree relation obtained by eliminating ``var`` from G1, G2.

    Factors free of the highest-weight variable are content and are removed
    together with repeated factors.
    """
    for G in (G1, G2):
        if {"a", "c"} & set(G.variables()):
            raise ValueError("inputs must be free of a and c")
    res = resultant(G1, G2, var)
    if not res:
        raise EliminationError("generators dependent: resultant is zero")
    R = to_relation_ring(res).primitive()
    R = remove_content(R, "v")
    R = squarefree_part(R, "v")
    return R.primitive()


def remove_content(R: MvPoly, var: str) -> MvPoly:
    coeffs = _view(R, var)
    if len(coeffs) <= 1:
        return R
    others = [n for n in R.vars.names if n != var]
    c = _content_in(coeffs, others)
    if c.is_constant():
        return R
    return exact_div(R, c)


# -- full pipeline ---------------------------------------------------------------

@dataclass
class ConstructionReport:
    relation: MvPoly
    raw: MvPoly
    F: MvPoly
    normalization: mpq
    matches_appendix: bool
    scaling: Tuple[Tuple[str, mpq], ...] = ()
    diff: List[tuple] = field(default_factory=list)
    method: str = "resultant"
    pair: Tuple[int, int] = (-1, -1)
    notes: List[str] = field(default_factory=list)


def choose_elimination_pair(free: Sequence[MvPoly]) -> Tuple[int, int]:
    """Pick G1 (free of v, smallest b-degree element) and its cheapest partner."""
    order = sorted(range(len(free)), key=lambda k: (free[k].degree("v"), len(free[k])))
    return order[0], order[1]


def construct_F(gb=None, method: str = "resultant", pair: Optional[Tuple[int, int]] = None,
                scaling: Sequence[Tuple[str, object]] | None = APPENDIX_SCALING,
                relation: MvPoly | None = None) -> ConstructionReport:
    """Run elimination, theta substitution and normalization; compare with the embedded reference F.

    ``scaling`` is applied to the substituted polynomial before normalization
    (pass None for the bare substitution).  A precomputed ``relation`` skips
    the elimination step.
    """
    from .canon_io import appendix_polynomial, diff
    from .groebner import THETA_ORDER, buchberger, find_ac_free, theta_ideal

    notes: List[str] = []
    i = j = -1
    if relation is not None:
        R = relation
        notes.append("relation supplied by caller")
    elif method == "resultant":
        if gb is None:
            gb = buchberger(theta_ideal(), THETA_ORDER)
        free = find_ac_free(gb)
        if len(free) < 2:
            raise EliminationError(f"expected at least two a,c-free elements, got {len(free)}")
        i, j = pair if pair is not None else choose_elimination_pair(free)
        notes.append(f"eliminating b from a,c-free elements {i} and {j}")
        R = eliminate_relation(free[i], free[j])
    else:
        raise ValueError(f"unknown method {method!r}")
    wdeg = R.weighted_degree(THETA.weight_map())
    notes.append(f"relation: {len(R)} terms, weighted degree {wdeg}, v-degree {R.degree('v')}")
    raw = theta_substitute(R)
    if scaling:
        raw = rescale(raw, scaling)
        notes.append("rescaled to reference coordinates: " +
                     ", ".join(f"{n}->{c}*{n}" for n, c in scaling))
    factor, F = normalize_F(raw)
    A = appendix_polynomial()
    d = diff(F, A)
    return ConstructionReport(relation=R, raw=raw, F=F, normalization=factor,
                              matches_appendix=not d, diff=d, method=method, pair=(i, j),
                              notes=notes, scaling=tuple(scaling or ()))
