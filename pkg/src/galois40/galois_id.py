"""Discriminants of specializations and Frobenius degree patterns.

Univariate polynomials are dense coefficient lists, lowest degree first.
Over Q the coefficients are mpq; modulo p they are Python ints in [0, p).
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from gmpy2 import isqrt, legendre, mpq, mpz, next_prime

from .permgroup import CycleType, format_cycle_type, is_even

log = logging.getLogger(__name__)

UvQ = List[mpq]
UvP = List[int]
NOT_SQUAREFREE = "not squarefree"


class BadPrime(ValueError):
    pass


class SurveyError(RuntimeError):
    pass


# -- dense univariate over Q ---------------------------------------------------------

def uv_strip(f: Sequence) -> list:
    f = list(f)
    while f and not f[-1]:
        f.pop()
    return f


def uv_degree(f: Sequence) -> int:
    return len(uv_strip(f)) - 1


def uv_derivative(f: Sequence) -> list:
    return [k * f[k] for k in range(1, len(f))]


def _int_normalized(f: Sequence) -> Tuple[List[int], mpq]:
    """Integer coefficient list g and scalar c with f = c*g."""
    den = mpz(1)
    for a in f:
        a = mpq(a)
        den = den * a.denominator // _gcd(den, a.denominator)
    return [int(mpq(a) * den) for a in f], mpq(1, den)


def _gcd(a, b):
    from math import gcd
    return gcd(int(a), int(b))


def _prem_int(a: List[int], b: List[int]) -> List[int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for i, c in enumerate(b):
            r[i + shift] -= lr * c
        r = uv_strip(r)
        e -= 1
    if e > 0:
        r = [x * lb ** e for x in r]
    return r


def resultant_int(a: List[int], b: List[int]) -> int:
    """Resultant of integer polynomials by the subresultant PRS."""
    a, b = uv_strip(a), uv_strip(b)
    if not a or not b:
        return 0
    sign = 1
    if len(a) < len(b):
        a, b = b, a
        if (len(a) - 1) % 2 and (len(b) - 1) % 2:
            sign = -1
    if len(b) == 1:
        return sign * b[0] ** (len(a) - 1)
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            sign = -sign
        r = _prem_int(a, b)
        if not r:
            return 0
        den = g * h ** delta
        a, b = b, [x // den for x in r]
        g = a[-1]
        h = g ** delta // h ** (delta - 1) if delta else h
        if len(b) == 1:
            da = len(a) - 1
            return sign * (b[0] ** da // h ** (da - 1))


def sylvester_det(a: Sequence, b: Sequence) -> mpq:
    """Resultant as the determinant of the Sylvester matrix (Bareiss); oracle."""
    a, b = uv_strip(a), uv_strip(b)
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    if size == 0:
        return mpq(1)
    rows = []
    for i in range(n):
        row = [0] * size
        for k, c in enumerate(reversed(a)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for k, c in enumerate(reversed(b)):
            row[i + k] = c
        rows.append(row)
    M = [[mpq(x) for x in r] for r in rows]
    sign = 1
    prev = mpq(1)
    for k in range(size - 1):
        if not M[k][k]:
            sw = next((i for i in range(k + 1, size) if M[i][k]), None)
            if sw is None:
                return mpq(0)
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
            M[i][k] = mpq(0)
        prev = M[k][k]
    return sign * M[-1][-1]


def resultant_q(a: Sequence, b: Sequence) -> mpq:
    ia, ca = _int_normalized(uv_strip(a))
    ib, cb = _int_normalized(uv_strip(b))
    da, db = len(ia) - 1, len(ib) - 1
    return mpq(resultant_int(ia, ib)) * ca ** db * cb ** da


def discriminant(f: Sequence) -> mpq:
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    f = [mpq(c) for c in uv_strip(f)]
    if not f:
        raise ValueError("discriminant of the zero polynomial")
    n = len(f) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return mpq(1)
    r = resultant_q(f, uv_derivative(f))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * r / f[-1]


def is_minus3_times_square(d) -> Tuple[bool, Optional[mpq]]:
    """Whether d = -3 q^2 for a rational q; returns (verdict, q >= 0 or None)."""
    d = mpq(d)
    if not d:
        raise ValueError("zero has no square class")
    q = -d / 3
    if q < 0:
        return False, None
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return True, mpq(rn, rd)
    return False, None


# -- specialization ----------------------------------------------------------------

def specialize(F, point: Sequence, main_var: str = "X") -> UvQ:
    """Coefficients in ``main_var`` of F with the other variables fixed."""
    others = [n for n in F.vars.names if n != main_var]
    if len(point) != len(others):
        raise ValueError(f"point needs {len(others)} coordinates")
    sp = F.partial_eval(dict(zip(others, point)))
    i = F.vars.index[main_var]
    out = [mpq(0)] * (sp.degree(main_var) + 1 if sp else 1)
    for e, c in sp.terms.items():
        out[e[i]] += c
    return out


def parse_point(text: str) -> Tuple[mpq, ...]:
    try:
        return tuple(mpq(Fraction(s.strip())) for s in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad point {text!r}") from exc


def random_points(count: int, seed: int = 0, height: int = 9) -> List[Tuple[mpq, ...]]:
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        pts.append(tuple(mpq(rng.randint(-height, height), rng.randint(1, height))
                         for _ in range(3)))
    return pts


# -- arithmetic mod p ---------------------------------------------------------------

def reduce_mod_p(f: Sequence, p: int) -> UvP:
    out = []
    for c in f:
        c = mpq(c)
        if c.denominator % p == 0:
            raise BadPrime(f"denominator divisible by {p}")
        out.append(int(c.numerator * pow(int(c.denominator), -1, p) % p))
    return uv_strip(out)


def pmod_monic(f: UvP, p: int) -> UvP:
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def prem_p(a: UvP, b: UvP, p: int) -> UvP:
    """a mod b over F_p; b need not be monic."""
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    while len(a) - 1 >= db and a:
        q = a[-1] * inv % p
        s = len(a) - 1 - db
        if q:
            for i in range(db + 1):
                a[s + i] = (a[s + i] - q * b[i]) % p
        a.pop()
        while a and not a[-1]:
            a.pop()
    return a


def gcd_p(a: UvP, b: UvP, p: int) -> UvP:
    a, b = uv_strip(a), uv_strip(b)
    while b:
        a, b = b, prem_p(a, b, p)
    return pmod_monic(a, p) if a else a


def quo_p(a: UvP, b: UvP, p: int) -> UvP:
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % p
        s = len(a) - 1 - db
        q[s] = c
        if c:
            for i in range(db + 1):
                a[s + i] = (a[s + i] - c * b[i]) % p
        a.pop()
    return uv_strip(q)


def mulmod_p(a: UvP, b: UvP, f: UvP, p: int) -> UvP:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return prem_p([c % p for c in prod], f, p)


def powmod_p(base: UvP, e: int, f: UvP, p: int) -> UvP:
    result = [1]
    base = prem_p(base, f, p)
    while e:
        if e & 1:
            result = mulmod_p(result, base, f, p)
        e >>= 1
        if e:
            base = mulmod_p(base, base, f, p)
    return result


def frobenius_matrix(f: UvP, p: int) -> List[UvP]:
    """Rows X^(i p) mod f for i < deg f (f monic)."""
    n = len(f) - 1
    xp = powmod_p([0, 1], p, f, p)
    rows = [[1]]
    for _ in range(1, n):
        rows.append(mulmod_p(rows[-1], xp, f, p))
    return rows


def apply_frobenius(Q: List[UvP], h: UvP, p: int) -> UvP:
    """h(X)^p mod f, using the precomputed matrix."""
    n = len(Q)
    out = [0] * n
    for i, c in enumerate(h):
        if c:
            for j, q in enumerate(Q[i]):
                out[j] += c * q
    return uv_strip([c % p for c in out])


def _sub_x(h: UvP, p: int) -> UvP:
    h = list(h) + [0] * max(0, 2 - len(h))
    h[1] = (h[1] - 1) % p
    return uv_strip(h)


def degree_pattern(f: UvP, p: int) -> Union[CycleType, str]:
    """Factor degrees of a squarefree f mod p by distinct-degree factorization."""
    f = pmod_monic(uv_strip(f), p)
    n = len(f) - 1
    if n < 1:
        raise ValueError("degree must be positive")
    if len(gcd_p(f, uv_derivative_p(f, p), p)) > 1:
        return NOT_SQUAREFREE
    Q = frobenius_matrix(f, p)
    degs: List[int] = []
    rest = f
    h = [0, 1]
    d = 0
    while len(rest) - 1 >= 2 * (d + 1):
        d += 1
        h = apply_frobenius(Q, h, p)
        g = gcd_p(rest, _sub_x(prem_p(h, rest, p), p), p)
        k = len(g) - 1
        if k > 0:
            degs.extend([d] * (k // d))
            rest = quo_p(rest, g, p)
            rest = pmod_monic(rest, p)
            h = prem_p(h, rest, p)
    if len(rest) - 1 > 0:
        degs.append(len(rest) - 1)
    return tuple(sorted(degs, reverse=True))


def uv_derivative_p(f: UvP, p: int) -> UvP:
    return uv_strip([k * f[k] % p for k in range(1, len(f))])


def legendre_q(d: mpq, p: int) -> int:
    d = mpq(d)
    return int(legendre(int(d.numerator * d.denominator) % p, p))


# -- survey --------------------------------------------------------------------------

@dataclass
class FrobeniusSample:
    p: int
    residue: int
    squarefree: bool
    pattern: Optional[CycleType]
    legendre: int

    @property
    def parity_ok(self) -> bool:
        if self.pattern is None:
            return True
        even = is_even(self.pattern)
        return even == (self.legendre == 1)

    def line(self, verdict: str) -> str:
        pat = format_cycle_type(self.pattern, ",") if self.pattern else NOT_SQUAREFREE
        par = "even" if self.pattern and is_even(self.pattern) else "odd"
        return f"p={self.p} residue={self.residue} pattern={pat} parity={par} " \
               f"legendre={self.legendre} verdict={verdict}"


@dataclass
class SurveyReport:
    point: Tuple[mpq, ...]
    samples: List[FrobeniusSample]
    skipped: List[Tuple[int, str]]
    disc: mpq
    psp_types: Set[CycleType] = field(default_factory=set)
    pgsp_types: Set[CycleType] = field(default_factory=set)

    def classify(self, s: FrobeniusSample) -> str:
        if s.pattern is None:
            return "skip"
        if s.pattern in self.psp_types:
            return "psp"
        if s.pattern in self.pgsp_types:
            return "pgsp-only"
        return "violation"

    @property
    def squarefree_samples(self) -> List[FrobeniusSample]:
        return [s for s in self.samples if s.pattern is not None]

    def violations(self) -> List[FrobeniusSample]:
        return [s for s in self.squarefree_samples if self.classify(s) == "violation"]

    def residue1_outside_psp(self) -> List[FrobeniusSample]:
        return [s for s in self.squarefree_samples
                if s.residue == 1 and self.classify(s) != "psp"]

    def residue2_outside_psp(self) -> List[FrobeniusSample]:
        return [s for s in self.squarefree_samples
                if s.residue == 2 and self.classify(s) != "psp"]

    def parity_failures(self) -> List[FrobeniusSample]:
        return [s for s in self.squarefree_samples if not s.parity_ok]

    def mean_fixed_points(self) -> float:
        sq = self.squarefree_samples
        return sum(s.pattern.count(1) for s in sq) / len(sq)

    def fractions(self) -> Dict[int, Dict[str, float]]:
        out: Dict[int, Dict[str, float]] = {}
        for r in (1, 2):
            xs = [self.classify(s) for s in self.squarefree_samples if s.residue == r]
            c = Counter(xs)
            out[r] = {k: c[k] / len(xs) if xs else 0.0 for k in ("psp", "pgsp-only", "violation")}
        return out

    def passed(self) -> bool:
        return (not self.violations() and not self.residue1_outside_psp()
                and bool(self.residue2_outside_psp()) and not self.parity_failures()
                and 0.7 <= self.mean_fixed_points() <= 1.3)

    def summary_lines(self) -> List[str]:
        fr = self.fractions()
        lines = [f"samples={len(self.squarefree_samples)} skipped={len(self.skipped)}",
                 f"violations={len(self.violations())}",
                 f"residue1_outside_psp={len(self.residue1_outside_psp())}",
                 f"residue2_outside_psp={len(self.residue2_outside_psp())}",
                 f"parity_failures={len(self.parity_failures())}",
                 f"mean_fixed_points={self.mean_fixed_points():.4f}"]
        for r in (1, 2):
            lines.append(f"residue{r} " + " ".join(f"{k}={v:.4f}" for k, v in fr[r].items()))
        return lines


def frobenius_survey(F, point: Sequence, prime_count: int = 300, prime_floor: int = 1009,
                     psp_types: Set[CycleType] | None = None,
                     pgsp_types: Set[CycleType] | None = None) -> SurveyReport:
    """Degree patterns of F(point; X) at the first ``prime_count`` good primes."""
    from .permgroup import pgsp_cycle_types, psp_cycle_types

    if prime_count < 1:
        raise SurveyError("need at least one prime")
    if psp_types is None:
        psp_types = psp_cycle_types()
    if pgsp_types is None:
        pgsp_types = pgsp_cycle_types()
    f = specialize(F, point)
    n = len(f) - 1
    d = discriminant(f)
    if not d:
        raise SurveyError("specialization is not squarefree (disc = 0)")
    bad_num = d.numerator
    samples: List[FrobeniusSample] = []
    skipped: List[Tuple[int, str]] = []
    p = int(next_prime(max(prime_floor, 2) - 1))
    tries = 0
    while len(samples) < prime_count:
        tries += 1
        if tries > 100 * prime_count + 1000:
            raise SurveyError("too many bad primes")
        reason = None
        if p == 3:
            reason = "p = 3"
        elif bad_num % p == 0 or d.denominator % p == 0:
            reason = "divides disc"
        else:
            try:
                fp = reduce_mod_p(f, p)
            except BadPrime:
                reason = "divides a denominator"
            else:
                if len(fp) - 1 != n:
                    reason = "divides lc"
        if reason:
            log.info("skipping prime %d: %s", p, reason)
            skipped.append((p, reason))
        else:
            pat = degree_pattern(fp, p)
            sample = FrobeniusSample(p, p % 3, pat != NOT_SQUAREFREE,
                                     None if pat == NOT_SQUAREFREE else pat, legendre_q(d, p))
            samples.append(sample)
        p = int(next_prime(p))
    return SurveyReport(tuple(mpq(c) for c in point), samples, skipped, d, psp_types, pgsp_types)
