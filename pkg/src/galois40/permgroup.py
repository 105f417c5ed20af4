"""Degree-40 permutation actions of PSp4(3) and PGSp4(3).

The group Sp4(F3) is generated by symplectic transvections acting on
column vectors of F3^4 with the form B(x, y) = x^T J y, J = [[0, I], [-I, 0]].
Its projective image acts on the 40 points of P^3(F3) and on the 40
totally isotropic lines; both actions are built and examined separately.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

P = 3
DIM = 4

Vec = Tuple[int, int, int, int]
Mat = Tuple[Tuple[int, ...], ...]
Perm = Tuple[int, ...]
CycleType = Tuple[int, ...]

J: Mat = ((0, 0, 1, 0), (0, 0, 0, 1), (2, 0, 0, 0), (0, 2, 0, 0))


class ClosureBudgetExceeded(RuntimeError):
    pass


class NotTransitive(ValueError):
    pass


# -- F3 linear algebra -----------------------------------------------------------

def mat_mul(A: Mat, B: Mat) -> Mat:
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) % P for j in range(n))
                 for i in range(n))


def transpose(A: Mat) -> Mat:
    return tuple(zip(*A))


def mat_vec(A: Mat, v: Vec) -> Vec:
    return tuple(sum(a * x for a, x in zip(row, v)) % P for row in A)


def identity(n: int = DIM) -> Mat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def scalar(c: int, n: int = DIM) -> Mat:
    return tuple(tuple((c % P) * int(i == j) for j in range(n)) for i in range(n))


def det_mod3(A: Mat) -> int:
    M = [list(r) for r in A]
    n = len(M)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] % P), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c] % P
        inv = pow(M[c][c], -1, P)
        for r in range(c + 1, n):
            f = M[r][c] * inv % P
            if f:
                M[r] = [(x - f * y) % P for x, y in zip(M[r], M[c])]
    return det % P


def form(x: Vec, y: Vec) -> int:
    """B(x, y) = x^T J y."""
    return (x[0] * y[2] + x[1] * y[3] - x[2] * y[0] - x[3] * y[1]) % P


def multiplier(g: Mat) -> Optional[int]:
    """The similitude factor nu with g^T J g = nu J, or None."""
    M = mat_mul(mat_mul(transpose(g), J), g)
    for nu in (1, 2):
        if M == tuple(tuple(nu * e % P for e in row) for row in J):
            return nu
    return None


def is_symplectic(g: Mat) -> bool:
    return multiplier(g) == 1


def normalize_vector(v: Vec) -> Vec:
    """Scale so that the first nonzero coordinate is 1."""
    for x in v:
        if x:
            inv = pow(x, -1, P)
            return tuple(y * inv % P for y in v)
    raise ValueError("zero vector has no projective class")


def projective_points() -> List[Vec]:
    pts = []
    for v in itertools.product(range(P), repeat=DIM):
        if any(v) and normalize_vector(v) == v:
            pts.append(v)
    return sorted(pts)


def _rref(rows: Sequence[Vec]) -> Tuple[Vec, ...]:
    M = [list(r) for r in rows]
    out = []
    col = 0
    rank_rows = 0
    n = len(M)
    for col in range(DIM):
        piv = next((r for r in range(rank_rows, n) if M[r][col] % P), None)
        if piv is None:
            continue
        M[rank_rows], M[piv] = M[piv], M[rank_rows]
        inv = pow(M[rank_rows][col], -1, P)
        M[rank_rows] = [x * inv % P for x in M[rank_rows]]
        for r in range(n):
            if r != rank_rows and M[r][col]:
                f = M[r][col]
                M[r] = [(x - f * y) % P for x, y in zip(M[r], M[rank_rows])]
        rank_rows += 1
    for r in M[:rank_rows]:
        out.append(tuple(r))
    return tuple(out)


def isotropic_lines() -> List[Tuple[Vec, Vec]]:
    """All 2-dimensional totally isotropic subspaces in reduced echelon form."""
    pts = projective_points()
    lines = set()
    for x, y in itertools.combinations(pts, 2):
        if form(x, y) == 0:
            basis = _rref([x, y])
            if len(basis) == 2:
                lines.add(basis)
    return sorted(lines)


# -- generators --------------------------------------------------------------------

def transvection(v: Vec) -> Mat:
    """x -> x + B(x, v) v as a matrix acting on column vectors."""
    cols = []
    for i in range(DIM):
        e = tuple(int(i == k) for k in range(DIM))
        cols.append(tuple((a + form(e, v) * b) % P for a, b in zip(e, v)))
    return transpose(tuple(cols))


# Deterministic transvection vectors; verified to generate Sp4(3).
TRANSVECTION_VECTORS: Tuple[Vec, ...] = (
    (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 0, 0), (1, 0, 0, 1),
)


def symplectic_generators() -> List[Mat]:
    return [transvection(v) for v in TRANSVECTION_VECTORS]


def similitude_generator() -> Mat:
    """diag(1, 1, -1, -1), multiplier 2 = -1."""
    return ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2))


def matrix_group_order(gens: Sequence[Mat], limit: int = 10**6) -> int:
    seen = {identity()}
    queue = deque(seen)
    while queue:
        g = queue.popleft()
        for h in gens:
            k = mat_mul(h, g)
            if k not in seen:
                seen.add(k)
                if len(seen) > limit:
                    raise ClosureBudgetExceeded(f"more than {limit} matrices")
                queue.append(k)
    return len(seen)


# -- permutations ------------------------------------------------------------------

def compose(p: Perm, q: Perm) -> Perm:
    """(p*q)(i) = p(q(i)): apply q first."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycle_type(p: Perm) -> CycleType:
    n = len(p)
    seen = [False] * n
    lens = []
    for i in range(n):
        if not seen[i]:
            k = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                k += 1
            lens.append(k)
    return tuple(sorted(lens, reverse=True))


def is_even(ct: CycleType) -> bool:
    return sum(k - 1 for k in ct) % 2 == 0


def format_cycle_type(ct: CycleType, sep: str = " ") -> str:
    """(3, 2, 2, 1) -> '3^1 2^2 1^1'."""
    counts = Counter(ct)
    return sep.join(f"{k}^{counts[k]}" for k in sorted(counts, reverse=True))


def parse_cycle_type(text: str) -> CycleType:
    out = []
    for tok in text.replace(",", " ").split():
        k, _, m = tok.partition("^")
        out.extend([int(k)] * int(m or 1))
    return tuple(sorted(out, reverse=True))


def action_on(domain: str, g: Mat) -> Perm:
    """Permutation of the 40 points or 40 isotropic lines induced by ``g``."""
    if det_mod3(g) == 0:
        raise ValueError("singular matrix")
    if domain == "points":
        pts = _points()
        index = _point_index()
        return tuple(index[normalize_vector(mat_vec(g, p))] for p in pts)
    if domain == "lines":
        lines = _lines()
        index = _line_index()
        return tuple(index[_rref([mat_vec(g, b) for b in line])] for line in lines)
    raise ValueError(f"unknown domain {domain!r}")


_CACHE: Dict[str, object] = {}


def _points():
    if "points" not in _CACHE:
        _CACHE["points"] = projective_points()
    return _CACHE["points"]


def _point_index():
    if "point_index" not in _CACHE:
        _CACHE["point_index"] = {p: i for i, p in enumerate(_points())}
    return _CACHE["point_index"]


def _lines():
    if "lines" not in _CACHE:
        _CACHE["lines"] = isotropic_lines()
    return _CACHE["lines"]


def _line_index():
    if "line_index" not in _CACHE:
        _CACHE["line_index"] = {l: i for i, l in enumerate(_lines())}
    return _CACHE["line_index"]


# -- permutation groups ---------------------------------------------------------------

@dataclass
class PermGroup:
    generators: List[Perm]
    degree: int
    name: str = ""
    max_elements: int = 10**6
    _elements: Optional[List[Perm]] = field(default=None, repr=False)
    _types: Optional[Counter] = field(default=None, repr=False)

    @classmethod
    def from_generators(cls, gens: Iterable[Perm], degree: int | None = None, name: str = "") -> "PermGroup":
        gens = [tuple(g) for g in gens]
        if degree is None:
            degree = len(gens[0]) if gens else 0
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise ValueError("generator is not a permutation")
        ident = tuple(range(degree))
        gens = [g for g in dict.fromkeys(gens) if g != ident]
        return cls(gens, degree, name)

    @property
    def identity(self) -> Perm:
        return tuple(range(self.degree))

    def elements(self) -> List[Perm]:
        if self._elements is None:
            ident = self.identity
            seen = {ident}
            order = [ident]
            queue = deque(order)
            while queue:
                g = queue.popleft()
                for h in self.generators:
                    k = compose(h, g)
                    if k not in seen:
                        seen.add(k)
                        order.append(k)
                        if len(seen) > self.max_elements:
                            raise ClosureBudgetExceeded(f"more than {self.max_elements} elements")
                        queue.append(k)
            self._elements = order
        return self._elements

    def order(self) -> int:
        return len(self.elements())

    def contains(self, p: Perm) -> bool:
        return tuple(p) in set(self.elements())

    def orbit(self, point: int) -> List[int]:
        seen = {point}
        out = [point]
        queue = deque(out)
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    queue.append(y)
        return out

    def is_transitive(self) -> bool:
        return self.degree > 0 and len(self.orbit(0)) == self.degree

    def stabilizer_order(self, point: int) -> int:
        return sum(1 for g in self.elements() if g[point] == point)

    def minimal_block(self, seed: Sequence[int]) -> List[FrozenSet[int]]:
        """Finest block system in which all of ``seed`` lie in one block."""
        n = self.degree
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx == ry:
                return False
            parent[ry] = rx
            return True

        seed = list(seed)
        queue = deque()
        for s in seed[1:]:
            if union(seed[0], s):
                queue.append((seed[0], s))
        while queue:
            x, y = queue.popleft()
            for g in self.generators:
                if union(g[x], g[y]):
                    queue.append((g[x], g[y]))
        classes: Dict[int, Set[int]] = {}
        for i in range(n):
            classes.setdefault(find(i), set()).add(i)
        return sorted((frozenset(c) for c in classes.values()), key=min)

    def block_systems(self) -> List[List[FrozenSet[int]]]:
        """Nontrivial minimal block systems from seeds {0, k}; empty iff primitive."""
        if not self.is_transitive():
            raise NotTransitive("block systems are only defined for transitive groups")
        found = []
        seen = set()
        for k in range(1, self.degree):
            blocks = self.minimal_block([0, k])
            if len(blocks) == 1:
                continue
            key = frozenset(blocks)
            if key not in seen:
                seen.add(key)
                found.append(blocks)
        # keep the minimal ones (not refined by another system found)
        def refines(a, b):
            return all(any(x <= y for y in b) for x in a)
        minimal = [a for a in found if not any(b is not a and refines(b, a) for b in found)]
        return minimal

    def is_primitive(self) -> bool:
        return not self.block_systems()

    def cycle_type_counts(self) -> Counter:
        if self._types is None:
            self._types = Counter(cycle_type(g) for g in self.elements())
        return self._types

    def cycle_type_set(self) -> Set[CycleType]:
        return set(self.cycle_type_counts())

    def normal_closure(self, g: Perm) -> "PermGroup":
        conj = {compose(compose(inverse(h), g), h) for h in self.generators}
        conj.add(g)
        N = PermGroup.from_generators(conj, self.degree)
        # close under conjugation by generators
        changed = True
        while changed:
            changed = False
            elems = set(N.elements())
            for h in self.generators:
                hi = inverse(h)
                for x in list(N.generators):
                    y = compose(compose(hi, x), h)
                    if y not in elems:
                        N = PermGroup.from_generators(N.generators + [y], self.degree)
                        changed = True
                        break
                if changed:
                    break
        return N


@dataclass
class GroupData:
    action: str
    variant: str
    group: PermGroup
    subgroup: Optional[PermGroup] = None

    def coset_cycle_types(self) -> Set[CycleType]:
        """Cycle types of elements outside the PSp4(3) subgroup."""
        if self.subgroup is None:
            return set()
        inner = set(self.subgroup.elements())
        return {cycle_type(g) for g in self.group.elements() if g not in inner}


def build_group(variant: str = "psp", action: str = "points") -> GroupData:
    """PSp4(3) ('psp') or PGSp4(3) ('pgsp') acting on 'points' or 'lines'."""
    key = ("group", variant, action)
    if key in _CACHE:
        return _CACHE[key]
    if action not in ("points", "lines"):
        raise ValueError(f"unknown action {action!r}")
    sp = [action_on(action, g) for g in symplectic_generators()]
    psp = PermGroup.from_generators(sp, 40, name=f"PSp4(3) on {action}")
    if variant == "psp":
        data = GroupData(action, variant, psp)
    elif variant == "pgsp":
        gens = sp + [action_on(action, similitude_generator())]
        pg = PermGroup.from_generators(gens, 40, name=f"PGSp4(3) on {action}")
        data = GroupData(action, variant, pg, subgroup=psp)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    _CACHE[key] = data
    return data


def group_order(variant: str = "psp", action: str = "points") -> int:
    return build_group(variant, action).group.order()


def orbit_stabilizer_holds(G: PermGroup, point: int = 0) -> bool:
    """|G| == |orbit(point)| * |Stab(point)|, counted independently."""
    return G.order() == len(G.orbit(point)) * G.stabilizer_order(point)


def psp_cycle_types() -> Set[CycleType]:
    """Union over both actions of the PSp4(3) cycle types."""
    return build_group("psp", "points").group.cycle_type_set() | \
        build_group("psp", "lines").group.cycle_type_set()


def pgsp_cycle_types() -> Set[CycleType]:
    return build_group("pgsp", "points").group.cycle_type_set() | \
        build_group("pgsp", "lines").group.cycle_type_set()


def simplicity_smoke_test(G: PermGroup, trials: int = 10, seed: int = 0) -> bool:
    """Normal closures of random non-identity elements are the whole group."""
    rng = random.Random(seed)
    elems = G.elements()
    n = G.order()
    for _ in range(trials):
        g = rng.choice(elems[1:])
        if G.normal_closure(g).order() != n:
            return False
    return True
