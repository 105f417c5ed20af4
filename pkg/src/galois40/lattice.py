"""Integer lattices: Hermite normal form, kernels of weight vectors, membership.

A weight vector w assigns a degree to each generator of a graded ring; the
integer kernel {x : w.x = 0} is the lattice of exponent vectors of
degree-zero Laurent monomials, i.e. of invariant rational functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

IntVec = Tuple[int, ...]


class LatticeError(ValueError):
    pass


def _check_rect(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    if not rows:
        raise LatticeError("matrix needs at least one row")
    n = len(rows[0])
    if n == 0 or any(len(r) != n for r in rows):
        raise LatticeError("matrix must be rectangular with at least one column")
    return [[int(x) for x in r] for r in rows]


def hnf(rows: Sequence[Sequence[int]]) -> List[IntVec]:
    """Row Hermite normal form, zero rows dropped.

    Pivots are positive and strictly increasing in column, entries above a
    pivot lie in [0, pivot).  The result depends only on the row lattice.
    """
    M = _check_rect(rows)
    m, n = len(M), len(M[0])
    r = 0
    for c in range(n):
        if r == m:
            break
        # Euclid on column c among rows r..m-1
        while True:
            nz = [i for i in range(r, m) if M[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[piv] = M[piv], M[r]
            done = True
            for i in range(r + 1, m):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    if M[i][c]:
                        done = False
            if done:
                break
        if not M[r][c]:
            continue
        if M[r][c] < 0:
            M[r] = [-a for a in M[r]]
        p = M[r][c]
        for i in range(r):
            q = M[i][c] // p
            if q:
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        r += 1
    return [tuple(row) for row in M[:r]]


@dataclass(frozen=True)
class LatticeBasis:
    """A lattice stored by its row HNF; equality is structural."""

    rows: Tuple[IntVec, ...]
    dim: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], dim: int | None = None) -> "LatticeBasis":
        if not rows:
            if dim is None:
                raise LatticeError("dimension needed for the zero lattice")
            return cls((), dim)
        H = hnf(rows)
        return cls(tuple(H), len(rows[0]))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def determinant(self) -> int:
        """Product of pivots: the covolume inside the saturated span."""
        d = 1
        for row in self.rows:
            d *= next(x for x in row if x)
        return d

    def contains(self, v: Sequence[int]) -> bool:
        return lattice_contains(self, v)

    def __contains__(self, v) -> bool:
        return lattice_contains(self, v)

    def is_sublattice_of(self, other: "LatticeBasis") -> bool:
        return all(lattice_contains(other, r) for r in self.rows)


def lattice_contains(basis: LatticeBasis, v: Sequence[int]) -> bool:
    """Membership by back-substitution against the HNF pivots."""
    if len(v) != basis.dim:
        raise LatticeError(f"vector has length {len(v)}, lattice dimension {basis.dim}")
    w = [int(x) for x in v]
    for row in basis.rows:
        c = next(i for i, x in enumerate(row) if x)
        if any(w[:c]):
            return False
        q, rem = divmod(w[c], row[c])
        if rem:
            return False
        w = [a - q * b for a, b in zip(w, row)]
    return not any(w)


def kernel_basis(weights: Sequence[int]) -> LatticeBasis:
    """HNF basis of {x in Z^n : weights . x = 0}.

    Computed from the HNF of [w^T | I]: rows whose first entry vanishes
    carry kernel vectors in the identity block.
    """
    w = [int(x) for x in weights]
    if not w or not any(w):
        raise LatticeError("weight vector must be nonzero")
    n = len(w)
    aug = [[w[i]] + [int(i == j) for j in range(n)] for i in range(n)]
    H = hnf(aug)
    ker = [row[1:] for row in H if row[0] == 0]
    return LatticeBasis.from_rows(ker, n) if ker else LatticeBasis((), n)


_SUB = str.maketrans("0123456789-", "₀₁₂₃₄₅₆₇₈₉₋")
_SUP = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")

# Greek-letter names used by the Siegel modular form generators.
_GREEK = {"phi": "φ", "chi": "χ", "alpha": "α", "beta": "β", "gamma": "γ", "delta": "δ",
          "psi": "ψ", "theta": "θ"}


def pretty_name(name: str) -> str:
    """'chi10' -> 'χ₁₀'; names already in unicode pass through."""
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    head = _GREEK.get(head, head)
    return head + tail.translate(_SUB)


def _power(name: str, k: int) -> str:
    return name if k == 1 else name + str(k).translate(_SUP)


def format_monomial(exps: Sequence[int], names: Sequence[str]) -> str:
    if len(exps) != len(names):
        raise LatticeError("one name per coordinate required")
    names = [pretty_name(n) for n in names]
    num = [_power(n, k) for n, k in zip(names, exps) if k > 0]
    den = [_power(n, -k) for n, k in zip(names, exps) if k < 0]
    top = "·".join(num) if num else "1"
    if not den:
        return top
    return top + "/" + "·".join(den)


def generators_as_monomials(basis: LatticeBasis | Sequence[Sequence[int]],
                            names: Sequence[str]) -> List[str]:
    rows = basis.rows if isinstance(basis, LatticeBasis) else [tuple(r) for r in basis]
    if not rows:
        raise LatticeError("basis has rank 0")
    return [format_monomial(r, names) for r in rows]
