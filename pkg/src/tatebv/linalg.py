"""Exact linear algebra over prime fields F_p.

Everything here is integer arithmetic mod p: sparse vectors are dicts
mapping basis indices to nonzero residues, matrices are column-major
lists of such dicts.  Elimination is deterministic (pivot row = lowest
index in the running column's support), so ranks, kernel bases and
quotient representatives are bit-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

DENSE_COLUMN_LIMIT = 4096
DENSE_ENTRY_LIMIT = 16_000_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field F_p."""

    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")

    def inv(self, a: int) -> int:
        return pow(a % self.p, self.p - 2, self.p)

    def neg(self, a: int) -> int:
        return (-a) % self.p


class SparseVector:
    """Sparse vector over F_p, keyed by arbitrary hashable basis indices."""

    __slots__ = ("p", "entries")

    def __init__(self, p: int, entries: Optional[Dict[Hashable, int]] = None):
        self.p = p
        self.entries: Dict[Hashable, int] = {}
        if entries:
            for k, v in entries.items():
                v %= p
                if v:
                    self.entries[k] = v

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseVector) and self.p == other.p and self.entries == other.entries

    def __repr__(self) -> str:
        return f"SparseVector(p={self.p}, {self.entries!r})"

    def copy(self) -> "SparseVector":
        out = SparseVector(self.p)
        out.entries = dict(self.entries)
        return out

    def get(self, key: Hashable) -> int:
        return self.entries.get(key, 0)

    def add_scaled(self, other: "SparseVector", c: int) -> "SparseVector":
        out = self.copy()
        add_scaled_inplace(out.entries, other.entries, c, self.p)
        return out

    def scale(self, c: int) -> "SparseVector":
        c %= self.p
        out = SparseVector(self.p)
        if c:
            out.entries = {k: (v * c) % self.p for k, v in self.entries.items()}
        return out


def add_scaled_inplace(dst: Dict, src: Dict, c: int, p: int) -> None:
    """dst += c * src, dropping zeros."""
    c %= p
    if not c:
        return
    for k, v in src.items():
        w = (dst.get(k, 0) + c * v) % p
        if w:
            dst[k] = w
        else:
            dst.pop(k, None)


class SparseMatrix:
    """Column-major sparse matrix over F_p."""

    __slots__ = ("nrows", "ncols", "p", "columns")

    def __init__(self, nrows: int, ncols: int, p: int):
        self.nrows = nrows
        self.ncols = ncols
        self.p = p
        self.columns: List[Dict[int, int]] = [dict() for _ in range(ncols)]

    def set_entry(self, i: int, j: int, v: int) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry ({i},{j}) out of bounds")
        v %= self.p
        if v:
            self.columns[j][i] = v
        else:
            self.columns[j].pop(i, None)

    def add_entry(self, i: int, j: int, v: int) -> None:
        self.set_entry(i, j, (self.columns[j].get(i, 0) + v) % self.p)

    def column(self, j: int) -> Dict[int, int]:
        return self.columns[j]

    def apply(self, v: Dict[int, int]) -> Dict[int, int]:
        """Matrix-vector product; v is a sparse vector over column indices."""
        out: Dict[int, int] = {}
        for j, c in v.items():
            add_scaled_inplace(out, self.columns[j], c, self.p)
        return out

    def triples(self) -> Iterable[Tuple[int, int, int]]:
        for j, col in enumerate(self.columns):
            for i in sorted(col):
                yield (i, j, col[i])


class ColumnReducer:
    """Incremental column echelon form with combination tracking.

    Columns are fed in order; each is reduced against the established
    pivots (applied in creation order).  A column that survives becomes a
    pivot (normalized, pivot row = minimal remaining row index); one that
    dies yields a kernel combination.  The same engine answers membership
    and solve queries afterwards.
    """

    def __init__(self, p: int):
        self.p = p
        self.pivots: List[Tuple[int, Dict[int, int], Optional[Dict[int, int]]]] = []
        self.kernel: List[Dict[int, int]] = []
        self._fed = 0

    def _reduce(self, v: Dict[int, int], combo: Optional[Dict[int, int]]):
        p = self.p
        for row, col, pcombo in self.pivots:
            c = v.get(row)
            if c:
                add_scaled_inplace(v, col, -c, p)
                if combo is not None and pcombo is not None:
                    add_scaled_inplace(combo, pcombo, -c, p)
        return v, combo

    def feed(self, column: Dict[int, int], track: bool = True) -> None:
        j = self._fed
        self._fed += 1
        v = dict(column)
        combo: Optional[Dict[int, int]] = {j: 1} if track else None
        v, combo = self._reduce(v, combo)
        if not v:
            if track:
                self.kernel.append(combo if combo is not None else {})
            return
        row = min(v)
        inv = pow(v[row], self.p - 2, self.p)
        if inv != 1:
            v = {k: (val * inv) % self.p for k, val in v.items()}
            if combo is not None:
                combo = {k: (val * inv) % self.p for k, val in combo.items()}
        self.pivots.append((row, v, combo))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def residual(self, vec: Dict[int, int]) -> Dict[int, int]:
        v = dict(vec)
        v, _ = self._reduce(v, None)
        return v

    def contains(self, vec: Dict[int, int]) -> bool:
        return not self.residual(vec)

    def express(self, vec: Dict[int, int]) -> Optional[Dict[int, int]]:
        """Coefficients over the original columns with vec = sum(coeff * col)."""
        p = self.p
        v = dict(vec)
        out: Dict[int, int] = {}
        for row, col, pcombo in self.pivots:
            c = v.get(row)
            if c:
                add_scaled_inplace(v, col, -c, p)
                if pcombo is None:
                    raise ValueError("reducer was fed with track=False")
                add_scaled_inplace(out, pcombo, c, p)
        if v:
            return None
        return out


def _dense_eligible(M: SparseMatrix) -> bool:
    return M.ncols <= DENSE_COLUMN_LIMIT and M.nrows * max(M.ncols, 1) <= DENSE_ENTRY_LIMIT


def _dense_rref(M: SparseMatrix):
    """Reduced row echelon form (numpy, int32 mod p): (R, pivot column list)."""
    arr = np.zeros((M.nrows, M.ncols), dtype=np.int32)
    for j, col in enumerate(M.columns):
        for i, v in col.items():
            arr[i, j] = v
    p = M.p
    r = 0
    pivots: List[int] = []
    for j in range(M.ncols):
        nz = np.nonzero(arr[r:, j])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            arr[[r, piv]] = arr[[piv, r]]
        inv = pow(int(arr[r, j]), p - 2, p)
        if inv != 1:
            arr[r] = (arr[r] * inv) % p
        rows = np.nonzero(arr[:, j])[0]
        rows = rows[rows != r]
        if rows.size:
            arr[rows] = (arr[rows] - np.outer(arr[rows, j], arr[r])) % p
        pivots.append(j)
        r += 1
        if r == M.nrows:
            break
    return arr[:r], pivots


def rank(M: SparseMatrix) -> int:
    if _dense_eligible(M):
        return len(_dense_rref(M)[1])
    red = ColumnReducer(M.p)
    for col in M.columns:
        red.feed(col, track=False)
    return red.rank


def pivot_columns(M: SparseMatrix) -> List[int]:
    """Indices of a deterministic maximal independent set of columns."""
    if _dense_eligible(M):
        return _dense_rref(M)[1]
    red = ColumnReducer(M.p)
    out: List[int] = []
    for j, col in enumerate(M.columns):
        before = red.rank
        red.feed(col, track=False)
        if red.rank > before:
            out.append(j)
    return out


def kernel_basis(M: SparseMatrix) -> List[SparseVector]:
    """Vectors v (over column indices) with Mv = 0 spanning the kernel.

    Each kernel vector carries coefficient 1 at its own free column and
    support only at pivot columns (reduced echelon shape).
    """
    p = M.p
    if _dense_eligible(M):
        R, pivots = _dense_rref(M)
        pivot_set = set(pivots)
        out = []
        for j in range(M.ncols):
            if j in pivot_set:
                continue
            sv = SparseVector(p)
            sv.entries[j] = 1
            for i, pc in enumerate(pivots):
                v = int(R[i, j]) % p
                if v:
                    sv.entries[pc] = (-v) % p
            out.append(sv)
        return out
    red = ColumnReducer(p)
    for col in M.columns:
        red.feed(col, track=True)
    out = []
    for combo in red.kernel:
        sv = SparseVector(p)
        sv.entries = dict(combo)
        out.append(sv)
    return out


def solve(M: SparseMatrix, b: SparseVector) -> Optional[SparseVector]:
    """A solution of Mx = b with free variables zero, or None if inconsistent."""
    for k in b.entries:
        if not (0 <= k < M.nrows):
            raise ValueError("right-hand side has entries outside the row space")
    red = ColumnReducer(M.p)
    for col in M.columns:
        red.feed(col, track=True)
    coeffs = red.express(dict(b.entries))
    if coeffs is None:
        return None
    out = SparseVector(M.p)
    out.entries = coeffs
    return out


class QuotientSpace:
    """ker / im with deterministic representatives and a coordinate solver.

    Built from a spanning list of kernel vectors and a list of image
    vectors that must lie in their span (violations signal a broken
    differential).  project() expresses any vector of the kernel span in
    the chosen representative basis mod the image; lift() goes back.
    """

    def __init__(self, p: int, kernel: Sequence[SparseVector], image: Sequence[SparseVector]):
        self.p = p
        self.kernel_basis = list(kernel)
        self.image_basis = list(image)
        kernel_red = ColumnReducer(p)
        for v in kernel:
            kernel_red.feed(dict(v.entries), track=False)
        # pivots tagged None are image directions, an int k tags representative k
        self._pivots: List[Tuple[int, Dict[int, int], Optional[int]]] = []
        for v in image:
            if not kernel_red.contains(dict(v.entries)):
                raise ValueError("image vector outside kernel span (d^2 != 0?)")
            w = self._residual(dict(v.entries))
            if w:
                row = min(w)
                inv = pow(w[row], p - 2, p)
                if inv != 1:
                    w = {k: (val * inv) % p for k, val in w.items()}
                self._pivots.append((row, w, None))
        self.representatives: List[SparseVector] = []
        for v in kernel:
            w = self._residual(dict(v.entries))
            if w:
                row = min(w)
                inv = pow(w[row], p - 2, p)
                if inv != 1:
                    w = {k: (val * inv) % p for k, val in w.items()}
                rep = SparseVector(p)
                rep.entries = dict(w)
                self._pivots.append((row, w, len(self.representatives)))
                self.representatives.append(rep)

    def _residual(self, v: Dict[int, int]) -> Dict[int, int]:
        p = self.p
        for row, col, _tag in self._pivots:
            c = v.get(row)
            if c:
                add_scaled_inplace(v, col, -c, p)
        return v

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def project(self, v: SparseVector) -> List[int]:
        """Coordinates of v's class; raises if v is not in the kernel span."""
        p = self.p
        w = dict(v.entries)
        coords = [0] * self.dim
        for row, col, tag in self._pivots:
            c = w.get(row)
            if c:
                add_scaled_inplace(w, col, -c, p)
                if tag is not None:
                    coords[tag] = c % p
        if w:
            raise ValueError("vector is not in the kernel span (not a cocycle)")
        return coords

    def lift(self, coords: Sequence[int]) -> SparseVector:
        if len(coords) != self.dim:
            raise ValueError("coordinate length mismatch")
        out = SparseVector(self.p)
        for c, rep in zip(coords, self.representatives):
            add_scaled_inplace(out.entries, rep.entries, c, self.p)
        return out
