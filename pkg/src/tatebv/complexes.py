"""Canonical bases and differentials for the Tate-Hochschild complex of kG
and the Tate cochain complexes of its subgroups, plus cohomology.

Degree conventions (d is the complex degree, always an integer):

* D-side, d = m >= 0: basis keys are pairs ``(args, h)`` with ``args`` a
  tuple of m non-identity elements and ``h`` any element -- the map
  sending exactly that tuple to h.
* D-side, d = -s-1 <= -1: basis keys are pairs ``(g0, tail)`` with g0 any
  element and ``tail`` a tuple of s non-identity elements.
* Group side (trivial coefficients), d = n >= 0: keys are n-tuples over
  the subgroup's non-identity members; d = -s-1: s-tuples.

The normalized convention is baked into the bases: tuple slots never hold
the identity, and any operator term that would put the identity into such
a slot is dropped.  The official differential is the signed one: the
coboundary on non-negative degrees and (-1)^d times the unsigned map out
of degree d < 0 (so -trace out of degree -1).
"""

from __future__ import annotations

import itertools
import threading
from typing import Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from .groups import ConjugacyData, Group, Subgroup
from .linalg import QuotientSpace, SparseMatrix, SparseVector, add_scaled_inplace

Key = Hashable


class WindowError(ValueError):
    pass


def sign_pow(k: int) -> int:
    """(-1)**k as an exact integer for any integer k (negative included)."""
    return -1 if k % 2 else 1


def _acc(out: Dict, key: Key, c: int) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


# ---------------------------------------------------------------------------
# D*(kG, kG) basis-level operators

def dim_degree(G: Group, d: int) -> int:
    s = d if d >= 0 else -d - 1
    return G.order * (G.order - 1) ** s


def d_coboundary_terms(G: Group, key: Key, m: int) -> Dict[Key, int]:
    """Unsigned coboundary of a degree-m basis cochain (m >= 0)."""
    args, h = key
    out: Dict[Key, int] = {}
    for a in G.nontrivial:
        _acc(out, ((a,) + args, G.mult[a][h]), 1)
    sign = 1
    for i in range(1, m + 1):
        sign = -sign
        t = args[i - 1]
        pre, post = args[: i - 1], args[i:]
        for u in G.nontrivial:
            v = G.mult[G.inv[u]][t]
            if v:
                _acc(out, (pre + (u, v) + post, h), sign)
    last = -sign
    for b in G.nontrivial:
        _acc(out, (args + (b,), G.mult[h][b]), last)
    return out


def d_boundary_terms(G: Group, key: Key, s: int) -> Dict[Key, int]:
    """Unsigned boundary of a degree -s-1 basis chain (s >= 1)."""
    g0, tail = key
    out: Dict[Key, int] = {}
    _acc(out, (G.mult[g0][tail[0]], tail[1:]), 1)
    sign = 1
    for i in range(1, s):
        sign = -sign
        w = G.mult[tail[i - 1]][tail[i]]
        if w:
            _acc(out, (g0, tail[: i - 1] + (w,) + tail[i + 1:]), sign)
    _acc(out, (G.mult[tail[-1]][g0], tail[:-1]), -sign if s > 1 else -1)
    return out


def d_trace_terms(G: Group, key: Key) -> Dict[Key, int]:
    """Trace map out of degree -1: g0 -> sum_g g g0 g^-1 as degree-0 cochains."""
    g0, _tail = key
    out: Dict[Key, int] = {}
    for g in range(G.order):
        _acc(out, ((), G.conj(g, g0)), 1)
    return out


def d_unsigned_terms(G: Group, key: Key, d: int) -> Dict[Key, int]:
    if d >= 0:
        return d_coboundary_terms(G, key, d)
    if d == -1:
        return d_trace_terms(G, key)
    return d_boundary_terms(G, key, -d - 1)


def class_of_index(cd: ConjugacyData, d: int, key: Key) -> int:
    """Conjugacy-class component of a basis key: the class of the twisted value."""
    G = cd.group
    if d >= 0:
        args, h = key
        return cd.class_of[G.mult[G.inv[G.prod(args)]][h]]
    g0, tail = key
    return cd.class_of[G.mult[G.prod(tail)][g0]]


# ---------------------------------------------------------------------------
# group-side (trivial coefficient) basis-level operators

def group_dim_degree(H_order: int, d: int) -> int:
    s = d if d >= 0 else -d - 1
    return (H_order - 1) ** s


def group_coboundary_terms(G: Group, members: Sequence[int], key: Key, n: int) -> Dict[Key, int]:
    out: Dict[Key, int] = {}
    for a in members:
        if a:
            _acc(out, (a,) + key, 1)
    sign = 1
    for i in range(1, n + 1):
        sign = -sign
        t = key[i - 1]
        pre, post = key[: i - 1], key[i:]
        for u in members:
            if not u:
                continue
            v = G.mult[G.inv[u]][t]
            if v:
                _acc(out, pre + (u, v) + post, sign)
    last = -sign
    for b in members:
        if b:
            _acc(out, key + (b,), last)
    return out


def group_boundary_terms(G: Group, key: Key, s: int) -> Dict[Key, int]:
    out: Dict[Key, int] = {}
    _acc(out, key[1:], 1)
    sign = 1
    for i in range(1, s):
        sign = -sign
        w = G.mult[key[i - 1]][key[i]]
        if w:
            _acc(out, key[: i - 1] + (w,) + key[i + 1:], sign)
    _acc(out, key[:-1], -sign if s > 1 else -1)
    return out


# ---------------------------------------------------------------------------
# elements

class _Element:
    """Homogeneous element: degree plus sparse coefficients over basis keys."""

    __slots__ = ("complex", "degree", "coeffs")

    def __init__(self, cplx: "_BaseComplex", degree: int, coeffs: Optional[Dict[Key, int]] = None):
        self.complex = cplx
        self.degree = degree
        self.coeffs: Dict[Key, int] = {}
        if coeffs:
            p = cplx.p
            for k, v in coeffs.items():
                v %= p
                if v:
                    self.coeffs[k] = v

    @property
    def p(self) -> int:
        return self.complex.p

    def is_zero(self) -> bool:
        return not self.coeffs

    def copy(self):
        out = type(self)(self.complex, self.degree)
        out.coeffs = dict(self.coeffs)
        return out

    def add(self, other, c: int = 1):
        if other.degree != self.degree or other.complex is not self.complex:
            raise ValueError("degree/complex mismatch in addition")
        out = self.copy()
        add_scaled_inplace(out.coeffs, other.coeffs, c, self.p)
        return out

    def sub(self, other):
        return self.add(other, -1)

    def scale(self, c: int):
        c %= self.p
        out = type(self)(self.complex, self.degree)
        if c:
            out.coeffs = {k: (v * c) % self.p for k, v in self.coeffs.items()}
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, _Element) and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(degree={self.degree}, terms={len(self.coeffs)})"


class TateElement(_Element):
    """Element of D^d(kG, kG)."""

    @property
    def group(self) -> Group:
        return self.complex.group


class GroupTateElement(_Element):
    """Element of the Tate cochain complex of a subgroup, trivial coefficients."""

    @property
    def subgroup(self) -> Subgroup:
        return self.complex.subgroup


class CohomologySpace:
    """Computed cohomology in one degree with representatives and coordinates."""

    def __init__(self, cplx: "_BaseComplex", degree: int, quotient: QuotientSpace):
        self.complex = cplx
        self.degree = degree
        self.quotient = quotient

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def representative(self, i: int):
        return self.lift([1 if j == i else 0 for j in range(self.dim)])

    @property
    def representatives(self):
        return [self.representative(i) for i in range(self.dim)]

    def project(self, elem) -> List[int]:
        """Coordinates of a cocycle's class; raises ValueError if not a cocycle."""
        if elem.degree != self.degree:
            raise ValueError("degree mismatch")
        idx = self.complex.index(self.degree)
        vec = SparseVector(self.complex.p, {idx[k]: v for k, v in elem.coeffs.items()})
        return self.quotient.project(vec)

    def lift(self, coords: Sequence[int]):
        basis = self.complex.basis(self.degree)
        vec = self.quotient.lift(coords)
        return self.complex.element(self.degree, {basis[i]: v for i, v in vec.entries.items()})


class _BaseComplex:
    element_cls = _Element

    def __init__(self, p: int):
        self.p = p
        self._basis: Dict[int, List[Key]] = {}
        self._index: Dict[int, Dict[Key, int]] = {}
        self._matrix: Dict[int, SparseMatrix] = {}
        self._cohomology: Dict[int, CohomologySpace] = {}
        self._lock = threading.Lock()

    # subclass API --------------------------------------------------------
    def check_degree(self, d: int) -> None:
        pass

    def iter_basis(self, d: int) -> Iterator[Key]:
        raise NotImplementedError

    def unsigned_terms(self, key: Key, d: int) -> Dict[Key, int]:
        raise NotImplementedError

    def dim(self, d: int) -> int:
        raise NotImplementedError

    # shared machinery ------------------------------------------------------
    def sign_of(self, d: int) -> int:
        # the official differential scales the unsigned map out of chain
        # degree s (= -d-1) by (-1)^s; the exponent is the chain index, the
        # only reading under which the pairing and Leibniz identities hold
        return 1 if d >= 0 else sign_pow(-d - 1)

    def basis(self, d: int) -> List[Key]:
        self.check_degree(d)
        with self._lock:
            if d not in self._basis:
                self._basis[d] = list(self.iter_basis(d))
            return self._basis[d]

    def index(self, d: int) -> Dict[Key, int]:
        basis = self.basis(d)
        with self._lock:
            if d not in self._index:
                self._index[d] = {k: i for i, k in enumerate(basis)}
            return self._index[d]

    def element(self, d: int, coeffs: Optional[Dict[Key, int]] = None):
        self.check_degree(d)
        return self.element_cls(self, d, coeffs)

    def zero(self, d: int):
        return self.element(d)

    def differential(self, elem, signed: bool = True):
        """Apply the (signed) differential without materializing a matrix."""
        d = elem.degree
        self.check_degree(d + 1)
        p = self.p
        sign = self.sign_of(d) if signed else 1
        out: Dict[Key, int] = {}
        for key, c in elem.coeffs.items():
            add_scaled_inplace(out, self.unsigned_terms(key, d), c * sign, p)
        return self.element(d + 1, out)

    def matrix(self, d: int) -> SparseMatrix:
        """Signed differential degree d -> d+1 over the canonical bases."""
        self.check_degree(d)
        self.check_degree(d + 1)
        with self._lock:
            if d in self._matrix:
                return self._matrix[d]
        src = self.basis(d)
        tgt_index = self.index(d + 1)
        M = SparseMatrix(len(tgt_index), len(src), self.p)
        sign = self.sign_of(d)
        for j, key in enumerate(src):
            for tkey, c in self.unsigned_terms(key, d).items():
                M.add_entry(tgt_index[tkey], j, c * sign)
        with self._lock:
            self._matrix.setdefault(d, M)
            return self._matrix[d]

    def cohomology(self, n: int) -> CohomologySpace:
        """ker(d_n)/im(d_{n-1}) with deterministic representative cocycles."""
        with self._lock:
            if n in self._cohomology:
                return self._cohomology[n]
        from .linalg import kernel_basis, pivot_columns
        out_mat = self.matrix(n)
        in_mat = self.matrix(n - 1)
        kern = kernel_basis(out_mat)
        image: List[SparseVector] = []
        for j in pivot_columns(in_mat):
            sv = SparseVector(self.p)
            sv.entries = dict(in_mat.columns[j])
            image.append(sv)
        quot = QuotientSpace(self.p, kern, image)
        space = CohomologySpace(self, n, quot)
        with self._lock:
            self._cohomology.setdefault(n, space)
            return self._cohomology[n]

    def random_element(self, d: int, rng, terms: int = 3):
        basis = self.basis(d)
        if not basis:
            return self.zero(d)
        coeffs: Dict[Key, int] = {}
        for _ in range(terms):
            k = basis[rng.randrange(len(basis))]
            c = rng.randrange(1, self.p)
            _acc(coeffs, k, c)
        return self.element(d, {k: v % self.p for k, v in coeffs.items() if v % self.p})


class DComplex(_BaseComplex):
    """The Tate-Hochschild cochain complex of kG over F_p on a degree window."""

    element_cls = TateElement

    def __init__(self, group: Group, p: int, window: Tuple[int, int]):
        super().__init__(p)
        lo, hi = window
        if lo >= hi:
            raise WindowError(f"window {window} is empty")
        self.group = group
        self.lo = lo
        self.hi = hi

    def check_degree(self, d: int) -> None:
        if not (self.lo <= d <= self.hi):
            raise WindowError(f"degree {d} outside window [{self.lo}, {self.hi}]")

    def dim(self, d: int) -> int:
        return dim_degree(self.group, d)

    def iter_basis(self, d: int) -> Iterator[Key]:
        G = self.group
        s = d if d >= 0 else -d - 1
        if d >= 0:
            for args in itertools.product(G.nontrivial, repeat=s):
                for h in range(G.order):
                    yield (args, h)
        else:
            for g0 in range(G.order):
                for tail in itertools.product(G.nontrivial, repeat=s):
                    yield (g0, tail)

    def unsigned_terms(self, key: Key, d: int) -> Dict[Key, int]:
        return d_unsigned_terms(self.group, key, d)

    def cohomology(self, n: int) -> CohomologySpace:
        if not (self.lo < n < self.hi):
            raise WindowError(f"cohomology at degree {n} needs window margin around it")
        return super().cohomology(n)


class GroupComplex(_BaseComplex):
    """Tate cochain complex of a subgroup with trivial F_p coefficients.

    Positive degrees carry the group cohomology complex, negative degrees
    the group homology complex, glued by the norm map (multiplication by
    |H| mod p) out of degree -1.  Signs mirror the D-side convention.
    """

    element_cls = GroupTateElement

    def __init__(self, subgroup: Subgroup, p: int, window: Optional[Tuple[int, int]] = None):
        super().__init__(p)
        self.subgroup = subgroup
        self.window = window

    def check_degree(self, d: int) -> None:
        if self.window is not None:
            lo, hi = self.window
            if not (lo <= d <= hi):
                raise WindowError(f"degree {d} outside window [{lo}, {hi}]")

    def dim(self, d: int) -> int:
        return group_dim_degree(self.subgroup.order, d)

    def iter_basis(self, d: int) -> Iterator[Key]:
        s = d if d >= 0 else -d - 1
        return itertools.product(self.subgroup.nontrivial, repeat=s)

    def unsigned_terms(self, key: Key, d: int) -> Dict[Key, int]:
        G = self.subgroup.parent
        if d >= 0:
            return group_coboundary_terms(G, self.subgroup.members, key, d)
        if d == -1:
            norm = self.subgroup.order % self.p
            return {(): norm} if norm else {}
        return group_boundary_terms(G, key, -d - 1)


def group_tate_complex(H: Subgroup, p: int, window: Optional[Tuple[int, int]] = None) -> GroupComplex:
    return GroupComplex(H, p, window)


def differential_triples(cplx: _BaseComplex, degrees: Iterable[int]):
    """Sparse dump of the signed differential: rows of (degree, row, col, value)."""
    for d in degrees:
        M = cplx.matrix(d)
        for i, j, v in M.triples():
            yield (d, i, j, v)
