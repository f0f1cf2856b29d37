"""Finite groups as Cayley tables with 0-based element indices.

Element 0 is always the identity; all higher layers do index arithmetic
through the multiplication table.  Conjugacy classes, coset systems and
double cosets use deterministic minimal-index representative selection so
every derived object is reproducible.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

DEFAULT_CLOSURE_CAP = 512


class GroupError(ValueError):
    pass


class Group:
    __slots__ = ("order", "mult", "inv", "labels", "__dict__")

    def __init__(self, mult: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None,
                 validate: bool = True):
        self.order = len(mult)
        self.mult: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in mult)
        if validate:
            _validate_table(self.mult)
        inv = [-1] * self.order
        for g in range(self.order):
            for h in range(self.order):
                if self.mult[g][h] == 0:
                    inv[g] = h
                    break
        if validate and any(i < 0 for i in inv):
            raise GroupError("missing inverses")
        self.inv: Tuple[int, ...] = tuple(inv)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != self.order or len(set(labels)) != self.order:
                raise GroupError("labels must be distinct, one per element")
        self.labels = labels

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mult[self.mult[g][x]][self.inv[g]]

    def prod(self, elems: Sequence[int]) -> int:
        acc = 0
        for g in elems:
            acc = self.mult[acc][g]
        return acc

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    @cached_property
    def nontrivial(self) -> Tuple[int, ...]:
        return tuple(range(1, self.order))

    @cached_property
    def is_abelian(self) -> bool:
        m = self.mult
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(a))

    def to_json(self) -> str:
        data = {"order": self.order, "mult": [list(r) for r in self.mult]}
        if self.labels:
            data["labels"] = list(self.labels)
        return json.dumps(data)

    @staticmethod
    def from_json(text: str) -> "Group":
        data = json.loads(text)
        return group_from_mult_table(data["mult"], labels=data.get("labels"))


def _validate_table(mult: Tuple[Tuple[int, ...], ...]) -> None:
    n = len(mult)
    for row in mult:
        if len(row) != n:
            raise GroupError("multiplication table is not square")
        for v in row:
            if not (0 <= v < n):
                raise GroupError("table entry out of range")
    if any(mult[0][x] != x or mult[x][0] != x for x in range(n)):
        raise GroupError("no identity")
    # full associativity check for small orders, deterministic sampling beyond
    if n <= 64:
        triples = ((a, b, c) for a in range(n) for b in range(n) for c in range(n))
    else:
        triples = (((7 * t) % n, (11 * t + 3) % n, (13 * t + 5) % n) for t in range(30 * n))
    for a, b, c in triples:
        if mult[mult[a][b]][c] != mult[a][mult[b][c]]:
            raise GroupError("not associative")


def group_from_mult_table(table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None) -> Group:
    """Build a validated Group, relabeling so the identity sits at index 0."""
    n = len(table)
    if n == 0:
        raise GroupError("empty table")
    for row in table:
        if len(row) != n:
            raise GroupError("multiplication table is not square")
        for v in row:
            if not (0 <= v < n):
                raise GroupError("table entry out of range")
    e = None
    for cand in range(n):
        if all(table[cand][x] == x and table[x][cand] == x for x in range(n)):
            e = cand
            break
    if e is None:
        raise GroupError("no identity")
    if e != 0:
        perm = list(range(n))
        perm[0], perm[e] = perm[e], perm[0]
        inv_perm = perm  # the swap is an involution
        table = [[inv_perm.index(table[perm[a]][perm[b]]) for b in range(n)] for a in range(n)]
        if labels is not None:
            labels = [labels[perm[a]] for a in range(n)]
    return Group(table, labels=labels)


def group_from_permutations(generators: Sequence[Sequence[int]], size_cap: int = DEFAULT_CLOSURE_CAP,
                            ) -> Group:
    """Closure of permutation generators; identity first, then BFS discovery order."""
    if not generators:
        raise GroupError("need at least one generator")
    d = len(generators[0])
    gens = []
    for g in generators:
        if sorted(g) != list(range(d)):
            raise GroupError("generator is not a permutation of 0..d-1")
        gens.append(tuple(g))
    ident = tuple(range(d))
    elems: List[Tuple[int, ...]] = [ident]
    index: Dict[Tuple[int, ...], int] = {ident: 0}
    queue = [ident]
    while queue:
        nxt = []
        for a in queue:
            for g in gens:
                c = tuple(a[g[i]] for i in range(d))  # a after g: c = a o g
                if c not in index:
                    index[c] = len(elems)
                    elems.append(c)
                    nxt.append(c)
                    if len(elems) > size_cap:
                        raise GroupError(f"closure exceeds size cap {size_cap}")
        queue = nxt
    n = len(elems)
    mult = [[0] * n for _ in range(n)]
    for a in range(n):
        pa = elems[a]
        for b in range(n):
            pb = elems[b]
            mult[a][b] = index[tuple(pa[pb[i]] for i in range(d))]
    return Group(mult)


def parse_cycles(text: str, degree: Optional[int] = None) -> List[List[int]]:
    """Cycle-notation permutations: "(0 1 2),(0 1)" -> explicit images."""
    chunks = [c for c in re.split(r"\s*;\s*|\s*,\s*(?=\()", text.strip()) if c]
    raw: List[List[List[int]]] = []
    top = 0
    for chunk in chunks:
        cycles = []
        for m in re.finditer(r"\(([^()]*)\)", chunk):
            pts = [int(t) for t in re.split(r"[\s,]+", m.group(1).strip()) if t]
            if len(pts) != len(set(pts)):
                raise GroupError(f"repeated point in cycle {m.group(0)}")
            cycles.append(pts)
            if pts:
                top = max(top, max(pts) + 1)
        if not cycles:
            raise GroupError(f"cannot parse permutation {chunk!r}")
        raw.append(cycles)
    d = degree if degree is not None else top
    perms = []
    for cycles in raw:
        img = list(range(d))
        for cyc in cycles:
            for i, pt in enumerate(cyc):
                img[pt] = cyc[(i + 1) % len(cyc)]
        perms.append(img)
    return perms


def preset_group(name: str, param: int = 0) -> Group:
    name = name.lower()
    if name == "cyclic":
        if param < 1:
            raise GroupError("cyclic group needs order >= 1")
        n = param
        return Group([[(a + b) % n for b in range(n)] for a in range(n)],
                     labels=[f"g{a}" for a in range(n)] if n > 1 else ["e"])
    if name == "dihedral":
        if param < 2:
            raise GroupError("dihedral group needs n >= 2 (order 2n)")
        n = param
        # index = i + n*eps for r^i s^eps
        def mul(x, y):
            i, e = x % n, x // n
            j, f = y % n, y // n
            k = (i + j) % n if e == 0 else (i - j) % n
            return k + n * (e ^ f)
        labels = [f"r{i}" for i in range(n)] + [f"r{i}s" for i in range(n)]
        return Group([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)], labels=labels)
    if name == "symmetric":
        if not (1 <= param <= 5):
            raise GroupError("symmetric group supported for 1 <= n <= 5")
        if param == 3:
            # presentation <a,b | a^3 = 1 = b^2, bab = a^-1>, ordered e,a,a2,b,ab,a2b
            def mul3(x, y):
                i, e = x % 3, x // 3
                j, f = y % 3, y // 3
                k = (i + j) % 3 if e == 0 else (i - j) % 3
                return k + 3 * (e ^ f)
            labels = ["e", "a", "a2", "b", "ab", "a2b"]
            return Group([[mul3(x, y) for y in range(6)] for x in range(6)], labels=labels)
        if param == 1:
            return preset_group("cyclic", 1)
        gens = [list(range(1, param)) + [0]]
        if param >= 2:
            swap = list(range(param))
            swap[0], swap[1] = 1, 0
            gens.append(swap)
        return group_from_permutations(gens)
    if name == "klein_four":
        # C2 x C2 with index = 2a + b
        return Group([[(a ^ b) for b in range(4)] for a in range(4)],
                     labels=["e", "j", "i", "ij"])
    if name == "quaternion8":
        # 1, i, j, k, -1, -i, -j, -k
        base = {
            (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
            (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
            (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
            (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
        }
        def mulq(x, y):
            xs, xe = x % 4, x // 4
            ys, ye = y % 4, y // 4
            b, s = base[(xs, ys)]
            return b + 4 * (xe ^ ye ^ s)
        labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
        return Group([[mulq(x, y) for y in range(8)] for x in range(8)], labels=labels)
    raise GroupError(f"unknown preset {name!r}")


@dataclass(frozen=True)
class Subgroup:
    parent: Group
    members: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))
        G = self.parent
        mem = set(self.members)
        if 0 not in mem:
            raise GroupError("subgroup must contain the identity")
        for a in self.members:
            if G.inv[a] not in mem:
                raise GroupError("subgroup not closed under inverse")
            for b in self.members:
                if G.mult[a][b] not in mem:
                    raise GroupError("subgroup not closed under multiplication")

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return g in self._member_set

    @cached_property
    def _member_set(self) -> frozenset:
        return frozenset(self.members)

    @cached_property
    def nontrivial(self) -> Tuple[int, ...]:
        return tuple(m for m in self.members if m != 0)

    def as_group(self) -> Tuple[Group, Dict[int, int], Tuple[int, ...]]:
        """Standalone Group on this subgroup plus index maps (to_local, from_local)."""
        return self._as_group

    @cached_property
    def _as_group(self):
        G = self.parent
        from_local = self.members  # sorted, identity first
        to_local = {g: i for i, g in enumerate(from_local)}
        n = len(from_local)
        mult = [[to_local[G.mult[from_local[a]][from_local[b]]] for b in range(n)] for a in range(n)]
        labels = [G.label(g) for g in from_local] if G.labels else None
        return Group(mult, labels=labels, validate=False), to_local, from_local


def whole_group(G: Group) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def trivial_subgroup(G: Group) -> Subgroup:
    return Subgroup(G, (0,))


def generated_subgroup(G: Group, gens: Sequence[int]) -> Subgroup:
    mem = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = G.mult[a][g]
                if c not in mem:
                    mem.add(c)
                    nxt.append(c)
        frontier = nxt
    return Subgroup(G, tuple(sorted(mem)))


def conjugate_subgroup(G: Group, g: int, H: Subgroup) -> Subgroup:
    return Subgroup(G, tuple(sorted(G.conj(g, h) for h in H.members)))


def intersect_subgroups(H: Subgroup, K: Subgroup) -> Subgroup:
    if H.parent is not K.parent:
        raise GroupError("subgroups of different parents")
    return Subgroup(H.parent, tuple(sorted(set(H.members) & set(K.members))))


def centralizer(G: Group, x: int) -> Subgroup:
    return Subgroup(G, tuple(g for g in range(G.order) if G.conj(g, x) == x))


@dataclass(frozen=True)
class ConjugacyData:
    group: Group
    reps: Tuple[int, ...]
    class_of: Tuple[int, ...]
    classes: Tuple[Tuple[int, ...], ...]
    centralizers: Tuple[Subgroup, ...]

    @property
    def num_classes(self) -> int:
        return len(self.reps)


def conjugacy_classes(G: Group) -> ConjugacyData:
    """Classes with minimal-index representatives; the identity class is first."""
    n = G.order
    class_of = [-1] * n
    reps: List[int] = []
    classes: List[Tuple[int, ...]] = []
    for x in range(n):
        if class_of[x] >= 0:
            continue
        k = len(reps)
        orbit = sorted({G.conj(g, x) for g in range(n)})
        for y in orbit:
            class_of[y] = k
        reps.append(x)
        classes.append(tuple(orbit))
    cents = tuple(centralizer(G, r) for r in reps)
    return ConjugacyData(G, tuple(reps), tuple(class_of), tuple(classes), cents)


@dataclass(frozen=True)
class CosetSystem:
    """Right cosets H*gamma_i covering the ambient set, gamma_1 = identity.

    ``ambient`` is the member tuple of the overgroup (often the full group);
    decomp maps each ambient g to (h, i) with g = h * gamma_i.
    """

    subgroup: Subgroup
    ambient: Tuple[int, ...]
    gamma: Tuple[int, ...]
    decomp: Dict[int, Tuple[int, int]]

    @property
    def count(self) -> int:
        return len(self.gamma)

    def coset_index(self, g: int) -> int:
        return self.decomp[g][1]

    def step(self, i: int, g: int) -> Tuple[int, int]:
        """gamma_i * g = h * gamma_j; returns (h, j)."""
        G = self.subgroup.parent
        return self.decomp[G.mult[self.gamma[i]][g]]

    def thread(self, i: int, elems: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
        """Thread gamma_i through elems left to right; returns (h-tuple, end coset)."""
        hs = []
        cur = i
        for g in elems:
            h, cur = self.step(cur, g)
            hs.append(h)
        return tuple(hs), cur


def right_coset_system(H: Subgroup, ambient: Optional[Sequence[int]] = None) -> CosetSystem:
    G = H.parent
    amb = tuple(ambient) if ambient is not None else tuple(range(G.order))
    amb_set = set(amb)
    for h in H.members:
        if h not in amb_set:
            raise GroupError("subgroup not inside the ambient set")
    gamma: List[int] = []
    decomp: Dict[int, Tuple[int, int]] = {}
    for g in amb:
        if g in decomp:
            continue
        i = len(gamma)
        gamma.append(g)
        for h in H.members:
            w = G.mult[h][g]
            if w not in amb_set:
                raise GroupError("ambient set not closed under the subgroup action")
            decomp[w] = (h, i)
    if gamma[0] != 0:
        raise GroupError("ambient enumeration must start at the identity")
    if len(gamma) * H.order != len(amb):
        raise GroupError("cosets do not partition the ambient set")
    return CosetSystem(H, amb, tuple(gamma), decomp)


@dataclass(frozen=True)
class DoubleCosetSystem:
    left: Subgroup
    right: Subgroup
    reps: Tuple[int, ...]
    coset_of: Tuple[int, ...]


def double_cosets(G: Group, H: Subgroup, K: Subgroup) -> DoubleCosetSystem:
    n = G.order
    coset_of = [-1] * n
    reps: List[int] = []
    for x in range(n):
        if coset_of[x] >= 0:
            continue
        idx = len(reps)
        reps.append(x)
        for h in H.members:
            hx = G.mult[h][x]
            for k in K.members:
                coset_of[G.mult[hx][k]] = idx
    return DoubleCosetSystem(H, K, tuple(reps), tuple(coset_of))


def class_rep_and_witness(cd: ConjugacyData, g: int) -> Tuple[int, int]:
    """Class index of g and the minimal y with y g y^-1 = reps[k]."""
    G = cd.group
    k = cd.class_of[g]
    target = cd.reps[k]
    for y in range(G.order):
        if G.conj(y, g) == target:
            return k, y
    raise AssertionError("conjugacy witness must exist")
