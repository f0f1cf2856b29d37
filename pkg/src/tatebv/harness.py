"""Decomposition-path computation engine and verification harnesses.

Cohomology classes of the ambient complex are carried as coordinate
vectors over the per-conjugacy-class centralizer Tate cohomologies.  Cup
products are evaluated with the double-coset formula, the BV operator by
transporting representatives through the deformation retract, and the Lie
bracket from those two.  Identity-component classes outside the
coordinatized range are kept as representative cocycles and decided by a
degree-shifting zero certificate.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .bv import CohClass, bv_operator, class_of, cup
from .complexes import (DComplex, GroupComplex, GroupTateElement, TateElement,
                        dim_degree, sign_pow)
from .decomposition import ClassDecomposition
from .groups import (ConjugacyData, Group, GroupError, conjugacy_classes,
                     group_from_mult_table, group_from_permutations, parse_cycles,
                     preset_group)
from .transfer import TransferContext

DIRECT_COLUMN_CAP = 200_000
DECOMPOSITION_CAP = 1_000_000


class ConfigError(ValueError):
    pass


class CostCapError(RuntimeError):
    pass


def make_group(spec: str) -> Group:
    """Parse a group spec: preset[:param], perms:"(0 1 2),(0 1)" or file:PATH."""
    if spec.startswith("perms:"):
        return group_from_permutations(parse_cycles(spec[len("perms:"):]))
    if spec.startswith("file:"):
        with open(spec[len("file:"):], "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return group_from_mult_table(data["mult"], labels=data.get("labels"))
    name, _, param = spec.partition(":")
    try:
        return preset_group(name, int(param) if param else 0)
    except GroupError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass
class JobConfig:
    group: str = "symmetric:3"
    p: int = 3
    window: Tuple[int, int] = (-4, 3)
    seed: int = 0
    fmt: str = "text"
    threads: int = 1

    def __post_init__(self):
        from .linalg import is_prime
        if not is_prime(self.p):
            raise ConfigError(f"characteristic {self.p} is not prime")
        lo, hi = self.window
        if lo >= hi:
            raise ConfigError(f"window {self.window} is empty")
        if self.fmt not in ("json", "csv", "text"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")

    def hash(self) -> str:
        import hashlib
        blob = json.dumps([self.group, self.p, list(self.window), self.seed], sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _provenance(cfg: JobConfig) -> Dict:
    from . import __version__
    return {"tool": "tatebv", "version": __version__, "seed": cfg.seed,
            "config_hash": cfg.hash()}


def check_direct_cost(G: Group, window: Tuple[int, int]) -> None:
    worst = max(dim_degree(G, d) for d in range(window[0] - 1, window[1] + 2))
    if worst > DIRECT_COLUMN_CAP:
        raise CostCapError(f"direct path needs {worst} basis columns (cap {DIRECT_COLUMN_CAP})")


def check_decomposition_cost(G: Group, cd: ConjugacyData, window: Tuple[int, int]) -> None:
    worst = 0
    for cent in cd.centralizers:
        for d in range(window[0] - 1, window[1] + 2):
            s = d if d >= 0 else -d - 1
            worst = max(worst, (cent.order - 1) ** s if cent.order > 1 else (1 if s == 0 else 0))
    if worst > DECOMPOSITION_CAP:
        raise CostCapError(f"decomposition path needs {worst} basis columns (cap {DECOMPOSITION_CAP})")


# ---------------------------------------------------------------------------
# decomposition-path class arithmetic

Entry = Tuple[str, object]  # ("c", coords tuple) or ("r", GroupTateElement)


@dataclass
class DecClass:
    """A cohomology class as per-conjugacy-class components."""

    degree: int
    parts: Dict[int, Entry] = field(default_factory=dict)

    def copy(self) -> "DecClass":
        return DecClass(self.degree, dict(self.parts))

    def structurally_zero(self) -> bool:
        return not self.parts


class DecOps:
    """Operations on decomposition-path classes for one (group, p) pair."""

    def __init__(self, G: Group, p: int, coord_cap: Optional[Dict[int, int]] = None):
        self.group = G
        self.p = p
        self.cd = conjugacy_classes(G)
        self.ctx = TransferContext(G, p, self.cd)
        self.dc = DComplex(G, p, (-64, 64))
        self.dec = ClassDecomposition(self.dc, self.cd,
                                      lambda sub: self.ctx.complex_for(sub))
        self.coord_cap = coord_cap or {}
        self.zero_certifier = None  # optional hook for out-of-range identity parts

    def space(self, cls: int, n: int):
        return self.ctx.complex_for(self.cd.centralizers[cls]).cohomology(n)

    def cls_dim(self, cls: int, n: int) -> int:
        return self.space(cls, n).dim

    def in_range(self, cls: int, n: int) -> bool:
        cap = self.coord_cap.get(cls)
        return cap is None or abs(n) <= cap

    def _entry_from_elem(self, cls: int, gelem: GroupTateElement) -> Optional[Entry]:
        if self.in_range(cls, gelem.degree):
            coords = tuple(self.space(cls, gelem.degree).project(gelem))
            return ("c", coords) if any(coords) else None
        return ("r", gelem) if not gelem.is_zero() else None

    def from_class(self, cls: int, c: CohClass) -> DecClass:
        out = DecClass(c.degree)
        if any(c.coords):
            out.parts[cls] = ("c", tuple(c.coords))
        return out

    def unit(self) -> DecClass:
        one = self.ctx.complex_for(self.cd.centralizers[0]).element(0, {(): 1})
        return self.from_class(0, class_of(self.space(0, 0), one))

    def add(self, A: DecClass, B: DecClass, c: int = 1) -> DecClass:
        if A.degree != B.degree and A.parts and B.parts:
            raise ValueError("adding classes of different degrees")
        out = A.copy()
        if not out.parts:
            out = DecClass(B.degree, dict(out.parts))
        for cls, (tag, val) in B.parts.items():
            if cls not in out.parts:
                if tag == "c":
                    scaled = tuple((c * v) % self.p for v in val)
                    if any(scaled):
                        out.parts[cls] = ("c", scaled)
                else:
                    s = val.scale(c)
                    if not s.is_zero():
                        out.parts[cls] = ("r", s)
                continue
            tag0, val0 = out.parts[cls]
            if tag0 != tag:
                raise ValueError("mixed coordinate/representative entries")
            if tag == "c":
                merged = tuple((a + c * b) % self.p for a, b in zip(val0, val))
                if any(merged):
                    out.parts[cls] = ("c", merged)
                else:
                    del out.parts[cls]
            else:
                merged_elem = val0.add(val, c)
                if merged_elem.is_zero():
                    del out.parts[cls]
                else:
                    out.parts[cls] = ("r", merged_elem)
        return out

    def scale(self, A: DecClass, c: int) -> DecClass:
        return self.add(DecClass(A.degree), A, c)

    def sub(self, A: DecClass, B: DecClass) -> DecClass:
        return self.add(A, B, -1)

    def lift_entry(self, cls: int, degree: int, entry: Entry) -> GroupTateElement:
        tag, val = entry
        if tag == "r":
            return val
        return self.space(cls, degree).lift(list(val))

    def cup(self, A: DecClass, B: DecClass) -> DecClass:
        deg = A.degree + B.degree
        out = DecClass(deg)
        for i, ea in A.parts.items():
            a_elem = self.lift_entry(i, A.degree, ea)
            for j, eb in B.parts.items():
                b_elem = self.lift_entry(j, B.degree, eb)
                if i == 0 and j == 0:
                    # products of identity components never leave it
                    reps = {0: self.ctx.group_cup_rep(a_elem, b_elem)}
                else:
                    reps = self.ctx.double_coset_cup_reps(i, j, a_elem, b_elem)
                for k, gelem in reps.items():
                    entry = self._entry_from_elem(k, gelem)
                    if entry is not None:
                        out = self.add(out, DecClass(deg, {k: entry}))
        return out

    def delta(self, A: DecClass) -> DecClass:
        """BV operator through the deformation retract, component by component."""
        deg = A.degree
        out = DecClass(deg - 1)
        if deg == 0:
            return out
        for cls, entry in A.parts.items():
            gelem = self.lift_entry(cls, deg, entry)
            img = bv_operator(self.dec.retract_up(cls, gelem))
            down = self.dec.retract_down(img)
            for k, g in down.items():
                if k != cls and not g.is_zero():
                    raise AssertionError("BV operator left its class component")
            piece = down.get(cls)
            if piece is not None and not piece.is_zero():
                e = self._entry_from_elem(cls, piece)
                if e is not None:
                    out = self.add(out, DecClass(deg - 1, {cls: e}))
        return out

    def bracket(self, A: DecClass, B: DecClass) -> DecClass:
        da, db = A.degree, B.degree
        t1 = self.delta(self.cup(A, B))
        t2 = self.cup(self.delta(A), B)
        t3 = self.cup(A, self.delta(B))
        inner = self.add(self.add(t1, t2, -1), t3, -sign_pow(da))
        return self.scale(inner, -sign_pow((da - 1) * db))

    def is_zero(self, A: DecClass) -> bool:
        for cls, (tag, val) in A.parts.items():
            if tag == "c":
                if any(val):
                    return False
            else:
                if cls == 0 and self.zero_certifier is not None:
                    if not self.zero_certifier(val):
                        return False
                elif self.in_range(cls, A.degree):
                    if any(self.space(cls, A.degree).project(val)):
                        return False
                else:
                    raise ValueError(f"cannot decide zero-ness of class component {cls} "
                                     f"at degree {A.degree}")
        return True

    def eq(self, A: DecClass, B: DecClass) -> bool:
        return self.is_zero(self.sub(A, B))


class IdentityZeroCertifier:
    """Decides [v] = 0 for identity-component cocycles of the ambient complex.

    Inside the coordinatized range the class is projected through the
    deformation retract.  Outside, the element is cup-multiplied with a
    fixed pair of mutually inverse classes (degrees +4/-4 for S3) to shift
    into range; soundness of the shift rests on z * z^-1 = 1 (checked here
    with an explicit projection) and associativity of the cup product on
    cohomology, which the randomized identity suites exercise separately.
    """

    def __init__(self, ops: DecOps, up_class: CohClass, down_class: CohClass, base: int = 4):
        self.ops = ops
        self.base = base
        dec = ops.dec
        self.up = dec.retract_up(0, up_class.space.lift(list(up_class.coords)))
        self.down = dec.retract_up(0, down_class.space.lift(list(down_class.coords)))
        dc = ops.dc
        if not dc.differential(self.up).is_zero() or not dc.differential(self.down).is_zero():
            raise AssertionError("shift representatives are not cocycles")
        unit_coords = list(ops.unit().parts[0][1])
        for a, b in ((self.up, self.down), (self.down, self.up)):
            prod = cup(a, b)
            coords = ops.space(0, 0).project(dec.retract_down(prod)[0])
            # inverse up to a unit scalar: the product class must span the unit line
            scalars = {(c * pow(u, ops.p - 2, ops.p)) % ops.p if u else None
                       for c, u in zip(coords, unit_coords)}
            scalars.discard(None)
            if len(scalars) != 1 or 0 in scalars or any(
                    c for c, u in zip(coords, unit_coords) if not u):
                raise AssertionError("shift classes are not invertible against the unit")

    def certify_elem(self, v: TateElement) -> bool:
        d = v.degree
        if abs(d) <= self.base:
            g = self.ops.dec.retract_down(v).get(0)
            if g is None:
                return True
            return not any(self.ops.space(0, d).project(g))
        shifted = cup(self.down, v) if d > 0 else cup(self.up, v)
        return self.certify_elem(shifted)

    def __call__(self, gelem: GroupTateElement) -> bool:
        return self.certify_elem(self.ops.dec.retract_up(0, gelem))


# ---------------------------------------------------------------------------
# CLI commands

def cmd_info(cfg: JobConfig) -> Dict:
    G = make_group(cfg.group)
    cd = conjugacy_classes(G)
    return {
        "config": _config_dict(cfg),
        "order": G.order,
        "abelian": G.is_abelian,
        "labels": [G.label(g) for g in range(G.order)],
        "classes": [{"rep": G.label(cd.reps[k]), "size": len(cd.classes[k]),
                     "centralizer_order": cd.centralizers[k].order}
                    for k in range(cd.num_classes)],
        "dims_per_degree": {str(d): dim_degree(G, d)
                            for d in range(cfg.window[0], cfg.window[1] + 1)},
        "provenance": _provenance(cfg),
    }


def _config_dict(cfg: JobConfig) -> Dict:
    return {"group": cfg.group, "char": cfg.p, "window": list(cfg.window),
            "seed": cfg.seed, "format": cfg.fmt, "threads": cfg.threads}


def cmd_dims(cfg: JobConfig) -> Dict:
    G = make_group(cfg.group)
    cd = conjugacy_classes(G)
    lo, hi = cfg.window
    check_decomposition_cost(G, cd, cfg.window)
    ctx = TransferContext(G, cfg.p, cd)
    degrees = list(range(lo, hi + 1))

    def class_dims(k: int) -> List[int]:
        cplx = ctx.complex_for(cd.centralizers[k])
        return [cplx.cohomology(n).dim for n in degrees]

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        per_class = list(pool.map(class_dims, range(cd.num_classes)))
    totals = [sum(col) for col in zip(*per_class)] if per_class else []

    direct: Optional[Dict[str, int]] = None
    worst = max(dim_degree(G, d) for d in range(lo, hi + 1))
    if worst <= DIRECT_COLUMN_CAP:
        dc = DComplex(G, cfg.p, (lo, hi))
        direct = {}
        for n in range(lo + 1, hi):
            dim = dc.cohomology(n).dim
            direct[str(n)] = dim
            if dim != totals[n - lo]:
                raise AssertionError(f"direct and decomposition dims disagree at degree {n}")
    return {
        "config": _config_dict(cfg),
        "dims": {"degrees": degrees, "total": totals,
                 "per_class": {G.label(cd.reps[k]): per_class[k] for k in range(cd.num_classes)},
                 "direct": direct},
        "classes": [G.label(r) for r in cd.reps],
        "tables": None,
        "provenance": _provenance(cfg),
    }


def _basis_labels(ops: DecOps, degrees: Sequence[int]) -> List[Tuple[int, int, int]]:
    out = []
    for d in degrees:
        for cls in range(ops.cd.num_classes):
            for i in range(ops.cls_dim(cls, d)):
                out.append((d, cls, i))
    return out


def _label_str(ops: DecOps, lab: Tuple[int, int, int]) -> str:
    d, cls, i = lab
    return f"deg{d}:{ops.group.label(ops.cd.reps[cls])}:{i}"


def _dec_basis_class(ops: DecOps, lab: Tuple[int, int, int]) -> DecClass:
    d, cls, i = lab
    space = ops.space(cls, d)
    coords = [1 if j == i else 0 for j in range(space.dim)]
    return ops.from_class(cls, CohClass(space, tuple(coords)))


def _dec_to_vector(ops: DecOps, A: DecClass, labels: List[Tuple[int, int, int]]) -> Optional[Dict[str, int]]:
    out: Dict[str, int] = {}
    for cls, (tag, val) in A.parts.items():
        if tag != "c":
            return None
        for i, v in enumerate(val):
            if v:
                out[_label_str(ops, (A.degree, cls, i))] = v
    return out


def cmd_tables(cfg: JobConfig, rng: Optional[random.Random] = None) -> Dict:
    G = make_group(cfg.group)
    cd = conjugacy_classes(G)
    check_decomposition_cost(G, cd, cfg.window)
    lo, hi = cfg.window
    ops = DecOps(G, cfg.p)
    rng = rng or random.Random(cfg.seed)
    degrees = list(range(lo, hi + 1))
    labels = _basis_labels(ops, degrees)

    cup_table: Dict[str, Optional[Dict[str, int]]] = {}
    products: Dict[Tuple, DecClass] = {}
    for la in labels:
        for lb in labels:
            dsum = la[0] + lb[0]
            key = f"{_label_str(ops, la)} * {_label_str(ops, lb)}"
            if not (lo <= dsum <= hi):
                cup_table[key] = None
                continue
            prod = ops.cup(_dec_basis_class(ops, la), _dec_basis_class(ops, lb))
            products[(la, lb)] = prod
            cup_table[key] = _dec_to_vector(ops, prod, labels)

    delta_table: Dict[str, Optional[Dict[str, int]]] = {}
    for la in labels:
        if not (lo <= la[0] - 1 <= hi):
            delta_table[_label_str(ops, la)] = None
            continue
        delta_table[_label_str(ops, la)] = _dec_to_vector(ops, ops.delta(_dec_basis_class(ops, la)), labels)

    bracket_table: Dict[str, Optional[Dict[str, int]]] = {}
    for la in labels:
        for lb in labels:
            dsum = la[0] + lb[0] - 1
            key = f"[{_label_str(ops, la)}, {_label_str(ops, lb)}]"
            if not (lo <= dsum <= hi and lo <= la[0] + lb[0] <= hi):
                bracket_table[key] = None
                continue
            br = ops.bracket(_dec_basis_class(ops, la), _dec_basis_class(ops, lb))
            bracket_table[key] = _dec_to_vector(ops, br, labels)

    # spot-check exported structure constants against the direct path
    worst = max(dim_degree(G, d) for d in range(lo - 1, hi + 2))
    spot = {"checked": 0, "failed": 0}
    if worst <= DIRECT_COLUMN_CAP:
        dcd = DComplex(G, cfg.p, (lo - 1, hi + 1))
        from .decomposition import ClassDecomposition as CDd
        decd = CDd(dcd, cd)
        pairs = [k for k in products if any(products[k].parts)]
        rng.shuffle(pairs)
        for (la, lb) in pairs[: max(1, len(pairs) // 10)]:
            ea = decd.retract_up(la[1], ops.space(la[1], la[0]).representative(la[2]))
            eb = decd.retract_up(lb[1], ops.space(lb[1], lb[0]).representative(lb[2]))
            down = decd.retract_down(cup(ea, eb))
            expect = products[(la, lb)]
            got: Dict[int, Tuple[int, ...]] = {}
            for k, g in down.items():
                coords = tuple(ops.space(k, la[0] + lb[0]).project(g))
                if any(coords):
                    got[k] = coords
            want = {cls: val for cls, (tag, val) in expect.parts.items()}
            spot["checked"] += 1
            if got != want:
                spot["failed"] += 1
    if spot["failed"]:
        raise AssertionError(f"direct-path spot check failed on {spot['failed']} products")

    return {
        "config": _config_dict(cfg),
        "dims": {str(d): sum(ops.cls_dim(c, d) for c in range(cd.num_classes)) for d in degrees},
        "classes": [G.label(r) for r in cd.reps],
        "tables": {"basis": [_label_str(ops, l) for l in labels],
                   "cup": cup_table, "delta": delta_table, "bracket": bracket_table,
                   "spot_check": spot},
        "provenance": _provenance(cfg),
    }


def cmd_export_diff(cfg: JobConfig) -> Dict:
    G = make_group(cfg.group)
    lo, hi = cfg.window
    check_direct_cost(G, cfg.window)
    dc = DComplex(G, cfg.p, (lo, hi))
    triples = []
    for d in range(lo, hi):
        M = dc.matrix(d)
        for i, j, v in M.triples():
            triples.append([d, i, j, v])
    return {
        "config": _config_dict(cfg),
        "format": "(degree, row, col, value); row/col index the canonical bases "
                  "of degrees d+1 and d",
        "triples": triples,
        "provenance": _provenance(cfg),
    }
