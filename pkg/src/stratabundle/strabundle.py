"""Stratified bundles of finite fibres as face-poset functors.

A bundle assigns a fibre object to every cell of a stratified base and a
transition morphism to every codimension-one face relation, pointing from
the cell down to its face.  Coherence of the two descents around every
codimension-two square is required up to equality in the image of the
fibre functor, and transitions between cells of the same stratum must be
invertible in that image.  Everything else here (restriction, attachment,
pull-back, fibrewise product, totalization, push-out checking) is exact
finite bookkeeping on that data.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import cellbase, fincat
from .cellbase import BaseComplex, SimplicialMap, Stratification
from .fincat import FibreFunctor, FiniteCategory, compose_tables
from .validation import PreconditionError, StructureError, ValidationReport


@dataclass
class StratBundle:
    base: BaseComplex
    strat: Stratification
    cat: FiniteCategory
    ff: FibreFunctor
    fibre_obj: dict[str, str]
    transition: dict[tuple[str, str], str]

    def fibre_set(self, cell: str) -> tuple[str, ...]:
        return self.ff.on_objects[self.fibre_obj[cell]]

    def transition_table(self, face: str, cell: str) -> dict[str, str]:
        return self.ff.on_morphisms[self.transition[(face, cell)]]


@dataclass
class FBundleMap:
    source: StratBundle
    target: StratBundle
    base_map: SimplicialMap
    fibre_morphisms: dict[str, str]

    def element_image(self, cell: str, element: str) -> tuple[str, str]:
        mid = self.fibre_morphisms[cell]
        return self.base_map.cell_map[cell], self.target.ff.on_morphisms[mid][element]


@dataclass
class FibrewiseMap:
    """Cellwise set maps between the realized fibres of two bundles over one base."""

    source: StratBundle
    target: StratBundle
    maps: dict[str, dict[str, str]]


@dataclass
class TotalComplex:
    elements: tuple[tuple[str, str], ...]
    relations: tuple[tuple[tuple[str, str], tuple[str, str]], ...]

    def projection(self, element: tuple[str, str]) -> str:
        return element[0]

    def fibre_elements(self, cell: str) -> list[tuple[str, str]]:
        return [e for e in self.elements if e[0] == cell]

    def n_components(self) -> int:
        comps = cellbase.connected_components(list(self.elements), list(self.relations))
        return len(comps)


def transition_path(x: StratBundle, cell: str, face: str) -> str:
    """Composite transition from ``cell`` down to an iterated face.

    Descends through lexicographically least faces; by coherence any
    descent gives the same morphism in the image of the fibre functor.
    """
    if face == cell:
        return x.cat.identities[x.fibre_obj[cell]]
    if not x.base.leq(face, cell):
        raise StructureError(f"{face} is not a face of {cell}")
    mid = x.cat.identities[x.fibre_obj[cell]]
    cur = cell
    while cur != face:
        nxt = min(f for f in x.base.cells[cur].faces if x.base.leq(face, f))
        mid = x.cat.compose(x.transition[(nxt, cur)], mid)
        cur = nxt
    return mid


def validate_bundle(x: StratBundle, include_base: bool = True) -> ValidationReport:
    """Exhaustive check of typing, coherence and stratum-wise invertibility."""
    rep = ValidationReport("bundle")
    if include_base:
        rep.merge(cellbase.validate_complex(x.base, x.strat))
        if not rep.ok:
            return rep
    objset = set(x.cat.objects)
    for c in x.base.sorted_cells():
        if x.fibre_obj.get(c) not in objset:
            rep.add("fibre-object", f"cell {c} carries no object")
    if any(v.code == "fibre-object" for v in rep.violations):
        return rep
    incidences = set(x.base.incidences)
    if set(x.transition) != incidences:
        extra = sorted(set(x.transition) - incidences)
        missing = sorted(incidences - set(x.transition))
        if extra:
            rep.add("transition-spurious", f"{extra}")
        if missing:
            rep.add("transition-missing", f"{missing}")
        return rep
    for (f, c), mid in sorted(x.transition.items()):
        if mid not in x.cat.morphisms:
            rep.add("transition-unknown", f"({f}, {c}) -> {mid}")
            continue
        m = x.cat.morphisms[mid]
        if m.src != x.fibre_obj[c] or m.tgt != x.fibre_obj[f]:
            rep.add("transition-typing", f"({f}, {c}) -> {mid}")
    if not rep.ok:
        return rep
    for (f, c), mid in sorted(x.transition.items()):
        if x.strat.strata[f] == x.strat.strata[c]:
            if not fincat.is_iso_in_image(x.cat, x.ff, mid):
                rep.add(
                    "stratum-iso",
                    f"within-stratum transition ({f}, {c}) -> {mid} is not invertible",
                )
    for c in x.base.sorted_cells():
        faces = x.base.cells[c].faces
        for i, a in enumerate(faces):
            for b in faces[i + 1 :]:
                common = set(x.base.cells[a].faces) & set(x.base.cells[b].faces)
                for g in sorted(common):
                    via_a = compose_tables(x.transition_table(g, a), x.transition_table(a, c))
                    via_b = compose_tables(x.transition_table(g, b), x.transition_table(b, c))
                    if via_a != via_b:
                        rep.add(
                            "coherence",
                            f"descents {c} -> {a} -> {g} and {c} -> {b} -> {g} disagree",
                        )
    return rep


def restrict(x: StratBundle, cells) -> StratBundle:
    """Restriction to a face-closed cell set; stratum indices are compressed."""
    sub = cellbase.subcomplex(x.base, cells)
    used = sorted({x.strat.strata[c] for c in sub.cells})
    rank = {k: i for i, k in enumerate(used)}
    strat = Stratification({c: rank[x.strat.strata[c]] for c in sub.cells})
    fibre_obj = {c: x.fibre_obj[c] for c in sub.cells}
    transition = {(f, c): x.transition[(f, c)] for f, c in sub.incidences}
    return StratBundle(sub, strat, x.cat, x.ff, fibre_obj, transition)


def product_bundle(
    base: BaseComplex,
    strat: Stratification,
    cat: FiniteCategory,
    ff: FibreFunctor,
    v: str,
) -> StratBundle:
    """Constant bundle with fibre ``v`` and identity transitions."""
    if v not in cat.objects:
        raise StructureError(f"unknown object {v}")
    ident = cat.identities[v]
    return StratBundle(
        base,
        strat,
        cat,
        ff,
        {c: v for c in base.cells},
        {(f, c): ident for f, c in base.incidences},
    )


def bundle_eq(x: StratBundle, y: StratBundle, in_image: bool = True) -> bool:
    """Elementwise equality; transitions compared in the fibre-functor image."""
    if x.base.cells != y.base.cells or x.strat.strata != y.strat.strata:
        return False
    if x.fibre_obj != y.fibre_obj:
        return False
    if set(x.transition) != set(y.transition):
        return False
    if x.ff.on_objects != y.ff.on_objects:
        return False
    for key, mid in x.transition.items():
        other = y.transition[key]
        if in_image:
            if x.ff.on_morphisms[mid] != y.ff.on_morphisms[other]:
                return False
        elif mid != other:
            return False
    return True


def to_faithful(x: StratBundle) -> tuple[StratBundle, dict[str, str]]:
    """Rewrite the bundle over the faithful image of its structure category."""
    fi = fincat.faithful_image(x.cat, x.ff)
    transition = {k: fi.quotient[m] for k, m in x.transition.items()}
    return (
        StratBundle(x.base, x.strat, fi.category, fi.ff, dict(x.fibre_obj), transition),
        fi.quotient,
    )


def validate_fbundle_map(h: FBundleMap) -> ValidationReport:
    rep = ValidationReport("bundle-map")
    if h.source.cat != h.target.cat:
        rep.add("category", "source and target live over different structure categories")
        return rep
    rep.merge(cellbase.validate_simplicial_map(h.base_map))
    if set(h.base_map.cell_map) != set(h.source.base.cells):
        rep.add("base-coverage", "base map does not cover the source cells")
    if not rep.ok:
        return rep
    cat, ff = h.target.cat, h.target.ff
    for c in h.source.base.sorted_cells():
        mid = h.fibre_morphisms.get(c)
        if mid is None or mid not in cat.morphisms:
            rep.add("fibre-morphism", f"cell {c} carries no morphism")
            continue
        m = cat.morphisms[mid]
        tgt_cell = h.base_map.cell_map[c]
        if m.src != h.source.fibre_obj[c] or m.tgt != h.target.fibre_obj[tgt_cell]:
            rep.add("fibre-typing", f"cell {c}: {mid} has wrong endpoints")
    if not rep.ok:
        return rep
    for f, c in h.source.base.incidences:
        lhs = compose_tables(
            ff.on_morphisms[h.fibre_morphisms[f]], h.source.ff.on_morphisms[h.source.transition[(f, c)]]
        )
        path = transition_path(h.target, h.base_map.cell_map[c], h.base_map.cell_map[f])
        rhs = compose_tables(ff.on_morphisms[path], ff.on_morphisms[h.fibre_morphisms[c]])
        if lhs != rhs:
            rep.add("naturality", f"square over incidence ({f}, {c}) does not commute")
    return rep


def identity_fbundle_map(x: StratBundle) -> FBundleMap:
    return FBundleMap(
        x,
        x,
        cellbase.identity_map(x.base),
        {c: x.cat.identities[x.fibre_obj[c]] for c in x.base.cells},
    )


def validate_fibrewise_map(m: FibrewiseMap) -> ValidationReport:
    rep = ValidationReport("fibrewise-map")
    if set(m.source.base.cells) != set(m.target.base.cells):
        rep.add("base", "bundles do not share a base")
        return rep
    for c in m.source.base.sorted_cells():
        tab = m.maps.get(c)
        if tab is None:
            rep.add("cell-missing", c)
            continue
        if set(tab) != set(m.source.fibre_set(c)):
            rep.add("domain", c)
        elif any(v not in set(m.target.fibre_set(c)) for v in tab.values()):
            rep.add("codomain", c)
    if not rep.ok:
        return rep
    for f, c in m.source.base.incidences:
        lhs = compose_tables(m.maps[f], m.source.transition_table(f, c))
        rhs = compose_tables(m.target.transition_table(f, c), m.maps[c])
        if lhs != rhs:
            rep.add("naturality", f"incidence ({f}, {c})")
    return rep


def fibrewise_is_bijective(m: FibrewiseMap) -> bool:
    return all(
        fincat.is_bijective_table(m.maps[c], m.target.fibre_set(c))
        for c in m.source.base.cells
    )


@dataclass
class PushoutSquare:
    """A commuting square of bundle maps with a designated push-out corner."""

    a: StratBundle
    m: StratBundle
    y: StratBundle
    z: StratBundle
    incl_a: FBundleMap  # a -> m
    h: FBundleMap  # a -> y
    char: FBundleMap  # m -> z
    incl_y: FBundleMap  # y -> z


@dataclass
class AttachBundleResult:
    bundle: StratBundle
    incl: FBundleMap
    char: FBundleMap
    square: PushoutSquare
    new_cells: frozenset[str]


def attach_bundle(y: StratBundle, m: StratBundle, a_cells, h: FBundleMap) -> AttachBundleResult:
    """Glue a single-stratum bundle over a pair onto ``y`` along ``h``.

    Over old cells the result is ``y``; over the new cells it is ``m``;
    the fresh cross-stratum transitions are the composites of ``m``'s
    boundary transitions with ``h``.  The inclusion of ``y`` restricts
    back to ``y`` on the nose.
    """
    if y.cat != m.cat or y.ff != m.ff:
        raise StructureError("bundles must share category and fibre functor")
    if len({m.strat.strata[c] for c in m.base.cells}) > 1:
        raise StructureError("attached bundle must be single-stratum")
    a_set = frozenset(a_cells)
    expected = restrict(m, a_set)
    if not bundle_eq(h.source, expected):
        raise StructureError("h must start from the restriction of m to the attached cells")
    if not bundle_eq(h.target, y):
        raise StructureError("h must land in y")
    validate_fbundle_map(h).raise_if_invalid()

    attached = cellbase.attach_base(y.base, y.strat, m.base, a_set, h.base_map)
    fibre_obj = dict(y.fibre_obj)
    for c in attached.new_cells:
        fibre_obj[c] = m.fibre_obj[c]
    transition = dict(y.transition)
    for c in sorted(attached.new_cells):
        for f in m.base.cells[c].faces:
            if f in a_set:
                mid = m.cat.compose(h.fibre_morphisms[f], m.transition[(f, c)])
                key = (h.base_map.cell_map[f], c)
                if key in transition and key not in y.transition:
                    if m.ff.on_morphisms[transition[key]] != m.ff.on_morphisms[mid]:
                        raise StructureError(
                            f"attaching map identifies faces of {c} with incompatible transitions"
                        )
                transition[key] = mid
            else:
                transition[(f, c)] = m.transition[(f, c)]
    bundle = StratBundle(attached.complex, attached.strat, y.cat, y.ff, fibre_obj, transition)
    validate_bundle(bundle).raise_if_invalid()

    incl = FBundleMap(
        y, bundle, attached.incl_map, {c: y.cat.identities[y.fibre_obj[c]] for c in y.base.cells}
    )
    char_fibres = {}
    for c in m.base.cells:
        if c in a_set:
            char_fibres[c] = h.fibre_morphisms[c]
        else:
            char_fibres[c] = m.cat.identities[m.fibre_obj[c]]
    char = FBundleMap(m, bundle, attached.char_map, char_fibres)
    incl_a = FBundleMap(
        expected,
        m,
        cellbase.inclusion_map(expected.base, m.base),
        {c: m.cat.identities[m.fibre_obj[c]] for c in a_set},
    )
    square = PushoutSquare(expected, m, y, bundle, incl_a, h, char, incl)
    return AttachBundleResult(bundle, incl, char, square, attached.new_cells)


@dataclass
class PullbackResult:
    bundle: StratBundle
    covering: FBundleMap


def pullback(xprime: StratBundle, fbar: SimplicialMap, w_strat: Stratification) -> PullbackResult:
    """Pull a bundle back along a stratum-preserving simplicial map.

    Maps that move a cell to a different stratum index are refused: the
    pulled-back data would not satisfy the stratum invariants.
    """
    if fbar.target.cells != xprime.base.cells:
        raise StructureError("map target does not match the bundle base")
    cellbase.validate_simplicial_map(fbar).raise_if_invalid()
    ok, witness = cellbase.stratum_preserving(fbar, w_strat, xprime.strat)
    if not ok:
        c, i, j = witness
        raise PreconditionError(
            f"map is not stratum-preserving: cell {c} has stratum {i} but its image "
            f"{fbar.cell_map[c]} has stratum {j}"
        )
    fibre_obj = {c: xprime.fibre_obj[fbar.cell_map[c]] for c in fbar.source.cells}
    transition = {}
    for f, c in fbar.source.incidences:
        transition[(f, c)] = transition_path(xprime, fbar.cell_map[c], fbar.cell_map[f])
    bundle = StratBundle(fbar.source, w_strat, xprime.cat, xprime.ff, fibre_obj, transition)
    covering = FBundleMap(
        bundle, xprime, fbar, {c: xprime.cat.identities[fibre_obj[c]] for c in fbar.source.cells}
    )
    return PullbackResult(bundle, covering)


@dataclass
class FiberwiseProductResult:
    bundle: StratBundle
    product: fincat.ProductCategory


def fiberwise_product(x: StratBundle, xprime: StratBundle) -> FiberwiseProductResult:
    """Bundle of pairwise fibres over a shared stratified base."""
    if x.base.cells != xprime.base.cells or x.strat.strata != xprime.strat.strata:
        raise StructureError("bundles must share base and stratification")
    prod = fincat.product_category(x.cat, x.ff, xprime.cat, xprime.ff)
    fibre_obj = {
        c: fincat.pair_id(x.fibre_obj[c], xprime.fibre_obj[c]) for c in x.base.cells
    }
    transition = {
        key: fincat.pair_id(x.transition[key], xprime.transition[key])
        for key in x.transition
    }
    return FiberwiseProductResult(
        StratBundle(x.base, x.strat, prod.category, prod.ff, fibre_obj, transition), prod
    )


def realize_total(x: StratBundle) -> TotalComplex:
    """Category-of-elements total space: one element per (cell, fibre point)."""
    elements = []
    for c in x.base.sorted_cells():
        for v in x.fibre_set(c):
            elements.append((c, v))
    relations = []
    for f, c in x.base.incidences:
        table = x.transition_table(f, c)
        for v in x.fibre_set(c):
            relations.append(((f, table[v]), (c, v)))
    return TotalComplex(tuple(elements), tuple(sorted(relations)))


def disjoint_union_bundle(x: StratBundle, y: StratBundle) -> StratBundle:
    if x.cat != y.cat or x.ff != y.ff:
        raise StructureError("bundles must share category and fibre functor")
    base = cellbase.disjoint_union(x.base, y.base)
    strata = dict(x.strat.strata)
    strata.update(y.strat.strata)
    fibre_obj = dict(x.fibre_obj)
    fibre_obj.update(y.fibre_obj)
    transition = dict(x.transition)
    transition.update(y.transition)
    return StratBundle(base, Stratification(strata), x.cat, x.ff, fibre_obj, transition)


def relabel_bundle(x: StratBundle, fn) -> StratBundle:
    base = cellbase.relabel_complex(x.base, fn)
    strat = Stratification({fn(c): k for c, k in x.strat.strata.items()})
    fibre_obj = {fn(c): o for c, o in x.fibre_obj.items()}
    transition = {(fn(f), fn(c)): m for (f, c), m in x.transition.items()}
    return StratBundle(base, strat, x.cat, x.ff, fibre_obj, transition)


@dataclass
class PushoutCheckResult:
    ok: bool
    witness: str | None
    cocones_checked: int

    def __bool__(self) -> bool:
        return self.ok


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def classes(self) -> dict:
        return {x: self.find(x) for x in self.parent}


def _elem_image(h: FBundleMap, elem: tuple[str, str]) -> tuple[str, str]:
    c, v = elem
    return h.base_map.cell_map[c], h.target.ff.on_morphisms[h.fibre_morphisms[c]][v]


def pushout_universality_check(square: PushoutSquare, max_quotients: int = 5) -> PushoutCheckResult:
    """Decide whether the square's corner has the push-out universal property.

    Works at the level of total spaces: the concrete push-out of the two
    legs is built by union-find and compared with the corner through the
    canonical map, which must be an isomorphism of cell-graded element
    sets and of their face-relation graphs.  A bounded family of cocones
    (the canonical one plus small quotient targets drawn from the square's
    own fibres) is then swept, checking that a mediating map exists and is
    unique for each.  The cocone sweep is a bounded oracle; the canonical
    comparison is complete for finite data.
    """
    ta = realize_total(square.a)
    tm = realize_total(square.m)
    ty = realize_total(square.y)
    tz = realize_total(square.z)

    for elem in ta.elements:
        via_m = _elem_image(square.char, _elem_image(square.incl_a, elem))
        via_y = _elem_image(square.incl_y, _elem_image(square.h, elem))
        if via_m != via_y:
            return PushoutCheckResult(False, f"square does not commute at {elem}", 0)

    uf = _UnionFind()
    for elem in tm.elements:
        uf.add(("m", elem))
    for elem in ty.elements:
        uf.add(("y", elem))
    for elem in ta.elements:
        uf.union(("m", _elem_image(square.incl_a, elem)), ("y", _elem_image(square.h, elem)))
    reps = uf.classes()
    classes = sorted(set(reps.values()))

    kappa: dict = {}
    for node, rep in reps.items():
        tag, elem = node
        image = _elem_image(square.char if tag == "m" else square.incl_y, elem)
        if rep in kappa and kappa[rep] != image:
            return PushoutCheckResult(
                False,
                f"legs identify {rep} with both {kappa[rep]} and {image}: no mediating map "
                "can exist for the canonical cocone",
                1,
            )
        kappa[rep] = image

    covered = set(kappa.values())
    missing = [e for e in tz.elements if e not in covered]
    if missing:
        return PushoutCheckResult(
            False,
            f"corner element {missing[0]} is hit by neither leg: mediating maps are not unique",
            1,
        )
    if len(classes) != len(tz.elements):
        merged = [r for r in classes if list(kappa.values()).count(kappa[r]) > 1]
        return PushoutCheckResult(
            False,
            f"canonical comparison is not injective near {kappa[merged[0]]}",
            1,
        )

    # relation graphs must agree through the comparison map
    p_relations = set()
    for (fe, ce) in tm.relations:
        p_relations.add((kappa[reps[("m", fe)]], kappa[reps[("m", ce)]]))
    for (fe, ce) in ty.relations:
        p_relations.add((kappa[reps[("y", fe)]], kappa[reps[("y", ce)]]))
    if p_relations != set(tz.relations):
        diff = p_relations.symmetric_difference(set(tz.relations))
        return PushoutCheckResult(False, f"face relations differ at {sorted(diff)[0]}", 1)

    # bounded cocone sweep: canonical cocone, then small quotient targets
    cocones = 0
    by_cell: dict[str, list] = {}
    for r in classes:
        by_cell.setdefault(kappa[r][0], []).append(r)
    quotient_pairs = []
    for cell in sorted(by_cell):
        members = sorted(by_cell[cell])
        for i in range(len(members) - 1):
            quotient_pairs.append((members[i], members[i + 1]))
            if len(quotient_pairs) >= max_quotients:
                break
        if len(quotient_pairs) >= max_quotients:
            break
    for pair in [None] + quotient_pairs:
        collapse = {r: r for r in classes}
        if pair is not None:
            collapse[pair[1]] = pair[0]
        # forced mediating assignment through the two legs
        forced: dict = {}
        conflict = None
        for elem in tm.elements:
            z_elem = _elem_image(square.char, elem)
            value = collapse[reps[("m", elem)]]
            if forced.setdefault(z_elem, value) != value:
                conflict = z_elem
                break
        if conflict is None:
            for elem in ty.elements:
                z_elem = _elem_image(square.incl_y, elem)
                value = collapse[reps[("y", elem)]]
                if forced.setdefault(z_elem, value) != value:
                    conflict = z_elem
                    break
        cocones += 1
        if conflict is not None:
            return PushoutCheckResult(False, f"cocone mediates ambiguously at {conflict}", cocones)
        if len(forced) != len(tz.elements):
            return PushoutCheckResult(False, "cocone leaves corner elements unconstrained", cocones)
    return PushoutCheckResult(True, None, cocones)
