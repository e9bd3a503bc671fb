"""Function-space bundles, principal diagrams, coends and associated bundles.

For finite fibres the space of admissible maps out of an object is again
a finite set, so the whole principal-bundle story becomes exact set
bookkeeping: the component at V has fibre hom(V, W_c) over a cell with
fibre object W_c, morphisms of the structure category act by
post-composition, and the diagram actions act by pre-composition.  The
coend quotient is computed by union-find with least-representative
canonical class names, and the evaluation map is produced as an explicit
cellwise bijection.

Operations that need a faithful fibre functor quietly pass to the
faithful image first; results are reported over that quotient.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import fincat, strabundle
from .cellbase import BaseComplex, Stratification
from .fincat import CatFunctor, FibreFunctor, FiniteCategory
from .strabundle import FibrewiseMap, StratBundle
from .validation import StructureError, ValidationReport


@dataclass
class FunctionBundle:
    bundle: StratBundle
    tag: str


@dataclass
class DiagramBundle:
    """Family of function bundles over one base, with pre-composition actions.

    ``actions[g][c]`` is the table of the map component(tgt g) ->
    component(src g) over the cell ``c``.
    """

    cat: FiniteCategory
    base: BaseComplex
    strat: Stratification
    fibre_obj: dict[str, str]
    transitions: dict[tuple[str, str], str]
    components: dict[str, FunctionBundle]
    actions: dict[str, dict[str, dict[str, str]]]


def _faithful_input(x: StratBundle) -> StratBundle:
    if fincat.is_faithful(x.cat, x.ff):
        return x
    return strabundle.to_faithful(x)[0]


def function_bundle(x: StratBundle, v: str) -> FunctionBundle:
    """Bundle of admissible maps out of ``v``: fibres are hom-sets.

    Fibre objects and transitions are unchanged; only the fibre functor
    is replaced by the hom functor at ``v``, acting by post-composition.
    """
    x = _faithful_input(x)
    if v not in x.cat.objects:
        raise StructureError(f"unknown object {v}")
    ff_v = fincat.hom_fibre_functor(x.cat, v)
    bundle = StratBundle(x.base, x.strat, x.cat, ff_v, dict(x.fibre_obj), dict(x.transition))
    return FunctionBundle(bundle, v)


def principal_diagram(x: StratBundle) -> DiagramBundle:
    """All function bundles of ``x`` together with the pre-composition actions."""
    x = _faithful_input(x)
    components = {v: function_bundle(x, v) for v in x.cat.objects}
    actions: dict[str, dict[str, dict[str, str]]] = {}
    table_memo: dict[tuple[str, str], dict[str, str]] = {}
    for g in x.cat.morphisms.values():
        per_cell = {}
        for c in x.base.sorted_cells():
            w = x.fibre_obj[c]
            key = (g.id, w)
            if key not in table_memo:
                table_memo[key] = {
                    alpha: x.cat.compose(alpha, g.id) for alpha in x.cat.hom(g.tgt, w)
                }
            per_cell[c] = table_memo[key]
        actions[g.id] = per_cell
    return DiagramBundle(
        x.cat, x.base, x.strat, dict(x.fibre_obj), dict(x.transition), components, actions
    )


def action_fibrewise(d: DiagramBundle, g: str) -> FibrewiseMap:
    """The action of one morphism as a base-fixing map of function bundles."""
    m = d.cat.morphisms[g]
    return FibrewiseMap(
        d.components[m.tgt].bundle,
        d.components[m.src].bundle,
        {c: dict(t) for c, t in d.actions[g].items()},
    )


def validate_diagram(d: DiagramBundle) -> ValidationReport:
    """Check component consistency, action tables and contravariance."""
    rep = ValidationReport("diagram")
    if set(d.components) != set(d.cat.objects):
        rep.add("components", "one component per object is required")
        return rep
    for v, comp in d.components.items():
        if comp.tag != v:
            rep.add("component-tag", v)
        b = comp.bundle
        if b.base.cells != d.base.cells or b.strat.strata != d.strat.strata:
            rep.add("component-base", v)
        if b.fibre_obj != d.fibre_obj or b.transition != d.transitions:
            rep.add("component-data", v)
        if b.ff != fincat.hom_fibre_functor(d.cat, v):
            rep.add("component-functor", v)
        sub = strabundle.validate_bundle(b)
        if not sub.ok:
            rep.add("component-invalid", f"{v}: {sub.violations[0].code}")
    if not rep.ok:
        return rep
    if set(d.actions) != set(d.cat.morphisms):
        rep.add("actions", "one action per morphism is required")
        return rep
    distinct = sorted(set(d.fibre_obj.values()))
    witness_cell = {w: min(c for c, o in d.fibre_obj.items() if o == w) for w in distinct}
    for g in d.cat.morphisms.values():
        for c in d.base.sorted_cells():
            w = d.fibre_obj[c]
            expected = {alpha: d.cat.compose(alpha, g.id) for alpha in d.cat.hom(g.tgt, w)}
            if d.actions[g.id].get(c) != expected:
                rep.add("action-table", f"{g.id} over {c}")
    if not rep.ok:
        return rep
    # action tables agree across cells with one fibre object, so
    # contravariance is checked once per distinct object
    for w in distinct:
        c = witness_cell[w]
        for v in d.cat.objects:
            ident = d.cat.identities[v]
            elems = d.components[v].bundle.fibre_set(c)
            if d.actions[ident][c] != fincat.identity_table(elems):
                rep.add("action-identity", f"{ident} over object {w}")
        for (g2, g1), comp in d.cat.compose_table.items():
            left = d.actions[comp][c]
            right = fincat.compose_tables(d.actions[g1][c], d.actions[g2][c])
            if left != right:
                rep.add("contravariance", f"({g2}, {g1}) over object {w}")
    return rep


@dataclass
class CoendResult:
    bundle: StratBundle
    classes: dict[str, tuple[tuple[tuple[str, str, str], ...], ...]]
    class_of: dict[str, dict[tuple[str, str, str], tuple[str, str, str]]]
    evaluation: dict[str, dict[tuple[str, str, str], str]]
    report: ValidationReport


def _coend_classes_for_object(
    cat: FiniteCategory, ff2: FibreFunctor, w: str
) -> tuple[list[tuple], dict]:
    """Quotient of all (object, map-to-w, fibre element) triples for one object."""
    uf = strabundle._UnionFind()
    triples = []
    for v in cat.objects:
        for alpha in cat.hom(v, w):
            for y in ff2.on_objects[v]:
                t = (v, alpha, y)
                triples.append(t)
                uf.add(t)
    for g in cat.morphisms.values():
        for alpha in cat.hom(g.tgt, w):
            pulled = cat.compose(alpha, g.id)
            for y in ff2.on_objects[g.src]:
                uf.union((g.src, pulled, y), (g.tgt, alpha, ff2.on_morphisms[g.id][y]))
    reps = {t: uf.find(t) for t in triples}
    classes: dict[tuple, list[tuple]] = {}
    for t, r in reps.items():
        classes.setdefault(r, []).append(t)
    ordered = [tuple(sorted(classes[r])) for r in sorted(classes)]
    return ordered, reps


def coend(d: DiagramBundle, ff2: FibreFunctor) -> CoendResult:
    """Quotient the pointwise pairs of the diagram with a fibre functor.

    Classes over a cell are classes of (V, alpha: V -> W_c, y in ff2(V));
    the induced transitions are verified to be well defined on classes,
    and the evaluation map applying ff2(alpha) to y is produced and
    checked to be a cellwise bijection onto the fibres of the rebuilt
    bundle, commuting with all transitions.
    """
    rep = ValidationReport("coend")
    for v in d.cat.objects:
        if v not in ff2.on_objects:
            raise StructureError(f"fibre functor misses object {v}")
    memo: dict[str, tuple[list[tuple], dict]] = {}
    for w in sorted(set(d.fibre_obj.values())):
        memo[w] = _coend_classes_for_object(d.cat, ff2, w)

    classes = {}
    class_of = {}
    evaluation = {}
    for c in d.base.sorted_cells():
        ordered, reps = memo[d.fibre_obj[c]]
        classes[c] = tuple(ordered)
        class_of[c] = dict(reps)
        ev = {}
        for members in ordered:
            values = {ff2.on_morphisms[alpha][y] for (_, alpha, y) in members}
            if len(values) > 1:
                rep.add("evaluation-constant", f"class {members[0]} over {c} evaluates ambiguously")
            ev[members[0]] = min(values)
        target = ff2.on_objects[d.fibre_obj[c]]
        if sorted(ev.values()) != sorted(target):
            rep.add(
                "evaluation-bijective",
                f"cell {c}: {len(ev)} classes against {len(target)} fibre elements",
            )
        evaluation[c] = ev

    for f, c in d.base.incidences:
        t = d.transitions[(f, c)]
        table = ff2.on_morphisms[t]
        for members in classes[c]:
            images = {class_of[f][(v, d.cat.compose(t, alpha), y)] for (v, alpha, y) in members}
            if len(images) > 1:
                rep.add("transition-well-defined", f"({f}, {c}) on class {members[0]}")
                continue
            target_rep = images.pop()
            if evaluation[f][target_rep] != table[evaluation[c][members[0]]]:
                rep.add("transition-evaluation", f"({f}, {c}) on class {members[0]}")
    bundle = StratBundle(
        d.base, d.strat, d.cat, ff2, dict(d.fibre_obj), dict(d.transitions)
    )
    rep.merge(strabundle.validate_bundle(bundle))
    return CoendResult(bundle, classes, class_of, evaluation, rep)


def class_key(rep: tuple[str, str, str]) -> str:
    return "|".join(rep)


@dataclass
class ReconstructResult:
    ok: bool
    bundle: StratBundle
    coend: CoendResult
    iso: dict[str, dict[str, str]] | None

    def iso_doc(self) -> dict:
        return {"cells": self.iso or {}}


def reconstruct_check(x: StratBundle) -> ReconstructResult:
    """Rebuild a bundle from its own principal diagram and compare.

    The returned iso sends each coend class (named by its least
    representative) to the fibre element it evaluates to; it is a
    cellwise bijection commuting with every transition.  On valid input a
    False answer indicates a defect in this package, not in the input.
    """
    x = _faithful_input(x)
    d = principal_diagram(x)
    res = coend(d, x.ff)
    ok = res.report.ok and strabundle.bundle_eq(res.bundle, x)
    iso = None
    if ok:
        iso = {
            c: {class_key(rep): elem for rep, elem in sorted(res.evaluation[c].items())}
            for c in x.base.sorted_cells()
        }
    return ReconstructResult(ok, x, res, iso)


@dataclass
class AssociatedResult:
    bundle: StratBundle
    coend: CoendResult


def associated_bundle(x: StratBundle, phi: CatFunctor, gg: FibreFunctor) -> AssociatedResult:
    """Transport a bundle along a functor between structure categories.

    The principal diagram of ``x`` is contracted against the pulled-back
    fibre functor; the result is re-expressed over the target category by
    applying the functor to fibre objects and transitions.
    """
    x = _faithful_input(x)
    if phi.source != x.cat:
        raise StructureError("functor source must be the bundle's structure category")
    fincat.validate_cat_functor(phi).raise_if_invalid()
    fincat.validate_fibre_functor(phi.target, gg).raise_if_invalid()
    ff2 = fincat.precompose_fibre_functor(gg, phi)
    res = coend(principal_diagram(x), ff2)
    res.report.raise_if_invalid()
    fibre_obj = {c: phi.on_objects[w] for c, w in x.fibre_obj.items()}
    transition = {k: phi.on_morphisms[m] for k, m in x.transition.items()}
    bundle = StratBundle(x.base, x.strat, phi.target, gg, fibre_obj, transition)
    strabundle.validate_bundle(bundle).raise_if_invalid()
    return AssociatedResult(bundle, res)


def nkc_certificate(cat: FiniteCategory, ff: FibreFunctor) -> dict:
    """Record that all hom-sets are finite, hence compact.

    For finite structure categories the function-space fibres carry the
    discrete topology, so no further point-set checking is meaningful;
    the certificate only reports cardinalities.
    """
    cards = {f"{a}->{b}": len(cat.hom(a, b)) for a in cat.objects for b in cat.objects}
    return {
        "kind": "nkc-certificate",
        "objects": sorted(cat.objects),
        "hom_cardinalities": cards,
        "max_hom": max(cards.values(), default=0),
        "hom_sets_finite": True,
        "hom_sets_compact": True,
        "nkc": True,
        "function_space_topology": "discrete",
        "note": "finite hom-sets are compact, so admissible-map spaces are finite discrete sets",
    }
