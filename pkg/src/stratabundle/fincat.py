"""Finite categories realized on finite sets.

A category is explicit finite data: object identifiers, morphism
identifiers with source and target, a total composition table on
composable pairs, and one identity morphism per object.  A fibre functor
realizes every object as a finite set of element identifiers and every
morphism as a total function table between the corresponding sets.

Hom-sets are kept as lexicographically sorted tuples so that every
derived construction (quotients, products, opposites, hom functors) is
deterministic.  Morphism equality is equality of identifiers; equality
*in the image* of a fibre functor (same endpoints, same function table)
is the coarser relation used throughout the bundle machinery.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .validation import StructureError, ValidationReport


@dataclass(frozen=True)
class Morphism:
    id: str
    src: str
    tgt: str


def identity_table(elements) -> dict[str, str]:
    return {e: e for e in elements}


def compose_tables(outer: dict[str, str], inner: dict[str, str]) -> dict[str, str]:
    """Function table of ``outer`` applied after ``inner``."""
    return {e: outer[v] for e, v in inner.items()}


def is_bijective_table(table: dict[str, str], target_elements) -> bool:
    values = list(table.values())
    return len(set(values)) == len(values) and set(values) == set(target_elements)


@dataclass
class FiniteCategory:
    objects: tuple[str, ...]
    morphisms: dict[str, Morphism]
    compose_table: dict[tuple[str, str], str]
    identities: dict[str, str]
    homs: dict[tuple[str, str], tuple[str, ...]] = field(init=False)

    def __post_init__(self):
        buckets: dict[tuple[str, str], list[str]] = {}
        for m in self.morphisms.values():
            buckets.setdefault((m.src, m.tgt), []).append(m.id)
        self.homs = {k: tuple(sorted(v)) for k, v in buckets.items()}

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self.homs.get((a, b), ())

    def src(self, mid: str) -> str:
        return self.morphisms[mid].src

    def tgt(self, mid: str) -> str:
        return self.morphisms[mid].tgt

    def identity(self, obj: str) -> str:
        return self.identities[obj]

    def compose(self, g: str, f: str) -> str:
        """Composite ``g`` after ``f``."""
        try:
            return self.compose_table[(g, f)]
        except KeyError:
            raise StructureError(f"no composite recorded for ({g}, {f})") from None


@dataclass
class FibreFunctor:
    on_objects: dict[str, tuple[str, ...]]
    on_morphisms: dict[str, dict[str, str]]

    def fibre(self, obj: str) -> tuple[str, ...]:
        return self.on_objects[obj]

    def table(self, mid: str) -> dict[str, str]:
        return self.on_morphisms[mid]

    def apply(self, mid: str, element: str) -> str:
        return self.on_morphisms[mid][element]


def category(objects, morphisms, compose, identities) -> FiniteCategory:
    """Assemble a category from raw identifier data; run validate_category separately."""
    mors = {mid: Morphism(mid, s, t) for mid, s, t in morphisms}
    return FiniteCategory(tuple(objects), mors, dict(compose), dict(identities))


def fibre_functor(on_objects, on_morphisms) -> FibreFunctor:
    return FibreFunctor(
        {k: tuple(v) for k, v in on_objects.items()},
        {k: dict(v) for k, v in on_morphisms.items()},
    )


def validate_category(cat: FiniteCategory) -> ValidationReport:
    """Exhaustively check the category axioms, naming every violation."""
    rep = ValidationReport("category")
    objset = set(cat.objects)
    if len(cat.objects) != len(objset):
        rep.add("objects-duplicate", "object list contains duplicates")
    for key, m in cat.morphisms.items():
        if m.id != key:
            rep.add("morphism-key", f"{m.id} stored under key {key}")
        if m.src not in objset or m.tgt not in objset:
            rep.add("morphism-endpoints", f"{m.id}: {m.src} -> {m.tgt} not within objects")
    for v in cat.objects:
        i = cat.identities.get(v)
        if i is None or i not in cat.morphisms:
            rep.add("identity-missing", f"object {v} has no identity morphism")
            continue
        m = cat.morphisms[i]
        if (m.src, m.tgt) != (v, v):
            rep.add("identity-endpoints", f"{i} is not an endomorphism of {v}")

    mors = cat.morphisms
    for f in mors.values():
        for g in mors.values():
            if f.tgt != g.src:
                continue
            gf = cat.compose_table.get((g.id, f.id))
            if gf is None:
                rep.add("compose-missing", f"({g.id}, {f.id})")
            elif gf not in mors or mors[gf].src != f.src or mors[gf].tgt != g.tgt:
                rep.add("compose-typing", f"({g.id}, {f.id}) -> {gf}")
    for (g, f), gf in cat.compose_table.items():
        if g not in mors or f not in mors or mors[f].tgt != mors[g].src:
            rep.add("compose-spurious", f"({g}, {f}) -> {gf}")

    for m in mors.values():
        left = cat.identities.get(m.tgt)
        right = cat.identities.get(m.src)
        if left in mors and cat.compose_table.get((left, m.id)) != m.id:
            rep.add("identity-law", f"left identity fails on {m.id}")
        if right in mors and cat.compose_table.get((m.id, right)) != m.id:
            rep.add("identity-law", f"right identity fails on {m.id}")

    for f in mors.values():
        for g in mors.values():
            if g.src != f.tgt:
                continue
            gf = cat.compose_table.get((g.id, f.id))
            if gf is None:
                continue
            for h in mors.values():
                if h.src != g.tgt:
                    continue
                hg = cat.compose_table.get((h.id, g.id))
                if hg is None:
                    continue
                left = cat.compose_table.get((h.id, gf))
                right = cat.compose_table.get((hg, f.id))
                if left != right or left is None:
                    rep.add("associativity", f"({h.id}, {g.id}, {f.id})")
    return rep


def validate_fibre_functor(cat: FiniteCategory, ff: FibreFunctor) -> ValidationReport:
    rep = ValidationReport("fibre-functor")
    for v in cat.objects:
        elems = ff.on_objects.get(v)
        if elems is None:
            rep.add("fibre-missing", f"object {v}")
        elif len(set(elems)) != len(elems):
            rep.add("fibre-duplicate", f"object {v}")
    for m in cat.morphisms.values():
        tab = ff.on_morphisms.get(m.id)
        if tab is None:
            rep.add("action-missing", m.id)
            continue
        dom = ff.on_objects.get(m.src, ())
        cod = set(ff.on_objects.get(m.tgt, ()))
        if set(tab) != set(dom):
            rep.add("action-domain", f"{m.id}: table keys differ from fibre of {m.src}")
        elif any(x not in cod for x in tab.values()):
            rep.add("action-codomain", f"{m.id}: values escape fibre of {m.tgt}")
    for v in cat.objects:
        i = cat.identities.get(v)
        if i in ff.on_morphisms and v in ff.on_objects:
            if ff.on_morphisms[i] != identity_table(ff.on_objects[v]):
                rep.add("action-identity", f"identity of {v} does not act as identity")
    for (g, f), gf in cat.compose_table.items():
        if g in ff.on_morphisms and f in ff.on_morphisms and gf in ff.on_morphisms:
            if ff.on_morphisms[gf] != compose_tables(ff.on_morphisms[g], ff.on_morphisms[f]):
                rep.add("action-composition", f"({g}, {f})")
    return rep


def ff_equal(cat: FiniteCategory, ff: FibreFunctor, a: str, b: str) -> bool:
    """Equality of two morphisms in the image of the fibre functor."""
    ma, mb = cat.morphisms[a], cat.morphisms[b]
    if (ma.src, ma.tgt) != (mb.src, mb.tgt):
        return False
    return ff.on_morphisms[a] == ff.on_morphisms[b]


def image_inverse(cat: FiniteCategory, ff: FibreFunctor, mid: str) -> str | None:
    """A two-sided inverse of ``mid`` up to image equality, if one exists."""
    m = cat.morphisms[mid]
    id_src = identity_table(ff.on_objects[m.src])
    id_tgt = identity_table(ff.on_objects[m.tgt])
    tab = ff.on_morphisms[mid]
    for u in cat.hom(m.tgt, m.src):
        utab = ff.on_morphisms[u]
        if compose_tables(utab, tab) == id_src and compose_tables(tab, utab) == id_tgt:
            return u
    return None


def is_iso_in_image(cat: FiniteCategory, ff: FibreFunctor, mid: str) -> bool:
    return image_inverse(cat, ff, mid) is not None


def is_groupoid(cat: FiniteCategory) -> tuple[bool, str | None]:
    """True when every morphism has a strict two-sided inverse; else a witness."""
    for m in sorted(cat.morphisms.values(), key=lambda x: x.id):
        found = False
        for u in cat.hom(m.tgt, m.src):
            if (
                cat.compose_table.get((u, m.id)) == cat.identities[m.src]
                and cat.compose_table.get((m.id, u)) == cat.identities[m.tgt]
            ):
                found = True
                break
        if not found:
            return False, m.id
    return True, None


@dataclass
class FaithfulImage:
    category: FiniteCategory
    ff: FibreFunctor
    quotient: dict[str, str]


def faithful_image(cat: FiniteCategory, ff: FibreFunctor) -> FaithfulImage:
    """Quotient the category by equality of fibre actions.

    Morphisms with the same endpoints and the same function table are
    merged; the lexicographically smallest identifier represents each
    class.  The induced fibre functor is faithful and the quotient map is
    the identity on objects.
    """
    classes: dict[tuple, list[str]] = {}
    for m in cat.morphisms.values():
        key = (m.src, m.tgt, tuple(sorted(ff.on_morphisms[m.id].items())))
        classes.setdefault(key, []).append(m.id)
    quotient: dict[str, str] = {}
    for members in classes.values():
        rep = min(members)
        for mid in members:
            quotient[mid] = rep
    reps = sorted(set(quotient.values()))
    mors = {r: cat.morphisms[r] for r in reps}
    compose = {}
    for g in reps:
        for f in reps:
            if cat.morphisms[f].tgt == cat.morphisms[g].src:
                compose[(g, f)] = quotient[cat.compose(g, f)]
    identities = {v: quotient[i] for v, i in cat.identities.items()}
    qcat = FiniteCategory(cat.objects, mors, compose, identities)
    qff = FibreFunctor(dict(ff.on_objects), {r: dict(ff.on_morphisms[r]) for r in reps})
    return FaithfulImage(qcat, qff, quotient)


def is_faithful(cat: FiniteCategory, ff: FibreFunctor) -> bool:
    seen = set()
    for m in cat.morphisms.values():
        key = (m.src, m.tgt, tuple(sorted(ff.on_morphisms[m.id].items())))
        if key in seen:
            return False
        seen.add(key)
    return True


def hom_fibre_functor(cat: FiniteCategory, v: str) -> FibreFunctor:
    """Fibre functor sending an object to the hom-set out of ``v``.

    Elements are the morphism identifiers of hom(v, -); a morphism acts by
    post-composition.
    """
    if v not in cat.objects:
        raise StructureError(f"unknown object {v}")
    on_objects = {w: tuple(cat.hom(v, w)) for w in cat.objects}
    on_morphisms = {}
    for m in cat.morphisms.values():
        on_morphisms[m.id] = {f: cat.compose(m.id, f) for f in cat.hom(v, m.src)}
    return FibreFunctor(on_objects, on_morphisms)


def pair_id(a: str, b: str) -> str:
    return f"({a},{b})"


@dataclass
class ProductCategory:
    category: FiniteCategory
    ff: FibreFunctor
    obj_pairs: dict[str, tuple[str, str]]
    mor_pairs: dict[str, tuple[str, str]]
    elem_pairs: dict[str, tuple[str, str]]


def product_category(
    cat_a: FiniteCategory,
    ff_a: FibreFunctor,
    cat_b: FiniteCategory,
    ff_b: FibreFunctor,
) -> ProductCategory:
    """Category of pairs with the product-set fibre functor."""
    obj_pairs = {}
    for a in cat_a.objects:
        for b in cat_b.objects:
            obj_pairs[pair_id(a, b)] = (a, b)
    mor_pairs = {}
    mors = {}
    for m in cat_a.morphisms.values():
        for n in cat_b.morphisms.values():
            mid = pair_id(m.id, n.id)
            mor_pairs[mid] = (m.id, n.id)
            mors[mid] = Morphism(mid, pair_id(m.src, n.src), pair_id(m.tgt, n.tgt))
    compose = {}
    for (g1, f1), c1 in cat_a.compose_table.items():
        for (g2, f2), c2 in cat_b.compose_table.items():
            compose[(pair_id(g1, g2), pair_id(f1, f2))] = pair_id(c1, c2)
    identities = {
        pair_id(a, b): pair_id(cat_a.identities[a], cat_b.identities[b])
        for a in cat_a.objects
        for b in cat_b.objects
    }
    cat = FiniteCategory(tuple(sorted(obj_pairs)), mors, compose, identities)

    elem_pairs = {}
    on_objects = {}
    for oid, (a, b) in obj_pairs.items():
        elems = []
        for x in ff_a.on_objects[a]:
            for y in ff_b.on_objects[b]:
                eid = pair_id(x, y)
                elem_pairs[eid] = (x, y)
                elems.append(eid)
        on_objects[oid] = tuple(elems)
    on_morphisms = {}
    for mid, (m, n) in mor_pairs.items():
        ta, tb = ff_a.on_morphisms[m], ff_b.on_morphisms[n]
        on_morphisms[mid] = {
            pair_id(x, y): pair_id(ta[x], tb[y]) for x in ta for y in tb
        }
    return ProductCategory(cat, FibreFunctor(on_objects, on_morphisms), obj_pairs, mor_pairs, elem_pairs)


def opposite(cat: FiniteCategory) -> FiniteCategory:
    """Reverse all morphisms; the composition table is transposed."""
    mors = {m.id: Morphism(m.id, m.tgt, m.src) for m in cat.morphisms.values()}
    compose = {(f, g): gf for (g, f), gf in cat.compose_table.items()}
    return FiniteCategory(cat.objects, mors, compose, dict(cat.identities))


@dataclass
class CatFunctor:
    source: FiniteCategory
    target: FiniteCategory
    on_objects: dict[str, str]
    on_morphisms: dict[str, str]


def identity_cat_functor(cat: FiniteCategory) -> CatFunctor:
    return CatFunctor(
        cat,
        cat,
        {v: v for v in cat.objects},
        {m: m for m in cat.morphisms},
    )


def validate_cat_functor(phi: CatFunctor) -> ValidationReport:
    rep = ValidationReport("functor")
    src, tgt = phi.source, phi.target
    for v in src.objects:
        if phi.on_objects.get(v) not in tgt.objects:
            rep.add("functor-object", f"{v} has no image object")
    for m in src.morphisms.values():
        img = phi.on_morphisms.get(m.id)
        if img is None or img not in tgt.morphisms:
            rep.add("functor-morphism", f"{m.id} has no image morphism")
            continue
        im = tgt.morphisms[img]
        if (im.src, im.tgt) != (phi.on_objects.get(m.src), phi.on_objects.get(m.tgt)):
            rep.add("functor-typing", f"{m.id} image has wrong endpoints")
    for v in src.objects:
        i = src.identities[v]
        if phi.on_morphisms.get(i) != tgt.identities.get(phi.on_objects.get(v)):
            rep.add("functor-identity", f"identity of {v} not preserved")
    for (g, f), gf in src.compose_table.items():
        pg, pf, pgf = (phi.on_morphisms.get(x) for x in (g, f, gf))
        if pg is None or pf is None:
            continue
        if tgt.compose_table.get((pg, pf)) != pgf:
            rep.add("functor-composition", f"({g}, {f})")
    return rep


def precompose_fibre_functor(gg: FibreFunctor, phi: CatFunctor) -> FibreFunctor:
    """Pull a fibre functor on the target category back along a functor."""
    on_objects = {v: gg.on_objects[phi.on_objects[v]] for v in phi.source.objects}
    on_morphisms = {m: dict(gg.on_morphisms[phi.on_morphisms[m]]) for m in phi.source.morphisms}
    return FibreFunctor(on_objects, on_morphisms)


def one_point_functor(cat: FiniteCategory) -> FibreFunctor:
    on_objects = {v: ("*",) for v in cat.objects}
    on_morphisms = {m: {"*": "*"} for m in cat.morphisms}
    return FibreFunctor(on_objects, on_morphisms)
