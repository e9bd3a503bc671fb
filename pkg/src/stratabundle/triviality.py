"""Trivializations, local triviality certificates and covering realizations.

Over a connected region whose transitions are all invertible in the
fibre-functor image, charts are propagated from the least cell along a
spanning tree of the incidence graph and every non-tree incidence is then
checked; the first failing incidence closes a holonomy loop that is
reported as the obstruction.  Closed stars of a complex are contractible,
so for groupoid-style bundles the star-by-star sweep always succeeds and
its output is a complete locally-trivial atlas.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import cellbase, fincat, strabundle
from .cellbase import Stratification
from .fincat import compose_tables
from .strabundle import FBundleMap, StratBundle, TotalComplex
from .validation import PreconditionError, StructureError, ValidationReport


@dataclass
class Trivialization:
    region: tuple[str, ...]
    object: str
    charts: dict[str, str]  # cell -> iso onto the common fibre object


@dataclass
class Obstruction:
    loop: tuple[str, ...]
    holonomy: str
    detail: str


@dataclass
class TrivializeResult:
    trivialization: Trivialization | None
    obstruction: Obstruction | None

    @property
    def ok(self) -> bool:
        return self.trivialization is not None


def _tree_paths(sub, tree):
    """Parent links and path-to-root recovery for a spanning tree."""
    adjacency: dict[str, list[tuple[str, str, str]]] = {c: [] for c in sub.cells}
    for f, c in tree:
        adjacency[f].append((c, f, c))
        adjacency[c].append((f, f, c))
    return adjacency


def trivialize_over(x: StratBundle, region) -> TrivializeResult:
    """Charts onto one fibre object over a connected region, or a holonomy loop.

    Requires every transition inside the region to be invertible in the
    image of the fibre functor.
    """
    cells = sorted(set(region))
    unknown = [c for c in cells if c not in x.base.cells]
    if unknown:
        raise StructureError(f"unknown cells {unknown}")
    sub = cellbase.subcomplex(x.base, cells)
    inverses: dict[tuple[str, str], str] = {}
    for f, c in sub.incidences:
        mid = x.transition[(f, c)]
        inv = fincat.image_inverse(x.cat, x.ff, mid)
        if inv is None:
            raise PreconditionError(
                f"transition ({f}, {c}) -> {mid} is not invertible over the region"
            )
        inverses[(f, c)] = inv
    tree = cellbase.poset_spanning_tree(sub)

    root = sub.sorted_cells()[0]
    obj = x.fibre_obj[root]
    charts = {root: x.cat.identities[obj]}
    parents = _tree_paths(sub, tree)
    order = [root]
    seen = {root}
    i = 0
    while i < len(order):
        cur = order[i]
        i += 1
        for nxt, f, c in sorted(parents[cur]):
            if nxt in seen:
                continue
            seen.add(nxt)
            if nxt == f:  # stepping down: invert the transition afterwards
                charts[nxt] = x.cat.compose(charts[cur], inverses[(f, c)])
            else:  # stepping up along (f, c) with cur == f
                charts[nxt] = x.cat.compose(charts[cur], x.transition[(f, c)])
            order.append(nxt)

    tree_set = set(tree)
    ff = x.ff
    for f, c in sub.incidences:
        if (f, c) in tree_set:
            continue
        lhs = compose_tables(ff.on_morphisms[charts[f]], x.transition_table(f, c))
        rhs = ff.on_morphisms[charts[c]]
        if lhs != rhs:
            holonomy = x.cat.compose(
                x.cat.compose(charts[f], x.transition[(f, c)]),
                fincat.image_inverse(x.cat, x.ff, charts[c]),
            )
            loop = _loop_through(sub, tree, f, c)
            return TrivializeResult(
                None,
                Obstruction(
                    loop,
                    holonomy,
                    f"incidence ({f}, {c}) closes a loop with non-identity holonomy {holonomy}",
                ),
            )
    # chart compatibility now holds on every incidence, tree or not
    return TrivializeResult(Trivialization(tuple(cells), obj, charts), None)


def _loop_through(sub, tree, f: str, c: str) -> tuple[str, ...]:
    parent: dict[str, str | None] = {}
    root = sub.sorted_cells()[0]
    adjacency = _tree_paths(sub, tree)
    parent[root] = None
    queue = [root]
    while queue:
        cur = queue.pop(0)
        for nxt, _, _ in sorted(adjacency[cur]):
            if nxt not in parent:
                parent[nxt] = cur
                queue.append(nxt)

    def path_to_root(cell):
        out = [cell]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    up_f = path_to_root(f)
    up_c = path_to_root(c)
    common = set(up_f) & set(up_c)
    trim_f = []
    for cell in up_f:
        trim_f.append(cell)
        if cell in common:
            break
    trim_c = []
    for cell in up_c:
        trim_c.append(cell)
        if cell in common:
            break
    return tuple(trim_c + list(reversed(trim_f[:-1])))


def validate_trivialization(x: StratBundle, t: Trivialization) -> ValidationReport:
    rep = ValidationReport("trivialization")
    sub = cellbase.subcomplex(x.base, t.region)
    for c in sub.sorted_cells():
        mid = t.charts.get(c)
        if mid is None:
            rep.add("chart-missing", c)
            continue
        m = x.cat.morphisms[mid]
        if m.src != x.fibre_obj[c] or m.tgt != t.object:
            rep.add("chart-typing", c)
        elif not fincat.is_iso_in_image(x.cat, x.ff, mid):
            rep.add("chart-iso", c)
    if not rep.ok:
        return rep
    for f, c in sub.incidences:
        lhs = compose_tables(x.ff.on_morphisms[t.charts[f]], x.transition_table(f, c))
        if lhs != x.ff.on_morphisms[t.charts[c]]:
            rep.add("chart-compatibility", f"incidence ({f}, {c})")
    return rep


def trivialization_iso(x: StratBundle, t: Trivialization) -> FBundleMap:
    """Explicit bundle isomorphism from the restriction onto the product bundle."""
    sub = strabundle.restrict(x, t.region)
    prod = strabundle.product_bundle(sub.base, sub.strat, x.cat, x.ff, t.object)
    return FBundleMap(sub, prod, cellbase.identity_map(sub.base), dict(t.charts))


@dataclass
class TrivialityCertificate:
    stars: dict[str, Trivialization]

    def to_doc(self) -> dict:
        return {
            "kind": "triviality-certificate",
            "stars": {
                c: {
                    "region": list(t.region),
                    "object": t.object,
                    "charts": dict(sorted(t.charts.items())),
                }
                for c, t in sorted(self.stars.items())
            },
        }


def local_triviality_certificate(x: StratBundle) -> TrivialityCertificate:
    """Trivialize over the closed star of every cell.

    Requires the faithful image of the structure category to be a
    groupoid; the witness morphism is reported otherwise.  Failure over
    some star would contradict coherence and is raised as an internal
    error rather than returned.
    """
    fi = fincat.faithful_image(x.cat, x.ff)
    ok, witness = fincat.is_groupoid(fi.category)
    if not ok:
        raise PreconditionError(
            f"structure category is not a groupoid in its faithful image; witness {witness}"
        )
    stars = {}
    for c in x.base.sorted_cells():
        res = trivialize_over(x, cellbase.star_cells(x.base, c))
        if not res.ok:
            raise StructureError(
                f"closed star of {c} failed to trivialize: {res.obstruction.detail}; "
                "this contradicts coherence and indicates a defect in the bundle data"
            )
        stars[c] = res.trivialization
    return TrivialityCertificate(stars)


def permutation_cycle_type(perm: dict[str, str]) -> tuple[int, ...]:
    seen = set()
    lengths = []
    for start in sorted(perm):
        if start in seen:
            continue
        n = 0
        cur = start
        while cur not in seen:
            seen.add(cur)
            cur = perm[cur]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


@dataclass
class MonodromyEntry:
    closing_incidence: tuple[str, str]
    permutation: dict[str, str]
    cycle_type: tuple[int, ...]


@dataclass
class CoveringCertificate:
    total: TotalComplex
    components: int
    sheets: dict[str, int]  # least cell of each base component -> sheet count
    even_cover: bool
    basepoint: str
    monodromy: list[MonodromyEntry]

    def to_doc(self) -> dict:
        return {
            "kind": "covering-certificate",
            "components": self.components,
            "sheets": dict(sorted(self.sheets.items())),
            "even_cover": self.even_cover,
            "basepoint": self.basepoint,
            "monodromy": [
                {
                    "closes": list(e.closing_incidence),
                    "permutation": dict(sorted(e.permutation.items())),
                    "cycle_type": list(e.cycle_type),
                }
                for e in self.monodromy
            ],
        }


def covering_space(x: StratBundle) -> CoveringCertificate:
    """Realize the bundle as a covering of the base poset.

    Requires every transition to act bijectively on fibres.  The
    certificate records component and sheet counts, the even-covering
    check over every cell, and the monodromy permutation of the basepoint
    fibre around each fundamental cycle of the incidence graph.
    """
    for (f, c), mid in sorted(x.transition.items()):
        if not fincat.is_bijective_table(x.ff.on_morphisms[mid], x.fibre_set(f)):
            raise PreconditionError(f"transition ({f}, {c}) -> {mid} is not a bijection")
    total = strabundle.realize_total(x)

    even = True
    for f, c in x.base.incidences:
        table = x.transition_table(f, c)
        for v in x.fibre_set(f):
            if sum(1 for w in table.values() if w == v) != 1:
                even = False

    base_nodes = x.base.sorted_cells()
    base_comps = cellbase.connected_components(base_nodes, list(x.base.incidences))
    sheets = {}
    for comp in base_comps:
        sizes = {len(x.fibre_set(c)) for c in comp}
        if len(sizes) != 1:
            raise StructureError(f"sheet count is not constant on component of {min(comp)}")
        sheets[min(comp)] = sizes.pop()

    total_comps = cellbase.connected_components(list(total.elements), list(total.relations))

    basepoint = base_nodes[0]
    monodromy = []
    if len(base_comps) == 1:
        tree = cellbase.poset_spanning_tree(x.base)
        tree_set = set(tree)
        parent: dict[str, tuple[str, tuple[str, str]] | None] = {basepoint: None}
        adjacency: dict[str, list[tuple[str, tuple[str, str]]]] = {c: [] for c in base_nodes}
        for f, c in tree:
            adjacency[f].append((c, (f, c)))
            adjacency[c].append((f, (f, c)))
        queue = [basepoint]
        while queue:
            cur = queue.pop(0)
            for nxt, edge in sorted(adjacency[cur]):
                if nxt not in parent:
                    parent[nxt] = (cur, edge)
                    queue.append(nxt)

        for f, c in x.base.incidences:
            if (f, c) in tree_set:
                continue
            out = _root_to(x, parent, c)
            back = {w: v for v, w in _root_to(x, parent, f).items()}
            perm = compose_tables(back, compose_tables(x.transition_table(f, c), out))
            monodromy.append(MonodromyEntry((f, c), perm, permutation_cycle_type(perm)))
    return CoveringCertificate(
        total, len(total_comps), sheets, even, basepoint, monodromy
    )


def _root_to(x: StratBundle, parent, cell) -> dict[str, str]:
    """Fibre bijection transporting the basepoint fibre out to ``cell``."""
    path = []
    cur = cell
    while parent[cur] is not None:
        prev, edge = parent[cur]
        path.append((cur, edge))
        cur = prev
    table = fincat.identity_table(x.fibre_set(cur))
    for cell_at, (f, c) in reversed(path):
        step = x.transition_table(f, c)
        if cell_at == f:  # moving down applies the transition
            table = compose_tables(step, table)
        else:  # moving up applies the inverse bijection
            inv = {w: v for v, w in step.items()}
            table = compose_tables(inv, table)
    return table


@dataclass
class StratumPiece:
    index: int
    attached: StratBundle  # restriction to the closure of the stratum
    boundary: StratBundle  # its part inside lower strata


@dataclass
class StratifyResult:
    bundle: StratBundle
    decomposition: list[StratumPiece]


def stratify_bundle(x: StratBundle, strat: Stratification) -> StratifyResult:
    """Re-stratify a bundle whose transitions are all invertible.

    The stratification is supplied by the caller: a plain bundle does not
    determine one.  Emits the attachment decomposition, one piece per
    positive stratum.
    """
    for key, mid in sorted(x.transition.items()):
        if not fincat.is_iso_in_image(x.cat, x.ff, mid):
            raise PreconditionError(f"transition {key} -> {mid} is not invertible")
    if set(strat.strata) != set(x.base.cells):
        raise StructureError("stratification does not cover the cells exactly")
    bundle = StratBundle(x.base, strat, x.cat, x.ff, dict(x.fibre_obj), dict(x.transition))
    strabundle.validate_bundle(bundle).raise_if_invalid()
    pieces = []
    for k in range(1, strat.depth + 1):
        stratum_cells = {c for c, i in strat.strata.items() if i == k}
        closure = set()
        for c in stratum_cells:
            closure |= x.base.below[c]
        boundary = {c for c in closure if strat.strata[c] < k}
        pieces.append(
            StratumPiece(
                k,
                strabundle.restrict(bundle, closure),
                strabundle.restrict(bundle, boundary) if boundary else strabundle.restrict(bundle, set()),
            )
        )
    return StratifyResult(bundle, pieces)
