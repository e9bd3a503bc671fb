"""Seeded instance generators and theorem verification suites.

Instances are generated so that validity holds by construction:
categories are built from function tables closed under composition (the
axioms are inherited from function composition), and bundles are built by
iterated attachment of twisted product pieces whose boundary data is
transported from a single morphism, which forces naturality.  Verifiers
still validate everything and classify defects as ``invalid-input``
(generator bug) separately from ``theorem-violation`` (which must never
occur).

The pseudorandom source is splitmix64 with the standard constants;
integers below n are drawn as ``next() % n``.  Reports record the
algorithm name so identical instances can be rebuilt from the seed by
any implementation.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import cellbase, fincat, funcspace, strabundle, triviality
from .cellbase import BaseComplex, SimplicialMap, Stratification
from .fincat import FibreFunctor, FiniteCategory
from .strabundle import FBundleMap, StratBundle
from .validation import StructureError

RNG_NAME = "splitmix64"
_MORPHISM_CAP = 28


class SplitMix64:
    """splitmix64 with the reference constants; 64-bit wrapping arithmetic."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise StructureError("below() needs a positive bound")
        return self.next_u64() % n

    def choice(self, seq):
        seq = list(seq)
        return seq[self.below(len(seq))]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices out of range(n), order-dependent on the stream."""
        pool = list(range(n))
        out = []
        for _ in range(k):
            out.append(pool.pop(self.below(len(pool))))
        return out


@dataclass(frozen=True)
class InstanceSpec:
    seed: int
    max_cells: int = 30
    max_objects: int = 3
    max_fibre_size: int = 4
    groupoid_only: bool = False
    strata_depth: int = 3

    def __post_init__(self):
        if self.seed < 0:
            raise StructureError("seed must be non-negative")
        for name in ("max_cells", "max_objects", "max_fibre_size", "strata_depth"):
            if getattr(self, name) < 1:
                raise StructureError(f"{name} must be at least 1")

    def with_seed(self, seed: int) -> "InstanceSpec":
        return InstanceSpec(
            seed,
            self.max_cells,
            self.max_objects,
            self.max_fibre_size,
            self.groupoid_only,
            self.strata_depth,
        )


def _random_table(rng: SplitMix64, src_elems, tgt_elems, bijective: bool) -> tuple:
    if bijective:
        order = rng.sample_indices(len(tgt_elems), len(tgt_elems))
        return tuple(tgt_elems[i] for i in order)
    return tuple(rng.choice(tgt_elems) for _ in src_elems)


def gen_category(spec: InstanceSpec, rng: SplitMix64 | None = None) -> tuple[FiniteCategory, FibreFunctor]:
    """Random category of concrete functions between random finite sets.

    Morphisms are (deduplicated) function tables, so associativity and
    identity laws hold by construction; with ``groupoid_only`` the
    generators are bijections added together with their inverses, making
    the closure a groupoid.  The fibre functor is the tautological one and
    is faithful by construction.
    """
    rng = rng or SplitMix64(spec.seed)
    n_obj = 1 + rng.below(spec.max_objects)
    objects = [f"V{i}" for i in range(n_obj)]
    sizes = {v: 1 + rng.below(spec.max_fibre_size) for v in objects}
    elems = {v: tuple(f"{v}.{i}" for i in range(sizes[v])) for v in objects}

    for gen_budget in range(2 * n_obj, -1, -1):
        tables: dict[tuple[str, str, tuple], None] = {}
        for v in objects:
            tables[(v, v, tuple(elems[v]))] = None
        for k in range(gen_budget):
            src = rng.choice(objects)
            if spec.groupoid_only or k == 0:
                # always seed at least one invertible generator
                candidates = [w for w in objects if sizes[w] == sizes[src]]
                tgt = rng.choice(candidates)
                table = _random_table(rng, elems[src], elems[tgt], True)
                tables[(src, tgt, table)] = None
                inverse = tuple(
                    elems[src][list(table).index(e)] for e in elems[tgt]
                )
                tables[(tgt, src, inverse)] = None
            else:
                tgt = rng.choice(objects)
                tables[(src, tgt, _random_table(rng, elems[src], elems[tgt], False))] = None
        # close under composition
        grown = True
        overflow = False
        while grown and not overflow:
            grown = False
            existing = list(tables)
            for (s1, t1, tab1) in existing:
                for (s2, t2, tab2) in existing:
                    if t1 != s2:
                        continue
                    lookup = dict(zip(elems[s2], tab2))
                    composite = tuple(lookup[v] for v in tab1)
                    key = (s1, t2, composite)
                    if key not in tables:
                        tables[key] = None
                        grown = True
                        if len(tables) > _MORPHISM_CAP:
                            overflow = True
                            break
                if overflow:
                    break
        if not overflow:
            break

    ordered = sorted(tables)
    ids = {}
    rank: dict[tuple[str, str], int] = {}
    for key in ordered:
        s, t, _ = key
        k = rank.get((s, t), 0)
        rank[(s, t)] = k + 1
        ids[key] = f"{s}>{t}#{k}"
    morphisms = [(ids[key], key[0], key[1]) for key in ordered]
    by_table = {key: ids[key] for key in ordered}
    compose = {}
    for (s1, t1, tab1) in ordered:
        for (s2, t2, tab2) in ordered:
            if t1 != s2:
                continue
            lookup = dict(zip(elems[s2], tab2))
            composite = tuple(lookup[v] for v in tab1)
            compose[(ids[(s2, t2, tab2)], ids[(s1, t1, tab1)])] = by_table[(s1, t2, composite)]
    identities = {v: ids[(v, v, tuple(elems[v]))] for v in objects}
    cat = fincat.category(objects, morphisms, compose, identities)
    ff = fincat.fibre_functor(
        {v: elems[v] for v in objects},
        {ids[key]: dict(zip(elems[key[0]], key[2])) for key in ordered},
    )
    return cat, ff


@dataclass
class BaseRound:
    m: BaseComplex
    a_cells: frozenset[str]
    h: SimplicialMap


@dataclass
class GeneratedBase:
    complex: BaseComplex
    strat: Stratification
    rounds: list[BaseRound]


def gen_base(spec: InstanceSpec, rng: SplitMix64) -> GeneratedBase:
    """Random connected graph, then one simplex attachment per extra stratum."""
    n_v = 2 + rng.below(4)
    entries = [(f"v{i}", 0, []) for i in range(n_v)]
    edges = set()
    for i in range(1, n_v):
        j = rng.below(i)
        edges.add(tuple(sorted((f"v{i}", f"v{j}"))))
    for _ in range(rng.below(n_v + 1)):
        i, j = rng.below(n_v), rng.below(n_v)
        if i != j:
            edges.add(tuple(sorted((f"v{i}", f"v{j}"))))
    for a, b in sorted(edges):
        entries.append((cellbase.simplex_name([a, b]), 1, [a, b]))
    complex_ = cellbase.complex_from_cells(entries)
    strat = cellbase.single_stratum(complex_)

    rounds: list[BaseRound] = []
    # bias towards the full depth while keeping shallow instances in the mix
    n_rounds = max(rng.below(spec.strata_depth), rng.below(spec.strata_depth))
    for round_idx in range(n_rounds):
        dim = 1 + rng.below(2)
        m = cellbase.simplex_complex([f"w{round_idx}x{i}" for i in range(dim + 1)])
        if len(complex_.cells) + len(m.cells) > spec.max_cells:
            break
        mode = rng.choice(["facet", "vertex", "empty"])
        if mode == "empty":
            a_cells = frozenset()
            h = SimplicialMap(cellbase.subcomplex(m, a_cells), complex_, {}, {})
        else:
            if mode == "vertex":
                a_top = rng.choice(m.vertices())
            else:
                facets = [c for c in m.cells if m.cells[c].dim == dim - 1]
                a_top = rng.choice(sorted(facets))
            a_cells = frozenset(m.below[a_top])
            a_verts = sorted(v for v in a_cells if m.cells[v].dim == 0)
            candidates = [
                c for c in complex_.sorted_cells()
                if len(complex_.vertices_of[c]) >= len(a_verts)
            ]
            target = rng.choice(candidates)
            tverts = list(complex_.vertices_of[target])
            picked = rng.sample_indices(len(tverts), len(a_verts))
            vm = {a_verts[i]: tverts[picked[i]] for i in range(len(a_verts))}
            h = SimplicialMap.from_vertex_map(
                cellbase.subcomplex(m, a_cells), complex_, vm
            )
        attached = cellbase.attach_base(complex_, strat, m, a_cells, h)
        rounds.append(BaseRound(m, a_cells, h))
        complex_, strat = attached.complex, attached.strat
    return GeneratedBase(complex_, strat, rounds)


def _iso_structure(cat: FiniteCategory, ff: FibreFunctor):
    """Pairs of mutually inverse morphisms per ordered object pair, plus classes."""
    iso_maps: dict[tuple[str, str], list[tuple[str, str]]] = {}
    for a in cat.objects:
        for b in cat.objects:
            pairs = []
            for m in cat.hom(a, b):
                inv = fincat.image_inverse(cat, ff, m)
                if inv is not None:
                    pairs.append((m, inv))
            iso_maps[(a, b)] = pairs
    edges = [
        (a, b)
        for (a, b), pairs in iso_maps.items()
        if pairs and a != b
    ]
    comps = cellbase.connected_components(list(cat.objects), edges)
    classes = [sorted(c) for c in comps]
    return iso_maps, classes


@dataclass
class GeneratedBundle:
    bundle: StratBundle
    base: GeneratedBase
    last_attachment: strabundle.AttachBundleResult | None


def gen_bundle(
    spec: InstanceSpec,
    cat: FiniteCategory,
    ff: FibreFunctor,
    rng: SplitMix64 | None = None,
    base: GeneratedBase | None = None,
) -> GeneratedBundle:
    """Random bundle over a generated stratified base.

    The bottom stratum is a graph, so its transitions may be arbitrary
    within-class isomorphisms (there are no coherence squares to break);
    each later stratum is a twisted product over one simplex whose
    transitions factor through a common object, and the attaching
    morphisms are transported from one choice at the top boundary cell.
    """
    rng = rng or SplitMix64(spec.seed)
    if base is None:
        base = gen_base(spec, rng)
    iso_maps, classes = _iso_structure(cat, ff)

    graph_cells = [c for c, k in base.strat.strata.items() if k == 0]
    graph = cellbase.subcomplex(base.complex, graph_cells)
    cls = rng.choice(classes)
    fibre_obj = {c: rng.choice(cls) for c in graph.sorted_cells()}
    transition = {}
    for f, c in graph.incidences:
        transition[(f, c)] = rng.choice(iso_maps[(fibre_obj[c], fibre_obj[f])])[0]
    bundle = StratBundle(
        graph, cellbase.single_stratum(graph), cat, ff, fibre_obj, transition
    )
    last = None
    for round_ in base.rounds:
        m, a_cells, h = round_.m, round_.a_cells, round_.h
        if a_cells:
            a_top = max(a_cells, key=lambda c: (m.cells[c].dim, c))
            anchor = bundle.fibre_obj[h.cell_map[a_top]]
            cls_m = next(c for c in classes if anchor in c)
            pivot = rng.choice(cls_m)
        else:
            cls_m = rng.choice(classes)
            pivot = rng.choice(cls_m)
        m_fibres = {c: rng.choice(cls_m) for c in m.sorted_cells()}
        sigma = {c: rng.choice(iso_maps[(m_fibres[c], pivot)]) for c in m.cells}
        m_transition = {}
        for f, c in m.incidences:
            m_transition[(f, c)] = cat.compose(sigma[f][1], sigma[c][0])
        m_bundle = StratBundle(
            m, cellbase.single_stratum(m), cat, ff, m_fibres, m_transition
        )
        fibre_morphisms = {}
        if a_cells:
            psi_top = rng.choice(cat.hom(pivot, bundle.fibre_obj[h.cell_map[a_top]]))
            for a in sorted(a_cells):
                path = strabundle.transition_path(bundle, h.cell_map[a_top], h.cell_map[a])
                psi = cat.compose(path, psi_top)
                fibre_morphisms[a] = cat.compose(psi, sigma[a][0])
        hmap = FBundleMap(
            strabundle.restrict(m_bundle, a_cells), bundle, h, fibre_morphisms
        )
        last = strabundle.attach_bundle(bundle, m_bundle, a_cells, hmap)
        bundle = last.bundle
    return GeneratedBundle(bundle, base, last)


@dataclass
class Report:
    suite: str
    rng: str
    base_seed: int
    seeds: int
    params: dict
    instances: int = 0
    passes: int = 0
    failures: list[dict] = field(default_factory=list)
    invalid_inputs: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    elapsed: float | None = None  # excluded from the canonical document

    def record(self, seed: int, outcome: str, stage: str = "", detail: str = "") -> None:
        self.instances += 1
        if outcome == "pass":
            self.passes += 1
        elif outcome == "invalid-input":
            self.invalid_inputs.append({"seed": seed, "stage": stage, "detail": detail})
        else:
            self.failures.append({"seed": seed, "stage": stage, "detail": detail})

    def to_doc(self) -> dict:
        return {
            "suite": self.suite,
            "rng": self.rng,
            "base_seed": self.base_seed,
            "seeds": self.seeds,
            "params": dict(self.params),
            "instances": self.instances,
            "passes": self.passes,
            "failures": list(self.failures),
            "invalid_inputs": list(self.invalid_inputs),
            "notes": list(self.notes),
            "wall_time": None,
        }


def merge_reports(a: Report, b: Report) -> Report:
    """Associative, order-independent merge of two reports of one suite."""
    if a.suite != b.suite or a.params != b.params:
        raise StructureError("reports belong to different suites")
    out = Report(
        a.suite,
        a.rng,
        min(a.base_seed, b.base_seed),
        a.seeds + b.seeds,
        dict(a.params),
    )
    out.instances = a.instances + b.instances
    out.passes = a.passes + b.passes
    out.failures = sorted(a.failures + b.failures, key=lambda d: (d["seed"], d["stage"]))
    out.invalid_inputs = sorted(
        a.invalid_inputs + b.invalid_inputs, key=lambda d: (d["seed"], d["stage"])
    )
    out.notes = sorted(set(a.notes) | set(b.notes))
    return out


def _spec_params(spec: InstanceSpec) -> dict:
    return {
        "max_cells": spec.max_cells,
        "max_objects": spec.max_objects,
        "max_fibre_size": spec.max_fibre_size,
        "groupoid_only": spec.groupoid_only,
        "strata_depth": spec.strata_depth,
    }


def _gen_instance(spec: InstanceSpec):
    rng = SplitMix64(spec.seed)
    cat, ff = gen_category(spec, rng)
    gen = gen_bundle(spec, cat, ff, rng)
    return rng, cat, ff, gen


def _pullback_setups(rng: SplitMix64, gen: GeneratedBundle):
    """One stratum-preserving map with enough lift data to re-attach."""
    z = gen.bundle
    kind = rng.choice(["identity", "copies", "fold"])
    if kind == "fold":
        fold = _find_fold(rng, gen)
        if fold is None:
            kind = "identity"
        else:
            return "fold", fold
    if kind == "identity":
        return "identity", cellbase.identity_map(z.base)
    return "copies", None


def _seam_vertices(gen: GeneratedBundle) -> set[str]:
    z = gen.bundle
    seam = set()
    for (f, c), _ in z.transition.items():
        if z.strat.strata[f] != z.strat.strata[c]:
            seam |= set(z.base.vertices_of[f])
    return seam


def _find_fold(rng: SplitMix64, gen: GeneratedBundle) -> SimplicialMap | None:
    """A vertex fold of the base onto itself away from all attachment seams.

    The folded vertex must avoid every seam and the whole newest stratum,
    so that the last attachment round is fixed pointwise and the fold
    restricts to the lower part.
    """
    z = gen.bundle
    base = z.base
    if not base.is_simplicial:
        return None
    seam = _seam_vertices(gen)
    frozen = set(seam)
    if gen.last_attachment is not None:
        for c in gen.last_attachment.new_cells:
            frozen |= set(base.vertices_of[c])
    verts = base.vertices()
    candidates = []
    for u in verts:
        if u in frozen:
            continue
        if any(z.strat.strata[c] != z.strat.strata[u] for c in base.above[u]):
            continue
        for v in verts:
            if v == u:
                continue
            candidates.append((u, v))
    order = rng.sample_indices(len(candidates), len(candidates)) if candidates else []
    for idx in order:
        u, v = candidates[idx]
        vm = {w: (v if w == u else w) for w in verts}
        try:
            fold = SimplicialMap.from_vertex_map(base, base, vm)
        except StructureError:
            continue
        ok, _ = cellbase.stratum_preserving(fold, z.strat, z.strat)
        if ok:
            return fold
    return None


def _check_pullback_instance(spec: InstanceSpec, report: Report) -> None:
    seed = spec.seed
    try:
        rng, cat, ff, gen = _gen_instance(spec)
    except Exception as exc:  # generator defect, not a theorem statement
        report.record(seed, "invalid-input", "generate", repr(exc))
        return
    z = gen.bundle
    if not strabundle.validate_bundle(z).ok:
        report.record(seed, "invalid-input", "generate", "generated bundle invalid")
        return
    kind, payload = _pullback_setups(rng, gen)
    try:
        if kind in ("identity", "fold"):
            fbar = payload
            pulled = strabundle.pullback(z, fbar, z.strat)
        else:
            copies = [
                strabundle.relabel_bundle(z, lambda c, i=i: f"{c}~{i}") for i in range(2)
            ]
            doubled = strabundle.disjoint_union_bundle(copies[0], copies[1])
            cm = {f"{c}~{i}": c for c in z.base.cells for i in range(2)}
            vmm = {f"{v}~{i}": v for v in z.base.vertices() for i in range(2)}
            fbar = SimplicialMap(doubled.base, z.base, vmm, cm)
            pulled = strabundle.pullback(z, fbar, doubled.strat)
        lhs = pulled.bundle
    except Exception as exc:
        report.record(seed, "theorem-violation", "pullback", repr(exc))
        return
    rep = strabundle.validate_bundle(lhs)
    if not rep.ok:
        report.record(seed, "theorem-violation", "pullback-validate", str(rep.violations[0]))
        return
    vmap = strabundle.validate_fbundle_map(pulled.covering)
    if not vmap.ok:
        report.record(seed, "theorem-violation", "pullback-covering", str(vmap.violations[0]))
        return
    if gen.last_attachment is None:
        report.record(seed, "pass", "pullback", "no attachment round; commutation skipped")
        return
    try:
        square = _commuted_square(z, gen, kind, fbar)
    except Exception as exc:
        report.record(seed, "theorem-violation", "commutation-build", repr(exc))
        return
    if square is not None:
        rhs, psquare = square
        if not strabundle.bundle_eq(lhs, rhs):
            report.record(seed, "theorem-violation", "commutation", "pullback of attachment differs")
            return
        check = strabundle.pushout_universality_check(psquare)
        if not check.ok:
            report.record(seed, "theorem-violation", "universality", check.witness or "")
            return
    report.record(seed, "pass")


def _commuted_square(z: StratBundle, gen: GeneratedBundle, kind: str, fbar: SimplicialMap):
    """Re-attach the pulled-back pieces; the result must equal the pulled-back whole."""
    last = gen.last_attachment
    y, m, h = last.square.y, last.square.m, last.square.h
    a_cells = frozenset(h.source.base.cells)
    if kind == "identity":
        res = strabundle.attach_bundle(y, m, a_cells, h)
        return res.bundle, res.square
    if kind == "fold":
        # the fold fixes every seam cell, so the attaching data is unchanged
        y_cells = set(y.base.cells)
        fold_y = SimplicialMap(
            y.base,
            y.base,
            {v: fbar.vertex_map[v] for v in y.base.vertices()},
            {c: fbar.cell_map[c] for c in y_cells},
        )
        y_w = strabundle.pullback(y, fold_y, y.strat).bundle
        h_w = FBundleMap(h.source, y_w, h.base_map, dict(h.fibre_morphisms))
        res = strabundle.attach_bundle(y_w, m, a_cells, h_w)
        return res.bundle, res.square
    # two disjoint copies folding back onto the original
    def lab(i):
        return lambda c: f"{c}~{i}"

    y_copies = [strabundle.relabel_bundle(y, lab(i)) for i in range(2)]
    y_w = strabundle.disjoint_union_bundle(y_copies[0], y_copies[1])
    m_copies = [strabundle.relabel_bundle(m, lab(i)) for i in range(2)]
    m_w = strabundle.disjoint_union_bundle(m_copies[0], m_copies[1])
    a_w = frozenset(f"{c}~{i}" for c in a_cells for i in range(2))
    hv = {}
    hc = {}
    hf = {}
    for i in range(2):
        for c in a_cells:
            hc[f"{c}~{i}"] = f"{h.base_map.cell_map[c]}~{i}"
            hf[f"{c}~{i}"] = h.fibre_morphisms[c]
        for v in h.source.base.vertices():
            hv[f"{v}~{i}"] = f"{h.base_map.vertex_map[v]}~{i}"
    h_w = FBundleMap(
        strabundle.restrict(m_w, a_w),
        y_w,
        SimplicialMap(strabundle.restrict(m_w, a_w).base, y_w.base, hv, hc),
        hf,
    )
    res = strabundle.attach_bundle(y_w, m_w, a_w, h_w)
    return res.bundle, res.square


def verify_pullback_theorem(spec: InstanceSpec, seeds: int = 1) -> Report:
    report = Report("pullback", RNG_NAME, spec.seed, seeds, _spec_params(spec))
    start = time.perf_counter()
    for s in range(spec.seed, spec.seed + seeds):
        _check_pullback_instance(spec.with_seed(s), report)
    report.elapsed = time.perf_counter() - start
    return report


def _check_bundle_instance(spec: InstanceSpec, report: Report) -> None:
    seed = spec.seed
    try:
        rng, cat, ff, gen = _gen_instance(spec)
    except Exception as exc:
        report.record(seed, "invalid-input", "generate", repr(exc))
        return
    z = gen.bundle
    if not strabundle.validate_bundle(z).ok:
        report.record(seed, "invalid-input", "generate", "generated bundle invalid")
        return
    try:
        cert = triviality.local_triviality_certificate(z)
    except Exception as exc:
        report.record(seed, "theorem-violation", "certificate", repr(exc))
        return
    for c, t in cert.stars.items():
        sub = triviality.validate_trivialization(z, t)
        if not sub.ok:
            report.record(seed, "theorem-violation", "certificate-check", f"star {c}")
            return
    flat = StratBundle(
        z.base,
        cellbase.single_stratum(z.base),
        z.cat,
        z.ff,
        dict(z.fibre_obj),
        dict(z.transition),
    )
    try:
        again = triviality.stratify_bundle(flat, z.strat)
    except Exception as exc:
        report.record(seed, "theorem-violation", "stratify", repr(exc))
        return
    if not strabundle.bundle_eq(again.bundle, z):
        report.record(seed, "theorem-violation", "stratify-roundtrip", "bundles differ")
        return
    for piece in again.decomposition:
        if piece.attached.base.cells and not strabundle.validate_bundle(piece.attached).ok:
            report.record(seed, "theorem-violation", "decomposition", f"stratum {piece.index}")
            return
    report.record(seed, "pass")


def verify_bundle_theorem(spec: InstanceSpec, seeds: int = 1) -> Report:
    if not spec.groupoid_only:
        spec = InstanceSpec(
            spec.seed,
            spec.max_cells,
            spec.max_objects,
            spec.max_fibre_size,
            True,
            spec.strata_depth,
        )
    report = Report("bundle", RNG_NAME, spec.seed, seeds, _spec_params(spec))
    start = time.perf_counter()
    for s in range(spec.seed, spec.seed + seeds):
        _check_bundle_instance(spec.with_seed(s), report)
    report.elapsed = time.perf_counter() - start
    return report


def classify_principal_instance(x: StratBundle) -> tuple[str, str]:
    """Bucket one bundle for the reconstruction suite.

    Distinguishes defective inputs from genuine reconstruction failures so
    mutated negative controls are reported without polluting the theorem
    count.
    """
    rep = strabundle.validate_bundle(x)
    if not rep.ok:
        return "invalid-input", str(rep.violations[0])
    res = funcspace.reconstruct_check(x)
    if not res.ok:
        return "theorem-violation", str(res.coend.report.violations[:1])
    return "pass", ""


def _point_bundle(cat: FiniteCategory, ff: FibreFunctor, w: str) -> StratBundle:
    base = cellbase.complex_from_cells([("pt", 0, [])])
    return StratBundle(
        base, cellbase.single_stratum(base), cat, ff, {"pt": w}, {}
    )


def _check_principal_instance(spec: InstanceSpec, report: Report, extra=None) -> None:
    seed = spec.seed
    try:
        rng, cat, ff, gen = _gen_instance(spec)
    except Exception as exc:
        report.record(seed, "invalid-input", "generate", repr(exc))
        return
    outcome, detail = classify_principal_instance(gen.bundle)
    if outcome != "pass":
        report.record(seed, outcome, "reconstruct", detail)
        return
    for w in cat.objects:
        point = _point_bundle(cat, ff, w)
        res = funcspace.coend(funcspace.principal_diagram(point), ff)
        classes = res.classes["pt"]
        if len(classes) != len(ff.on_objects[w]) or not res.report.ok:
            report.record(
                seed, "theorem-violation", "point-coend", f"object {w}"
            )
            return
    for x in extra or []:
        outcome, detail = classify_principal_instance(x)
        if outcome == "invalid-input":
            report.record(seed, "invalid-input", "negative-control", detail)
        elif outcome == "theorem-violation":
            report.record(seed, "theorem-violation", "negative-control", detail)
        else:
            report.record(seed, "pass", "negative-control")
    report.record(seed, "pass")


def verify_principal_theorem(spec: InstanceSpec, seeds: int = 1, extra=None) -> Report:
    report = Report("principal", RNG_NAME, spec.seed, seeds, _spec_params(spec))
    start = time.perf_counter()
    for s in range(spec.seed, spec.seed + seeds):
        _check_principal_instance(spec.with_seed(s), report, extra if s == spec.seed else None)
    report.elapsed = time.perf_counter() - start
    return report


def verify_fiberwise_product(spec: InstanceSpec, seeds: int = 1) -> Report:
    """Products of two independover one base: validity plus total-space pairing."""
    report = Report("fiberwise", RNG_NAME, spec.seed, seeds, _spec_params(spec))
    start = time.perf_counter()
    for s in range(spec.seed, spec.seed + seeds):
        sub = spec.with_seed(s)
        try:
            rng = SplitMix64(sub.seed)
            cat_a, ff_a = gen_category(sub, rng)
            cat_b, ff_b = gen_category(sub, rng)
            base = gen_base(sub, rng)
            xa = gen_bundle(sub, cat_a, ff_a, rng, base).bundle
            xb = gen_bundle(sub, cat_b, ff_b, rng, base).bundle
        except Exception as exc:
            report.record(s, "invalid-input", "generate", repr(exc))
            continue
        if not (strabundle.validate_bundle(xa).ok and strabundle.validate_bundle(xb).ok):
            report.record(s, "invalid-input", "generate", "factor invalid")
            continue
        prod = strabundle.fiberwise_product(xa, xb)
        if not strabundle.validate_bundle(prod.bundle).ok:
            report.record(s, "theorem-violation", "product-validate", "")
            continue
        ta, tb, tp = (
            strabundle.realize_total(xa),
            strabundle.realize_total(xb),
            strabundle.realize_total(prod.bundle),
        )
        paired = {
            (c, fincat.pair_id(v, w))
            for c, v in ta.elements
            for cw, w in tb.elements
            if cw == c
        }
        if paired != set(tp.elements):
            report.record(s, "theorem-violation", "product-total", "element sets differ")
            continue
        rel = {
            ((f, fincat.pair_id(va, vb)), (c, fincat.pair_id(wa, wb)))
            for ((f, va), (c, wa)) in ta.relations
            for ((f2, vb), (c2, wb)) in tb.relations
            if f2 == f and c2 == c
        }
        if rel != set(tp.relations):
            report.record(s, "theorem-violation", "product-relations", "relation sets differ")
            continue
        report.record(s, "pass")
    report.elapsed = time.perf_counter() - start
    return report


def verify_associated(spec: InstanceSpec, seeds: int = 1) -> Report:
    """Transport along the identity functor must reproduce the bundle."""
    report = Report("associated", RNG_NAME, spec.seed, seeds, _spec_params(spec))
    start = time.perf_counter()
    for s in range(spec.seed, spec.seed + seeds):
        sub = spec.with_seed(s)
        try:
            rng, cat, ff, gen = _gen_instance(sub)
        except Exception as exc:
            report.record(s, "invalid-input", "generate", repr(exc))
            continue
        x = gen.bundle
        if not strabundle.validate_bundle(x).ok:
            report.record(s, "invalid-input", "generate", "generated bundle invalid")
            continue
        try:
            res = funcspace.associated_bundle(x, fincat.identity_cat_functor(cat), ff)
        except Exception as exc:
            report.record(s, "theorem-violation", "identity-transport", repr(exc))
            continue
        if not strabundle.bundle_eq(res.bundle, x):
            report.record(s, "theorem-violation", "identity-transport", "bundle changed")
            continue
        report.record(s, "pass")
    report.elapsed = time.perf_counter() - start
    return report


SUITES = {
    "pullback": verify_pullback_theorem,
    "bundle": verify_bundle_theorem,
    "principal": verify_principal_theorem,
    "fiberwise": verify_fiberwise_product,
    "associated": verify_associated,
}


def run_suite(name: str, spec: InstanceSpec, seeds: int) -> Report:
    if name not in SUITES:
        raise StructureError(f"unknown suite {name}")
    return SUITES[name](spec, seeds)
