from hypothesis import given, settings
from hypothesis import strategies as st

from stratabundle import cellbase, corpus, fincat, funcspace, oracle, strabundle, triviality


class TestFunctionBundle:
    def test_perm_fibres_have_group_size(self):
        x = corpus.product_bundle_c3()
        fb = funcspace.function_bundle(x, "set2")
        assert all(len(fb.bundle.fibre_set(c)) == 2 for c in x.base.cells)
        assert strabundle.validate_bundle(fb.bundle).ok

    def test_orbit_toy_free_and_fixed_points(self):
        x = corpus.orbit_free_bundle_c3()
        free = funcspace.function_bundle(x, "Ge")
        assert all(len(free.bundle.fibre_set(c)) == 2 for c in x.base.cells)
        fixed = funcspace.function_bundle(x, "GG")
        # a free action has no fixed points
        assert all(len(fixed.bundle.fibre_set(c)) == 0 for c in x.base.cells)

    def test_fixed_points_of_fixed_fibre(self):
        cat, ff = corpus.orbit_z2_category()
        base, strat = corpus.c3()
        x = strabundle.product_bundle(base, strat, cat, ff, "GG")
        fixed = funcspace.function_bundle(x, "GG")
        assert all(len(fixed.bundle.fibre_set(c)) == 1 for c in base.cells)

    def test_commutes_with_restrict(self):
        x = corpus.double_cover_c3()
        star = cellbase.star_cells(x.base, "v0")
        a = funcspace.function_bundle(strabundle.restrict(x, star), "set2").bundle
        b = strabundle.restrict(funcspace.function_bundle(x, "set2").bundle, star)
        assert strabundle.bundle_eq(a, b, in_image=False)


class TestPrincipalDiagram:
    def test_single_object_group_recovers_right_action(self):
        x = corpus.bz2_double_cover_c3()
        d = funcspace.principal_diagram(x)
        assert set(d.components) == {"pt"}
        # right action of the involution on itself by pre-composition
        assert d.actions["g"]["v0"] == {"e": "g", "g": "e"}
        assert funcspace.validate_diagram(d).ok

    def test_one_point_bundle_components_count_hom_sets(self):
        cat, ff = corpus.orbit_z2_category()
        base, strat = corpus.c3()
        x = strabundle.product_bundle(base, strat, cat, ff, "Ge")
        d = funcspace.principal_diagram(x)
        assert all(
            len(d.components[v].bundle.fibre_set(c)) == len(cat.hom(v, "Ge"))
            for v in cat.objects
            for c in base.cells
        )

    def test_identity_action_is_identity(self):
        x = corpus.double_cover_c3()
        d = funcspace.principal_diagram(x)
        for v in x.cat.objects:
            ident = x.cat.identities[v]
            for c in x.base.cells:
                elems = d.components[v].bundle.fibre_set(c)
                assert d.actions[ident][c] == fincat.identity_table(elems)

    def test_actions_are_natural_cellwise_maps(self):
        x = corpus.bz2_double_cover_c3()
        d = funcspace.principal_diagram(x)
        for g in x.cat.morphisms:
            fmap = funcspace.action_fibrewise(d, g)
            assert strabundle.validate_fibrewise_map(fmap).ok
            # in a group every action permutes the admissible maps
            assert strabundle.fibrewise_is_bijective(fmap)


def brute_force_coend_classes(cat, ff2, w):
    """Independent oracle: BFS closure of the generating relation."""
    pairs = [
        (v, alpha, y)
        for v in cat.objects
        for alpha in cat.hom(v, w)
        for y in ff2.on_objects[v]
    ]
    neighbours = {p: set() for p in pairs}
    for g in cat.morphisms.values():
        for alpha in cat.hom(g.tgt, w):
            for y in ff2.on_objects[g.src]:
                a = (g.src, cat.compose(alpha, g.id), y)
                b = (g.tgt, alpha, ff2.on_morphisms[g.id][y])
                neighbours[a].add(b)
                neighbours[b].add(a)
    seen = set()
    count = 0
    for p in pairs:
        if p in seen:
            continue
        count += 1
        frontier = [p]
        while frontier:
            q = frontier.pop()
            if q in seen:
                continue
            seen.add(q)
            frontier.extend(neighbours[q])
    return count


class TestCoend:
    def test_point_diagram_of_involution_has_two_classes(self):
        cat, ff = corpus.bz2_category()
        base = cellbase.complex_from_cells([("pt0", 0, [])])
        x = strabundle.StratBundle(
            base, cellbase.single_stratum(base), cat, ff, {"pt0": "pt"}, {}
        )
        res = funcspace.coend(funcspace.principal_diagram(x), ff)
        assert res.report.ok
        assert len(res.classes["pt0"]) == 2
        frozen = {
            (("pt", "e", "pt.0"), ("pt", "g", "pt.1")),
            (("pt", "e", "pt.1"), ("pt", "g", "pt.0")),
        }
        assert set(res.classes["pt0"]) == frozen

    def test_one_point_fibre_functor_gives_one_class_per_cell(self):
        x = corpus.double_cover_c3()
        one = fincat.one_point_functor(x.cat)
        res = funcspace.coend(funcspace.principal_diagram(x), one)
        assert all(len(res.classes[c]) == 1 for c in x.base.cells)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_class_counts_match_brute_force_closure(self, seed):
        spec = oracle.InstanceSpec(seed=seed)
        rng = oracle.SplitMix64(seed)
        cat, ff = oracle.gen_category(spec, rng)
        gen = oracle.gen_bundle(spec, cat, ff, rng)
        d = funcspace.principal_diagram(gen.bundle)
        res = funcspace.coend(d, ff)
        for w in sorted(set(gen.bundle.fibre_obj.values())):
            cell = min(c for c, o in gen.bundle.fibre_obj.items() if o == w)
            assert len(res.classes[cell]) == brute_force_coend_classes(cat, ff, w)


class TestReconstruct:
    def test_product_bundle(self):
        res = funcspace.reconstruct_check(corpus.product_bundle_c3())
        assert res.ok
        for c, table in res.iso.items():
            assert sorted(table.values()) == sorted(res.bundle.fibre_set(c))

    def test_double_cover(self):
        assert funcspace.reconstruct_check(corpus.double_cover_c3()).ok

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=100_000))
    def test_random_bundles(self, seed):
        spec = oracle.InstanceSpec(seed=seed)
        rng = oracle.SplitMix64(seed)
        cat, ff = oracle.gen_category(spec, rng)
        gen = oracle.gen_bundle(spec, cat, ff, rng)
        assert funcspace.reconstruct_check(gen.bundle).ok


class TestAssociated:
    def test_identity_functor_reproduces_the_bundle(self):
        x = corpus.double_cover_c3()
        res = funcspace.associated_bundle(x, fincat.identity_cat_functor(x.cat), x.ff)
        assert strabundle.bundle_eq(res.bundle, x, in_image=False)

    def test_collapse_to_one_point_category(self):
        x = corpus.bz2_double_cover_c3()
        one_cat = fincat.category(["*"], [("one", "*", "*")], {("one", "one"): "one"}, {"*": "one"})
        one_ff = fincat.fibre_functor({"*": ["*.0"]}, {"one": {"*.0": "*.0"}})
        phi = fincat.CatFunctor(x.cat, one_cat, {"pt": "*"}, {"e": "one", "g": "one"})
        res = funcspace.associated_bundle(x, phi, one_ff)
        assert all(len(res.bundle.fibre_set(c)) == 1 for c in x.base.cells)

    def test_trivializing_homomorphism_kills_monodromy(self):
        x = corpus.bz2_double_cover_c3()
        assert [m.cycle_type for m in triviality.covering_space(x).monodromy] == [(2,)]
        phi, gg = corpus.bz2_trivializer()
        res = funcspace.associated_bundle(x, phi, gg)
        cov = triviality.covering_space(res.bundle)
        assert [m.cycle_type for m in cov.monodromy] == [(1, 1)]
        assert cov.components == 2

    def test_functor_composition_through_a_real_homomorphism(self):
        # the symmetric group on two letters maps onto the abstract involution;
        # transporting along that and then crushing it agrees with the crush
        # of the composite
        x = corpus.double_cover_c3()
        bz2, bz2_ff = corpus.bz2_category()
        phi = fincat.CatFunctor(
            x.cat,
            bz2,
            {"set1": "pt", "set2": "pt"},
            {"p1:0": "e", "p2:01": "e", "p2:10": "g"},
        )
        assert fincat.validate_cat_functor(phi).ok
        psi, gg = corpus.bz2_trivializer()
        composite = fincat.CatFunctor(
            x.cat,
            bz2,
            {v: psi.on_objects[phi.on_objects[v]] for v in x.cat.objects},
            {m: psi.on_morphisms[phi.on_morphisms[m]] for m in x.cat.morphisms},
        )
        via_two = funcspace.associated_bundle(
            funcspace.associated_bundle(x, phi, bz2_ff).bundle, psi, gg
        ).bundle
        via_one = funcspace.associated_bundle(x, composite, gg).bundle
        assert strabundle.bundle_eq(via_one, via_two)
        assert triviality.covering_space(via_one).components == 2

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_functor_composition_on_instances(self, seed):
        # transporting twice along crush-to-a-point equals one transport
        spec = oracle.InstanceSpec(seed=seed)
        rng = oracle.SplitMix64(seed)
        cat, ff = oracle.gen_category(spec, rng)
        gen = oracle.gen_bundle(spec, cat, ff, rng)
        x = gen.bundle
        one_cat = fincat.category(["*"], [("one", "*", "*")], {("one", "one"): "one"}, {"*": "one"})
        one_ff = fincat.fibre_functor({"*": ["*.0"]}, {"one": {"*.0": "*.0"}})
        phi = fincat.CatFunctor(
            x.cat, one_cat,
            {v: "*" for v in x.cat.objects},
            {m: "one" for m in x.cat.morphisms},
        )
        once = funcspace.associated_bundle(x, phi, one_ff).bundle
        ident = fincat.identity_cat_functor(one_cat)
        twice = funcspace.associated_bundle(once, ident, one_ff).bundle
        assert strabundle.bundle_eq(once, twice)


class TestNkcCertificate:
    def test_small_category(self):
        cat, ff = corpus.bz2_category()
        cert = funcspace.nkc_certificate(cat, ff)
        assert cert["nkc"] and cert["max_hom"] == 2

    def test_perm_three_max_hom_is_six(self):
        cat, ff = corpus.perm_category(3)
        assert funcspace.nkc_certificate(cat, ff)["max_hom"] == 6

    def test_product_cardinalities_multiply(self):
        ca, fa = corpus.bz2_category()
        cb, fb = corpus.perm_category(2)
        prod = fincat.product_category(ca, fa, cb, fb)
        cert = funcspace.nkc_certificate(prod.category, prod.ff)
        assert cert["max_hom"] == 2 * 2
