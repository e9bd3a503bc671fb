import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stratabundle import cellbase, corpus, fincat, oracle, strabundle, triviality
from stratabundle.validation import PreconditionError


class TestTrivializeOver:
    def test_product_bundle_gets_identity_charts(self):
        x = corpus.product_bundle_c3()
        res = triviality.trivialize_over(x, set(x.base.cells))
        assert res.ok
        ident = x.cat.identities["set2"]
        assert all(
            x.ff.on_morphisms[m] == x.ff.on_morphisms[ident]
            for m in res.trivialization.charts.values()
        )
        assert triviality.validate_trivialization(x, res.trivialization).ok

    def test_double_cover_is_obstructed_globally(self):
        x = corpus.double_cover_c3()
        res = triviality.trivialize_over(x, set(x.base.cells))
        assert not res.ok
        obs = res.obstruction
        # the loop closes with the swap
        assert x.ff.on_morphisms[obs.holonomy] == {"set2.0": "set2.1", "set2.1": "set2.0"}
        assert len(obs.loop) >= 3

    def test_every_star_of_the_double_cover_trivializes(self):
        x = corpus.double_cover_c3()
        for c in x.base.cells:
            res = triviality.trivialize_over(x, cellbase.star_cells(x.base, c))
            assert res.ok
            assert triviality.validate_trivialization(x, res.trivialization).ok

    def test_non_invertible_transition_is_refused(self):
        x = corpus.disk_collapse_two_strata()
        with pytest.raises(PreconditionError):
            triviality.trivialize_over(x, set(x.base.cells))

    def test_chart_iso_onto_product_bundle(self):
        x = corpus.double_cover_c3()
        star = cellbase.star_cells(x.base, "v1")
        res = triviality.trivialize_over(x, star)
        iso = triviality.trivialization_iso(x, res.trivialization)
        assert strabundle.validate_fbundle_map(iso).ok
        assert all(
            fincat.is_bijective_table(
                iso.target.ff.on_morphisms[m], iso.target.fibre_set("v1")
            )
            for m in iso.fibre_morphisms.values()
        )


class TestCertificate:
    def test_double_cover_has_six_star_trivializations(self):
        cert = triviality.local_triviality_certificate(corpus.double_cover_c3())
        assert len(cert.stars) == 6

    def test_invertible_cross_stratum_bundle_is_certified(self):
        x = corpus.disk_trivial_two_strata()
        cert = triviality.local_triviality_certificate(x)
        assert set(cert.stars) == set(x.base.cells)
        for c, t in cert.stars.items():
            assert triviality.validate_trivialization(x, t).ok

    def test_non_groupoid_category_is_refused_with_witness(self):
        x = corpus.orbit_free_bundle_c3()
        with pytest.raises(PreconditionError) as err:
            triviality.local_triviality_certificate(x)
        assert "q" in str(err.value)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=50_000))
    def test_groupoid_instances_always_certify(self, seed):
        spec = oracle.InstanceSpec(seed=seed, groupoid_only=True)
        rng = oracle.SplitMix64(seed)
        cat, ff = oracle.gen_category(spec, rng)
        gen = oracle.gen_bundle(spec, cat, ff, rng)
        cert = triviality.local_triviality_certificate(gen.bundle)
        for c, t in cert.stars.items():
            assert triviality.validate_trivialization(gen.bundle, t).ok


class TestCoveringSpace:
    def test_double_cover_connected_with_transposition(self):
        cov = triviality.covering_space(corpus.double_cover_c3())
        assert cov.components == 1
        assert cov.even_cover
        assert cov.sheets == {"v0": 2}
        assert [m.cycle_type for m in cov.monodromy] == [(2,)]

    def test_trivial_two_sheets_has_two_components(self):
        cov = triviality.covering_space(corpus.trivial_two_sheets_c3())
        assert cov.components == 2

    def test_triple_cover_is_connected(self):
        cov = triviality.covering_space(corpus.triple_cover_c3())
        assert cov.components == 1
        assert [m.cycle_type for m in cov.monodromy] == [(3,)]

    def test_collapse_is_refused(self):
        with pytest.raises(PreconditionError):
            triviality.covering_space(corpus.disk_collapse_two_strata())

    def test_sheet_count_equals_fibre_cardinality(self):
        x = corpus.triple_cover_c3()
        cov = triviality.covering_space(x)
        assert cov.sheets["v0"] == len(x.fibre_set("v0")) == 3


class TestStratify:
    def test_product_over_stratified_disk(self):
        x = corpus.disk_trivial_two_strata()
        flat = strabundle.StratBundle(
            x.base,
            cellbase.single_stratum(x.base),
            x.cat,
            x.ff,
            dict(x.fibre_obj),
            dict(x.transition),
        )
        res = triviality.stratify_bundle(flat, x.strat)
        assert strabundle.bundle_eq(res.bundle, x)
        assert len(res.decomposition) == 1
        piece = res.decomposition[0]
        assert strabundle.validate_bundle(piece.attached).ok
        assert set(piece.boundary.base.cells) <= set(piece.attached.base.cells)

    def test_double_cover_over_stratified_circle(self):
        x = corpus.double_cover_c3()
        strat = cellbase.Stratification(
            {c: (0 if x.base.cells[c].dim == 0 else 1) for c in x.base.cells}
        )
        res = triviality.stratify_bundle(x, strat)
        assert strabundle.validate_bundle(res.bundle).ok
        cov = triviality.covering_space(res.bundle)
        assert cov.components == 1

    def test_collapse_morphism_is_refused(self):
        x = corpus.disk_collapse_two_strata()
        with pytest.raises(PreconditionError):
            triviality.stratify_bundle(x, x.strat)


def test_cycle_type_helper():
    assert triviality.permutation_cycle_type({"a": "b", "b": "a", "c": "c"}) == (2, 1)
    assert triviality.permutation_cycle_type({}) == ()
