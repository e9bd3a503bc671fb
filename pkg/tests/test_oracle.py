import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stratabundle import fincat, jsonio, oracle, strabundle
from stratabundle.validation import StructureError


class TestSplitMix64:
    def test_reference_sequence(self):
        # first outputs of splitmix64 seeded with 1234567, as fixed by the
        # reference constants
        rng = oracle.SplitMix64(1234567)
        assert rng.next_u64() == 6457827717110365317
        assert rng.next_u64() == 3203168211198807973

    def test_below_is_modulo(self):
        a, b = oracle.SplitMix64(42), oracle.SplitMix64(42)
        assert [a.below(10) for _ in range(5)] == [b.next_u64() % 10 for _ in range(5)]


class TestGenCategory:
    def test_single_object_groupoid_on_two_points_is_subgroup_of_s2(self):
        spec = oracle.InstanceSpec(seed=1, max_objects=1, max_fibre_size=2, groupoid_only=True)
        for seed in range(20):
            cat, ff = oracle.gen_category(spec.with_seed(seed))
            obj = cat.objects[0]
            tables = {tuple(sorted(ff.on_morphisms[m].items())) for m in cat.morphisms}
            elems = ff.on_objects[obj]
            allowed = {tuple(sorted(fincat.identity_table(elems).items()))}
            if len(elems) == 2:
                allowed.add(tuple(sorted({elems[0]: elems[1], elems[1]: elems[0]}.items())))
            assert tables <= allowed

    def test_fibre_size_one_gives_singleton_homs(self):
        spec = oracle.InstanceSpec(seed=3, max_fibre_size=1)
        cat, _ = oracle.gen_category(spec)
        assert all(len(cat.hom(a, b)) <= 1 for a in cat.objects for b in cat.objects)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=100_000), st.booleans())
    def test_every_output_validates(self, seed, groupoid_only):
        spec = oracle.InstanceSpec(seed=seed, groupoid_only=groupoid_only)
        cat, ff = oracle.gen_category(spec)
        assert fincat.validate_category(cat).ok
        assert fincat.validate_fibre_functor(cat, ff).ok
        assert fincat.is_faithful(cat, ff)
        if groupoid_only:
            assert fincat.is_groupoid(cat)[0]


class TestGenBundle:
    def test_same_seed_same_serialization(self):
        spec = oracle.InstanceSpec(seed=11)
        docs = []
        for _ in range(2):
            rng = oracle.SplitMix64(spec.seed)
            cat, ff = oracle.gen_category(spec, rng)
            gen = oracle.gen_bundle(spec, cat, ff, rng)
            docs.append(jsonio.canon_dumps(jsonio.bundle_to_doc(gen.bundle)))
        assert docs[0] == docs[1]

    def test_depth_one_gives_single_stratum(self):
        spec = oracle.InstanceSpec(seed=5, strata_depth=1)
        rng = oracle.SplitMix64(5)
        cat, ff = oracle.gen_category(spec, rng)
        gen = oracle.gen_bundle(spec, cat, ff, rng)
        assert gen.bundle.strat.depth == 0

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=100_000))
    def test_generators_never_rely_on_repair(self, seed):
        spec = oracle.InstanceSpec(seed=seed)
        rng = oracle.SplitMix64(seed)
        cat, ff = oracle.gen_category(spec, rng)
        gen = oracle.gen_bundle(spec, cat, ff, rng)
        assert strabundle.validate_bundle(gen.bundle).ok
        assert len(gen.bundle.base.cells) <= spec.max_cells


class TestSuites:
    def test_reports_are_deterministic(self):
        spec = oracle.InstanceSpec(seed=9)
        for name in oracle.SUITES:
            a = oracle.run_suite(name, spec, 6).to_doc()
            b = oracle.run_suite(name, spec, 6).to_doc()
            assert jsonio.canon_dumps(a) == jsonio.canon_dumps(b)

    def test_partition_of_seeds_merges_to_the_whole(self):
        spec = oracle.InstanceSpec(seed=0)
        whole = oracle.verify_pullback_theorem(spec, seeds=10)
        left = oracle.verify_pullback_theorem(spec, seeds=5)
        right = oracle.verify_pullback_theorem(spec.with_seed(5), seeds=5)
        merged = oracle.merge_reports(left, right)
        assert merged.to_doc() == whole.to_doc()

    def test_negative_control_is_classified_as_invalid(self):
        spec = oracle.InstanceSpec(seed=1, groupoid_only=True)
        rng = oracle.SplitMix64(1)
        cat, ff = oracle.gen_category(spec, rng)
        gen = oracle.gen_bundle(spec, cat, ff, rng)
        x = gen.bundle
        broken = None
        for (f, c), m in sorted(x.transition.items()):
            others = [
                o
                for o in cat.hom(x.fibre_obj[c], x.fibre_obj[f])
                if ff.on_morphisms[o] != ff.on_morphisms[m]
            ]
            if others and x.base.cells[c].dim >= 2:
                t = dict(x.transition)
                t[(f, c)] = others[0]
                cand = strabundle.StratBundle(x.base, x.strat, cat, ff, dict(x.fibre_obj), t)
                if not strabundle.validate_bundle(cand).ok:
                    broken = cand
                    break
        assert broken is not None
        outcome, _ = oracle.classify_principal_instance(broken)
        assert outcome == "invalid-input"
        rep = oracle.verify_principal_theorem(oracle.InstanceSpec(seed=2), seeds=1, extra=[broken])
        assert len(rep.invalid_inputs) == 1
        assert rep.failures == []

    def test_unknown_suite_is_rejected(self):
        with pytest.raises(StructureError):
            oracle.run_suite("nope", oracle.InstanceSpec(seed=1), 1)


def test_instance_spec_bounds():
    with pytest.raises(StructureError):
        oracle.InstanceSpec(seed=1, max_cells=0)
    with pytest.raises(StructureError):
        oracle.InstanceSpec(seed=-1)
