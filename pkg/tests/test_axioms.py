import random

import pytest

from tracekit.axioms import AXIOM_IDS, check_all_axioms, check_axiom
from tracekit.errors import SamplingError
from tracekit.finfun import PfnInstance
from tracekit.objects import UNIT


class TestHarness:
    def test_yank_on_pfn(self):
        rep = check_axiom(PfnInstance(), "yank", 100, 42)
        assert rep.passed and rep.samples == 100

    def test_vanish_unit_single_sample(self):
        rep = check_axiom(PfnInstance(), "vanish-I", 1, 0)
        assert rep.passed and rep.samples == 1

    def test_zero_samples_vacuous(self, instance):
        reports = check_all_axioms(instance, 0, 1)
        assert len(reports) == len(AXIOM_IDS)
        assert all(r.passed and r.samples == 0 for r in reports)

    def test_deterministic_given_seed(self):
        a = check_axiom(PfnInstance(), "nat-X", 20, 9)
        b = check_axiom(PfnInstance(), "nat-X", 20, 9)
        assert (a.samples, a.attempted, len(a.failures)) == (b.samples, b.attempted, len(b.failures))

    def test_unknown_axiom_rejected(self):
        with pytest.raises(ValueError):
            check_axiom(PfnInstance(), "zigzag", 1, 0)

    def test_failure_reports_carry_renderings(self):
        from tracekit.finfun import PfnTable

        class Broken(PfnInstance):
            name = "broken"

            def trace(self, f, a, b, u):
                return PfnTable(a, b, {})  # drops every token

        rep = check_axiom(Broken(), "yank", 10, 1)
        assert not rep.passed
        assert rep.failures and rep.failures[0].lhs and rep.failures[0].rhs

    def test_skip_counts_as_skipped(self):
        class Unsamplable(PfnInstance):
            name = "unsamplable"

            def sample_object(self, rng):
                raise SamplingError("nothing fits")

        rep = check_axiom(Unsamplable(), "yank", 3, 1)
        assert rep.skipped is not None and not rep.passed


class TestAllInstancesQuick:
    def test_twenty_samples_everywhere(self, instance):
        for rep in check_all_axioms(instance, 20, 1234):
            assert rep.passed, f"{instance.name} {rep.axiom}: {rep.failures[:1]} {rep.skipped}"


class TestCategoryLaws:
    def test_composition_laws(self, instance):
        rng = random.Random(77)
        for _ in range(25):
            a, b, c, d = (instance.sample_object(rng) for _ in range(4))
            f = instance.sample(a, b, rng)
            g = instance.sample(b, c, rng)
            h = instance.sample(c, d, rng)
            assert instance.equal(
                instance.compose(instance.compose(f, g), h),
                instance.compose(f, instance.compose(g, h)))
            assert instance.equal(instance.compose(instance.identity(a), f), f)
            assert instance.equal(instance.compose(f, instance.identity(b)), f)

    def test_symmetry_involution(self, instance):
        rng = random.Random(78)
        for _ in range(25):
            a, b = instance.sample_object(rng), instance.sample_object(rng)
            roundtrip = instance.compose(instance.symmetry(a, b), instance.symmetry(b, a))
            assert instance.equal(roundtrip, instance.identity(a.tensor(b)))

    def test_tensor_functorial_on_identities(self, instance):
        rng = random.Random(79)
        for _ in range(10):
            a, b = instance.sample_object(rng), instance.sample_object(rng)
            assert instance.equal(
                instance.tensor(instance.identity(a), instance.identity(b)),
                instance.identity(a.tensor(b)))

    def test_unit_is_tensor_neutral(self, instance):
        rng = random.Random(80)
        for _ in range(10):
            a, b = instance.sample_object(rng), instance.sample_object(rng)
            f = instance.sample(a, b, rng)
            assert instance.equal(instance.tensor(f, instance.identity(UNIT)), f)
            assert instance.equal(instance.tensor(instance.identity(UNIT), f), f)


class TestEqualIsEquivalence:
    def test_reflexive_symmetric_transitive(self, instance):
        rng = random.Random(81)
        for _ in range(15):
            a, b = instance.sample_object(rng), instance.sample_object(rng)
            f = instance.sample(a, b, rng)
            g = instance.compose(instance.identity(a), f)
            h = instance.compose(f, instance.identity(b))
            assert instance.equal(f, f)
            assert instance.equal(f, g) == instance.equal(g, f)
            if instance.equal(f, g) and instance.equal(g, h):
                assert instance.equal(f, h)
            other = instance.sample(a, b, rng)
            assert instance.equal(f, other) == instance.equal(other, f)
