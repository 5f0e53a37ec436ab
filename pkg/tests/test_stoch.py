import random

import numpy as np
import pytest

from tracekit.errors import DivergenceError, SingularityError, ValidationError
from tracekit.finfun import PfnInstance, graph_of
from tracekit.objects import UNIT, AtomicWire, ObjectExpr
from tracekit.stoch import (StochInstance, SubstochMatrix, from_pfn, trace_exact,
                            trace_series)

S = ObjectExpr((AtomicWire("S", ("s",)),))  # singleton space
X2 = ObjectExpr((AtomicWire("X", ("a", "b")),))

stoch = StochInstance()


def singleton_kernel(f_xy, f_xu, f_uy, f_uu):
    return SubstochMatrix(S.tensor(S), S.tensor(S), np.array([[f_xy, f_xu], [f_uy, f_uu]]))


class TestCompose:
    def test_identity_neutral(self):
        rng = random.Random(1)
        f = stoch.sample(X2, S, rng)
        assert stoch.equal(stoch.compose(stoch.identity(X2), f), f)
        assert stoch.equal(stoch.compose(f, stoch.identity(S)), f)

    def test_weighted_average(self):
        f = SubstochMatrix(S, X2, np.array([[0.5, 0.5]]))
        g = SubstochMatrix(X2, S, np.array([[1.0], [0.0]]))
        assert np.allclose(stoch.compose(f, g).entries, [[0.5]])

    def test_zero_annihilates(self):
        z = SubstochMatrix(S, X2, np.zeros((1, 2)))
        g = SubstochMatrix(X2, S, np.array([[1.0], [1.0]]))
        assert np.allclose(stoch.compose(z, g).entries, 0.0)


class TestTraceSeries:
    def test_geometric_series_sums_to_one(self):
        k = singleton_kernel(0.0, 1.0, 0.5, 0.5)
        out = trace_series(k, S, S, S, epsilon=1e-12)
        assert abs(out.entries[0, 0] - 1.0) <= 1e-12

    def test_geometric_series_with_leak(self):
        k = singleton_kernel(0.0, 1.0, 0.25, 0.5)
        out = trace_series(k, S, S, S, epsilon=1e-12)
        assert abs(out.entries[0, 0] - 0.5) <= 1e-12

    def test_no_paths_into_feedback(self):
        k = singleton_kernel(0.75, 0.0, 0.25, 0.5)
        out = trace_series(k, S, S, S, epsilon=1e-12)
        assert out.entries[0, 0] == 0.75

    def test_closed_loop_contributes_nothing(self):
        # recurrent feedback with no exit: series reports zero exiting mass
        k = singleton_kernel(0.0, 1.0, 0.0, 1.0)
        out = trace_series(k, S, S, S, epsilon=1e-12)
        assert out.entries[0, 0] == 0.0

    def test_bad_epsilon(self):
        with pytest.raises(ValidationError):
            trace_series(singleton_kernel(0, 0, 0, 0), S, S, S, epsilon=0.0)

    def test_iteration_cap(self):
        k = singleton_kernel(0.0, 1.0, 1e-9, 1.0 - 1e-9)
        with pytest.raises(DivergenceError) as err:
            trace_series(k, S, S, S, epsilon=1e-12, max_iter=3)
        assert err.value.residual is not None

    def test_monotone_partial_sums(self):
        rng = random.Random(8)
        for _ in range(40):
            a, b, u = (stoch.sample_object(rng) for _ in range(3))
            f = stoch.sample(a.tensor(u), b.tensor(u), rng)
            prev = trace_series(f, a, b, u, epsilon=0.5).entries
            for eps in (1e-2, 1e-5, 1e-9):
                cur = trace_series(f, a, b, u, epsilon=eps).entries
                if cur.size:
                    assert (cur - prev).min() >= -1e-15
                prev = cur


class TestTraceExact:
    def test_matches_series_on_singletons(self):
        for blocks, expect in ((((0.0, 1.0, 0.5, 0.5)), 1.0), ((0.0, 1.0, 0.25, 0.5), 0.5)):
            k = singleton_kernel(*blocks)
            assert abs(trace_exact(k, S, S, S).entries[0, 0] - expect) <= 1e-12

    def test_closed_loop_is_singular(self):
        k = singleton_kernel(0.0, 1.0, 0.0, 1.0)
        with pytest.raises(SingularityError):
            trace_exact(k, S, S, S)

    def test_empty_feedback_returns_input(self):
        rng = random.Random(3)
        f = stoch.sample(X2, X2, rng)
        assert stoch.equal(trace_exact(f, X2, X2, UNIT), f)
        assert stoch.equal(stoch.trace(f, X2, X2, UNIT), f)

    def test_instance_trace_falls_back_to_series(self):
        k = singleton_kernel(0.25, 0.5, 0.0, 1.0)
        out = stoch.trace(k, S, S, S)
        assert out.entries[0, 0] == 0.25


class TestInvariants:
    def test_outputs_substochastic(self):
        rng = random.Random(17)
        for _ in range(100):
            a, b, u = (stoch.sample_object(rng) for _ in range(3))
            f = stoch.sample(a.tensor(u), b.tensor(u), rng)
            out = stoch.trace(f, a, b, u)
            if out.entries.size:
                assert out.entries.min() >= -1e-12
                assert out.entries.sum(axis=1).max() <= 1 + 1e-9

    def test_series_agrees_with_exact(self):
        rng = random.Random(19)
        checked = 0
        while checked < 200:
            a, b, u = (stoch.sample_object(rng) for _ in range(3))
            f = stoch.sample(a.tensor(u), b.tensor(u), rng)
            try:
                exact = trace_exact(f, a, b, u)
            except SingularityError:
                continue
            series = trace_series(f, a, b, u, epsilon=1e-12)
            checked += 1
            if exact.entries.size:
                assert np.max(np.abs(exact.entries - series.entries)) <= 1e-9

    def test_pfn_graph_degenerate_consistency(self):
        pfn = PfnInstance()
        rng = random.Random(29)
        for _ in range(60):
            a, b, u = (pfn.sample_object(rng) for _ in range(3))
            f = pfn.sample(a.tensor(u), b.tensor(u), rng)
            lifted = stoch.trace(from_pfn(f), a, b, u)
            direct = from_pfn(pfn.trace(f, a, b, u))
            assert stoch.equal(lifted, direct)


class TestValidation:
    def test_negative_entries_rejected(self):
        with pytest.raises(ValidationError):
            SubstochMatrix(S, S, np.array([[-0.5]]))

    def test_heavy_rows_rejected(self):
        with pytest.raises(ValidationError):
            SubstochMatrix(S, X2, np.array([[0.7, 0.7]]))

    def test_shape_checked(self):
        with pytest.raises(ValidationError):
            SubstochMatrix(S, X2, np.array([[0.5]]))
