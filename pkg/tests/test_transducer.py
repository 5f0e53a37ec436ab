import random

import pytest

from tracekit.errors import ShapeError
from tracekit.finfun import PfnInstance
from tracekit.objects import AtomicWire, ObjectExpr
from tracekit.transducer import (Transducer, TransducerInstance, bisim_equiv,
                                 canonical, compose_td, from_pfn, identity_td,
                                 minimize, orbit, plays, symmetry_td, tensor_td,
                                 to_pfn, trace_td)

A = ObjectExpr((AtomicWire("A", ("a",)),))
B = ObjectExpr((AtomicWire("B", ("0", "1")),))
X = ObjectExpr((AtomicWire("X", ("a", "b")),))

td = TransducerInstance()


def alternator():
    # two states, emits 0/1 alternately on input a
    return Transducer(A, B, (0, 1), 0,
                      {(0, (0, "a")): ((0, "0"), 1), (1, (0, "a")): ((0, "1"), 0)})


class TestOrbit:
    def test_copycat_echoes(self):
        t = identity_td(X)
        orb = orbit(t, [(0, "a"), (0, "b")])
        assert orb.outputs == ((0, "a"), (0, "b"))
        assert not orb.halted

    def test_halts_on_undefined(self):
        t = Transducer(A, B, (0,), 0, {})
        orb = orbit(t, [(0, "a")])
        assert orb.outputs == ()
        assert orb.halted

    def test_alternator(self):
        orb = orbit(alternator(), [(0, "a")] * 3)
        assert [lab for _, lab in orb.outputs] == ["0", "1", "0"]


class TestCompose:
    def test_identity_neutral_up_to_bisim(self):
        rng = random.Random(2)
        for _ in range(20):
            f = td.sample(A, B, rng)
            assert bisim_equiv(compose_td(f, identity_td(B)), f)
            assert bisim_equiv(compose_td(identity_td(A), f), f)

    def test_one_state_chain(self):
        f = Transducer(A, B, ("q",), "q", {("q", (0, "a")): ((0, "0"), "q")})
        g = Transducer(B, X, ("r",), "r", {("r", (0, "0")): ((0, "b"), "r")})
        fg = compose_td(f, g)
        assert fg.n_states == 1
        assert orbit(fg, [(0, "a")]).outputs == ((0, "b"),)

    def test_undefined_first_step(self):
        f = Transducer(A, B, (0,), 0, {})
        g = identity_td(B)
        assert orbit(compose_td(f, g), [(0, "a")]).halted

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            compose_td(identity_td(A), identity_td(B))


class TestTensor:
    def test_identities(self):
        assert bisim_equiv(tensor_td(identity_td(A), identity_td(B)),
                           identity_td(A.tensor(B)))

    def test_componentwise_interleaving(self):
        t = tensor_td(alternator(), identity_td(X))
        word = [(0, "a"), (1, "a"), (0, "a"), (1, "b")]
        orb = orbit(t, word)
        assert orb.outputs == ((0, "0"), (1, "a"), (0, "1"), (1, "b"))

    def test_undefined_right_block(self):
        dead = Transducer(X, X, (0,), 0, {})
        t = tensor_td(alternator(), dead)
        assert orbit(t, [(1, "a")]).halted
        assert not orbit(t, [(0, "a")]).halted


class TestTrace:
    def test_yanking(self):
        tr = trace_td(symmetry_td(X, X), X, X, X)
        assert bisim_equiv(tr, identity_td(X))

    def test_one_circulation(self):
        u = ObjectExpr((AtomicWire("U", ("u",)),))
        b = ObjectExpr((AtomicWire("B", ("b",)),))
        f = Transducer(A.tensor(u), b.tensor(u), ("q",), "q",
                       {("q", (0, "a")): ((1, "u"), "q"),
                        ("q", (1, "u")): ((0, "b"), "q")})
        tr = trace_td(f, A, b, u)
        assert orbit(tr, [(0, "a")]).outputs == ((0, "b"),)

    def test_stateful_self_loop_diverges(self):
        u = ObjectExpr((AtomicWire("U", ("u",)),))
        b = ObjectExpr((AtomicWire("B", ("b",)),))
        f = Transducer(A.tensor(u), b.tensor(u), ("q",), "q",
                       {("q", (0, "a")): ((1, "u"), "q"),
                        ("q", (1, "u")): ((1, "u"), "q")})
        tr = trace_td(f, A, b, u)
        assert orbit(tr, [(0, "a")]).halted

    def test_one_state_matches_token_table(self):
        pfn = PfnInstance()
        rng = random.Random(41)
        for _ in range(80):
            a, b, u = (pfn.sample_object(rng) for _ in range(3))
            f = pfn.sample(a.tensor(u), b.tensor(u), rng)
            via_td = trace_td(from_pfn(f), a, b, u)
            assert to_pfn(via_td).table == pfn.trace(f, a, b, u).table


class TestBisim:
    def test_reflexive(self):
        t = alternator()
        assert bisim_equiv(t, t)

    def test_duplicated_state_merges(self):
        t = alternator()
        t2 = Transducer(A, B, (0, 1, 2), 0,
                        {(0, (0, "a")): ((0, "0"), 1),
                         (1, (0, "a")): ((0, "1"), 2),
                         (2, (0, "a")): ((0, "0"), 1)})
        assert bisim_equiv(t, t2)

    def test_witness_is_shortest(self):
        res = bisim_equiv(identity_td(A), Transducer(A, A, (0,), 0, {}))
        assert not res
        assert res.witness == ((0, "a"),)

    def test_witness_depth_two(self):
        t = alternator()
        t2 = Transducer(A, B, (0, 1), 0,
                        {(0, (0, "a")): ((0, "0"), 1), (1, (0, "a")): ((0, "0"), 0)})
        res = bisim_equiv(t, t2)
        assert not res and len(res.witness) == 2

    def test_requires_same_objects(self):
        with pytest.raises(ShapeError):
            bisim_equiv(identity_td(A), identity_td(B))


class TestMinimize:
    def test_redundant_copycat_collapses(self):
        t = Transducer(X, X, (0, 1, 2), 0,
                       {(q, e): (e, (q + 1) % 3) for q in range(3) for e in X.elements()})
        m = minimize(t)
        assert m.n_states == 1
        assert bisim_equiv(m, identity_td(X))
        assert bisim_equiv(t, m)

    def test_already_minimal(self):
        m = minimize(alternator())
        assert m.n_states == 2
        assert bisim_equiv(m, alternator())

    def test_unreachable_dropped(self):
        t = Transducer(A, B, (0, 9), 0, {(0, (0, "a")): ((0, "0"), 0),
                                         (9, (0, "a")): ((0, "1"), 9)})
        assert minimize(t).n_states == 1

    def test_commutes_with_operations(self):
        rng = random.Random(43)
        for _ in range(25):
            f = td.sample(A, B, rng)
            g = td.sample(B, X, rng)
            assert bisim_equiv(minimize(compose_td(f, g)),
                               compose_td(minimize(f), minimize(g)))
            assert bisim_equiv(minimize(tensor_td(f, g)),
                               tensor_td(minimize(f), minimize(g)))
        for _ in range(25):
            a, b, u = (td.sample_object(rng) for _ in range(3))
            f = td.sample(a.tensor(u), b.tensor(u), rng)
            assert bisim_equiv(trace_td(minimize(f), a, b, u),
                               minimize(trace_td(f, a, b, u)))


class TestPlays:
    def test_copycat_singleton(self):
        t = identity_td(A)
        got = plays(t, 2)
        e = (0, "a")
        assert got == frozenset({(), (e, e), (e, e, e, e)})

    def test_everywhere_undefined(self):
        assert plays(Transducer(A, B, (0,), 0, {}), 3) == frozenset({()})

    def test_alternator_enumeration(self):
        got = plays(alternator(), 2)
        a, o0, o1 = (0, "a"), (0, "0"), (0, "1")
        assert got == frozenset({(), (a, o0), (a, o0, a, o1)})

    def test_orbit_length_bound(self):
        rng = random.Random(47)
        for _ in range(40):
            t = td.sample(A, B, rng)
            word = [(0, "a")] * rng.randint(0, 5)
            orb = orbit(t, word)
            assert len(orb.outputs) <= len(word)
            assert (len(orb.outputs) == len(word)) == (not orb.halted)


class TestBisimPlaysCoherence:
    def test_equivalence_iff_equal_truncated_plays(self):
        rng = random.Random(53)
        small = ObjectExpr((AtomicWire("X", ("a", "b")),))
        out = ObjectExpr((AtomicWire("Y", ("0", "1")),))
        inst = TransducerInstance(max_states=3)
        agree = 0
        for i in range(200):
            f = inst.sample(small, out, rng)
            if i % 3 == 0:
                g = minimize(f)  # guaranteed-equivalent pairs too
            else:
                g = inst.sample(small, out, rng)
            n = f.n_states * g.n_states
            same_plays = plays(f, n) == plays(g, n)
            assert bool(bisim_equiv(f, g)) == same_plays
            agree += same_plays
        assert 0 < agree < 200


def test_canonical_renaming_is_stable():
    t = alternator()
    c1, c2 = canonical(t), canonical(canonical(t))
    assert c1.states == c2.states and c1.delta == c2.delta
