import pytest

from tracekit.cpo import CpoInstance
from tracekit.finfun import PfnInstance, PInjInstance, RelInstance
from tracekit.objects import AtomicWire, ObjectExpr
from tracekit.stoch import StochInstance
from tracekit.transducer import TransducerInstance

ALL_INSTANCES = {
    "pfn": PfnInstance,
    "pinj": PInjInstance,
    "rel": RelInstance,
    "stoch": StochInstance,
    "cpo": CpoInstance,
    "transducer": TransducerInstance,
}


@pytest.fixture(params=sorted(ALL_INSTANCES))
def instance(request):
    return ALL_INSTANCES[request.param]()


@pytest.fixture
def xy():
    x = ObjectExpr((AtomicWire("X", ("a", "b")),))
    y = ObjectExpr((AtomicWire("Y", ("c", "d", "e")),))
    return x, y


def wire(name, *labels):
    return AtomicWire(name, tuple(labels))


def obj(*wires):
    return ObjectExpr(tuple(wires))


def small_base_object(inst, rng):
    """A deliberately small object, cheap even under cartesian tensors."""
    if inst.name == "cpo":
        from tracekit.cpo import sample_poset_wire

        if rng.random() < 0.25:
            return ObjectExpr(())
        return ObjectExpr((sample_poset_wire("p0", rng.randint(1, 3), rng),))
    from tracekit.finfun import sample_finite_object

    return sample_finite_object(rng, max_wires=2, max_elems=3)


def small_gobject(gcat, rng):
    from tracekit.intcat import IntObject

    return IntObject(small_base_object(gcat.base, rng),
                     small_base_object(gcat.base, rng))
