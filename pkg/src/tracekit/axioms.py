"""Randomized checking of the seven feedback laws.

Axiom ids: ``nat-X``, ``nat-Y``, ``nat-U`` (naturality of the trace in the
input, output and feedback objects), ``vanish-I`` and ``vanish-tensor``
(feedback over the unit and over a tensor), ``superpose`` (feedback commutes
with tensoring a bystander), and ``yank`` (tracing a self-symmetry is the
identity).  Each check samples the quantified objects and morphisms from the
instance's own generators, evaluates both sides, and compares them with the
instance's equality.  Runs are reproducible: the per-sample generator is
derived from (seed, axiom id, sample index).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .contract import Instance
from .errors import SamplingError
from .objects import UNIT

AXIOM_IDS = ("nat-X", "nat-Y", "nat-U", "vanish-I", "vanish-tensor", "superpose", "yank")


@dataclass
class AxiomFailure:
    sample: int
    description: str
    lhs: str
    rhs: str


@dataclass
class AxiomReport:
    axiom: str
    samples: int
    failures: list = field(default_factory=list)
    skipped: str | None = None
    attempted: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures and self.skipped is None


def _sig(inst, f, label):
    return f"{label}: {f.dom.render()} -> {f.cod.render()}\n{inst.render(f)}"


def _nat_x(inst: Instance, rng: random.Random):
    x = inst.sample_object(rng)
    xp = inst.sample_object(rng)
    y = inst.sample_object(rng)
    u = inst.sample_object(rng)
    f = inst.sample(xp.tensor(u), y.tensor(u), rng)
    g = inst.sample(x, xp, rng)
    lhs = inst.trace(inst.compose(inst.tensor(g, inst.identity(u)), f), x, y, u)
    rhs = inst.compose(g, inst.trace(f, xp, y, u))
    return [_sig(inst, f, "f"), _sig(inst, g, "g")], lhs, rhs


def _nat_y(inst, rng):
    x = inst.sample_object(rng)
    y = inst.sample_object(rng)
    yp = inst.sample_object(rng)
    u = inst.sample_object(rng)
    f = inst.sample(x.tensor(u), yp.tensor(u), rng)
    g = inst.sample(yp, y, rng)
    lhs = inst.trace(inst.compose(f, inst.tensor(g, inst.identity(u))), x, y, u)
    rhs = inst.compose(inst.trace(f, x, yp, u), g)
    return [_sig(inst, f, "f"), _sig(inst, g, "g")], lhs, rhs


def _nat_u(inst, rng):
    x = inst.sample_object(rng)
    y = inst.sample_object(rng)
    u = inst.sample_object(rng)
    up = inst.sample_object(rng)
    f = inst.sample(x.tensor(u), y.tensor(up), rng)
    g = inst.sample(up, u, rng)
    lhs = inst.trace(inst.compose(f, inst.tensor(inst.identity(y), g)), x, y, u)
    rhs = inst.trace(inst.compose(inst.tensor(inst.identity(x), g), f), x, y, up)
    return [_sig(inst, f, "f"), _sig(inst, g, "g")], lhs, rhs


def _vanish_i(inst, rng):
    x = inst.sample_object(rng)
    y = inst.sample_object(rng)
    f = inst.sample(x, y, rng)
    lhs = inst.trace(f, x, y, UNIT)
    return [_sig(inst, f, "f")], lhs, f


def _vanish_tensor(inst, rng):
    x = inst.sample_object(rng)
    y = inst.sample_object(rng)
    u = inst.sample_object(rng)
    v = inst.sample_object(rng)
    f = inst.sample(x.tensor(u).tensor(v), y.tensor(u).tensor(v), rng)
    lhs = inst.trace(f, x, y, u.tensor(v))
    rhs = inst.trace(inst.trace(f, x.tensor(u), y.tensor(u), v), x, y, u)
    return [_sig(inst, f, "f")], lhs, rhs


def _superpose(inst, rng):
    x = inst.sample_object(rng)
    y = inst.sample_object(rng)
    u = inst.sample_object(rng)
    z = inst.sample_object(rng)
    w = inst.sample_object(rng)
    f = inst.sample(x.tensor(u), y.tensor(u), rng)
    g = inst.sample(z, w, rng)
    pre = inst.tensor(inst.identity(x), inst.symmetry(z, u))
    post = inst.tensor(inst.identity(y), inst.symmetry(u, w))
    body = inst.compose(inst.compose(pre, inst.tensor(f, g)), post)
    lhs = inst.trace(body, x.tensor(z), y.tensor(w), u)
    rhs = inst.tensor(inst.trace(f, x, y, u), g)
    return [_sig(inst, f, "f"), _sig(inst, g, "g")], lhs, rhs


def _yank(inst, rng):
    x = inst.sample_object(rng)
    lhs = inst.trace(inst.symmetry(x, x), x, x, x)
    rhs = inst.identity(x)
    return [f"X = {x.render()}"], lhs, rhs


_BUILDERS = {
    "nat-X": _nat_x,
    "nat-Y": _nat_y,
    "nat-U": _nat_u,
    "vanish-I": _vanish_i,
    "vanish-tensor": _vanish_tensor,
    "superpose": _superpose,
    "yank": _yank,
}


def check_axiom(instance: Instance, axiom: str, samples: int, seed: int) -> AxiomReport:
    if axiom not in _BUILDERS:
        raise ValueError(f"unknown axiom id {axiom!r}; known: {', '.join(AXIOM_IDS)}")
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    build = _BUILDERS[axiom]
    report = AxiomReport(axiom=axiom, samples=0)
    evaluated = 0
    attempts = 0
    skips = 0
    while evaluated < samples and attempts < max(3 * samples, samples + 10):
        rng = random.Random(f"{seed}|{axiom}|{attempts}")
        attempts += 1
        try:
            desc, lhs, rhs = build(instance, rng)
        except SamplingError:
            skips += 1
            continue
        evaluated += 1
        if not instance.equal(lhs, rhs):
            report.failures.append(AxiomFailure(
                sample=attempts - 1,
                description="; ".join(desc),
                lhs=instance.render(lhs),
                rhs=instance.render(rhs),
            ))
    report.samples = evaluated
    report.attempted = attempts
    if samples > 0 and evaluated == 0:
        report.skipped = f"could not sample any data of the required shape ({skips} attempts skipped)"
    return report


def check_all_axioms(instance: Instance, samples: int, seed: int) -> list[AxiomReport]:
    return [check_axiom(instance, ax, samples, seed) for ax in AXIOM_IDS]
