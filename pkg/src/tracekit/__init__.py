"""tracekit: traced wire calculus instances, polarized composition, plays."""

from .axioms import AXIOM_IDS, AxiomReport, check_all_axioms, check_axiom
from .contract import Instance
from .intcat import IntCategory, IntMorphism, IntObject
from .objects import UNIT, AtomicWire, ObjectExpr
from .workspace import INSTANCES, Workspace, eval_term, make_instance, shape_check

__version__ = "0.1.0"

__all__ = [
    "AXIOM_IDS", "AxiomReport", "check_axiom", "check_all_axioms",
    "Instance", "IntCategory", "IntMorphism", "IntObject",
    "UNIT", "AtomicWire", "ObjectExpr",
    "INSTANCES", "Workspace", "eval_term", "make_instance", "shape_check",
    "__version__",
]
