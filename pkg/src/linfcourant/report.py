"""Check reports and the text rendering of counterexamples."""

from dataclasses import dataclass, field
from typing import Any, Optional


def render(x) -> Any:
    """Re-parseable rendering: forms and fields use the expression grammar,
    composite elements become dicts of rendered slots."""
    from .cotangent import GradedPoly
    from .dgla import CartanElement, SmallGElement
    from .forms import CourantSection, Poly, PolyForm, PolyVectorField

    if isinstance(x, (PolyForm, PolyVectorField, Poly, GradedPoly)):
        return str(x)
    if isinstance(x, SmallGElement):
        return {"form": str(x.form), "iota": str(x.iota), "lie": str(x.lie)}
    if isinstance(x, CartanElement):
        return {"iota": str(x.iota), "lie": str(x.lie)}
    if isinstance(x, CourantSection):
        return {"vf": str(x.vf), "form": str(x.form)}
    if hasattr(x, "render"):
        return x.render()
    if isinstance(x, (list, tuple)):
        return [render(y) for y in x]
    return str(x)


@dataclass
class Failure:
    check: str
    arity: Optional[int]
    inputs: list
    lhs: Any
    rhs: Any

    def to_dict(self):
        return {"check": self.check, "arity": self.arity, "inputs": self.inputs,
                "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class CheckReport:
    name: str
    checks_run: int = 0
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)
    max_failures: int = 20
    failure_count: int = 0

    @property
    def passed(self):
        return self.failure_count == 0

    def record(self, check, ok, arity=None, inputs=(), lhs=None, rhs=None):
        """Count one check; keep a rendered counterexample if it failed."""
        self.checks_run += 1
        if ok:
            return True
        self.failure_count += 1
        if len(self.failures) < self.max_failures:
            self.failures.append(Failure(check, arity, [render(a) for a in inputs],
                                         render(lhs), render(rhs)))
        return False

    def compare(self, check, lhs, rhs, arity=None, inputs=()):
        return self.record(check, lhs == rhs, arity, inputs, lhs, rhs)

    def failed_arities(self):
        return sorted({f.arity for f in self.failures if f.arity is not None})

    def merge(self, other):
        self.checks_run += other.checks_run
        self.failure_count += other.failure_count
        room = self.max_failures - len(self.failures)
        self.failures.extend(other.failures[:max(room, 0)])
        return self

    def to_dict(self):
        return {"name": self.name, "checks_run": self.checks_run,
                "failure_count": self.failure_count,
                "failures": [f.to_dict() for f in self.failures], "info": self.info}
