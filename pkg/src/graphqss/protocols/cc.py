"""Direct classical sharing: the dealer hands out an encoded graph state."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .. import gf2
from ..access import LoccPlan, dependent_parities, locc_plan, secret_parity
from ..dense import DEFAULT_QUBIT_CAP, apply_labels, build_graph_state, reduced_density, trace_distance
from ..errors import DomainError
from ..graph_core import LabelVector
from ..schemes import SchemeSpec
from ..tableau import StabilizerTableau, tableau_from_graph


@dataclass
class CCResult:
    scheme: str
    secret: int
    subset: tuple[int, ...]
    authorized: bool
    bit: int | None
    bases: dict[int, str] = field(default_factory=dict)
    outcomes: dict[int, int] = field(default_factory=dict)
    parity: list[int] | None = None
    trace_distance: float | None = None

    @property
    def success(self) -> bool:
        return self.authorized and self.bit == self.secret

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme,
            "secret": self.secret,
            "subset": list(self.subset),
            "result": "reconstructed" if self.authorized else "denied",
            "bit": self.bit,
            "bases": {str(v): b for v, b in self.bases.items()},
            "outcomes": {str(v): s for v, s in self.outcomes.items()},
            "parity": self.parity,
            "reduced_state_trace_distance": self.trace_distance,
        }


def encode(spec: SchemeSpec, secret: int) -> StabilizerTableau:
    return tableau_from_graph(spec.graph, LabelVector.encoded(spec.labels_for(secret)))


def execute_plan(t: StabilizerTableau, plan: LoccPlan, rng: np.random.Generator) -> dict[int, int]:
    """Measure each planned basis in place and return the outcome bits.

    The measurements commute, so ``Z`` goes first: on graph states that keeps
    every random-outcome row update local.
    """
    order = sorted(plan.bases.items(), key=lambda vb: (vb[1] != "Z", vb[0]))
    outcomes = {v: t.measure_qubit(v, b, rng)[0] for v, b in order}
    return dict(sorted(outcomes.items()))


def unauthorized_distance(spec: SchemeSpec, subset: Iterable[int]) -> float:
    """Trace distance between the subset's reduced states for secret 0 and secret 1."""
    base = build_graph_state(spec.graph)
    rhos = [
        reduced_density(apply_labels(base, LabelVector.encoded(spec.labels_for(s))), subset)
        for s in (0, 1)
    ]
    return trace_distance(*rhos)


def cc_run(
    spec: SchemeSpec,
    secret: int,
    subset: Iterable[int],
    rng: np.random.Generator,
    evidence: bool = True,
) -> CCResult:
    """Encode ``secret``, then let ``subset`` try to read it with local measurements.

    An unauthorized subset gets a denial; when the graph is small enough the
    result carries the dense trace distance between the two secrets' reduced
    states as evidence.
    """
    if secret not in (0, 1):
        raise DomainError(f"secret must be 0 or 1, got {secret}")
    sub = tuple(sorted(set(subset)))
    for v in sub:
        if v not in spec.players:
            raise DomainError(f"vertex {v} is not a player of {spec.name}")
    g = spec.graph
    c = secret_parity(g, sub, spec.encoding)
    if c is None:
        if any(gf2.dot(d, spec.encoding) for d in dependent_parities(g, sub)):
            raise AssertionError("secret visible to a subset that cannot read it")
        dist = unauthorized_distance(spec, sub) if evidence and g.n <= DEFAULT_QUBIT_CAP else None
        return CCResult(spec.name, secret, sub, False, None, trace_distance=dist)
    plan = locc_plan(g, sub, [c])
    assert isinstance(plan, LoccPlan)  # a single parity never conflicts
    t = encode(spec, secret)
    outcomes = execute_plan(t, plan, rng)
    (bit,) = plan.recombine(outcomes)
    return CCResult(spec.name, secret, sub, True, bit, dict(plan.bases), outcomes, gf2.unpack(c, g.n))
