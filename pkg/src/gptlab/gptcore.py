"""Finitely-generated operational theories and their principle checkers.

A theory is given by explicit lists: pure states (extreme points), effect-cone
generators, allowed complete measurements, and a finite reversible
transformation group.  Causality, tomographic locality and bit-symmetry all
reduce to exact rank / LP / enumeration computations on those lists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactmath import (
    RMatrix,
    RVector,
    cone_combination,
    cone_feasible,
    format_rational,
    lp_solve,
    rank,
    rat,
    tensor,
)


@dataclass(frozen=True)
class SystemType:
    label: str
    dim: int


@dataclass(frozen=True)
class State:
    system: SystemType
    vec: RVector


@dataclass(frozen=True)
class Effect:
    system: SystemType
    vec: RVector


@dataclass(frozen=True)
class Measurement:
    """Outcome-indexed list of effects on one system, summing to the unit."""

    effects: tuple[Effect, ...]

    @property
    def system(self) -> SystemType:
        return self.effects[0].system

    def total(self) -> RVector:
        out = RVector.zero(self.effects[0].vec.dim)
        for e in self.effects:
            out = out + e.vec
        return out


@dataclass(frozen=True)
class Transformation:
    system_in: SystemType
    system_out: SystemType
    matrix: RMatrix
    reversible: bool = True

    def apply(self, s: State) -> State:
        return State(self.system_out, self.matrix.matvec(s.vec))


class TheoryValidationError(ValueError):
    """Raised when a theory fails its construction-time invariants."""


@dataclass
class TheoryInstance:
    systems: list[SystemType]
    pure_states: dict[str, list[State]]
    unit_effect: dict[str, Effect]
    effect_generators: dict[str, list[Effect]]
    measurements: dict[str, list[Measurement]]
    reversible_group: dict[str, list[Transformation]]
    composite_dims: dict[str, int] = field(default_factory=dict)
    sampled: bool = False  # True: passes are evidence at this resolution only

    def system(self, label: str) -> SystemType:
        for s in self.systems:
            if s.label == label:
                return s
        raise KeyError(label)

    def validate(self) -> None:
        """Check construction-time invariants; raise TheoryValidationError."""
        for sys_t in self.systems:
            lab = sys_t.label
            unit = self.unit_effect[lab].vec
            for s in self.pure_states[lab]:
                if s.vec.dim != sys_t.dim:
                    raise TheoryValidationError(f"{lab}: state dim {s.vec.dim}")
                if unit.dot(s.vec) != 1:
                    raise TheoryValidationError(f"{lab}: unnormalized pure state")
            for k, meas in enumerate(self.measurements[lab]):
                if meas.total() != unit:
                    raise TheoryValidationError(
                        f"{lab}: measurement {k} does not sum to the unit effect"
                    )
            for e in self.effect_generators[lab]:
                for s in self.pure_states[lab]:
                    p = e.vec.dot(s.vec)
                    if p < 0 or p > 1:
                        raise TheoryValidationError(
                            f"{lab}: generator pairing {format_rational(p)} "
                            "outside [0,1]"
                        )
            self._validate_group(lab)

    def _validate_group(self, lab: str) -> None:
        group = self.reversible_group[lab]
        mats = {t.matrix for t in group}
        ident = RMatrix.identity(self.system(lab).dim)
        if ident not in mats:
            raise TheoryValidationError(f"{lab}: group lacks the identity")
        for t1 in group:
            if not any(t1.matrix.matmul(t2.matrix) == ident for t2 in group):
                raise TheoryValidationError(f"{lab}: group element has no inverse")
            for t2 in group:
                if t1.matrix.matmul(t2.matrix) not in mats:
                    raise TheoryValidationError(f"{lab}: group not closed")
        vertex_set = {s.vec for s in self.pure_states[lab]}
        for t in group:
            for s in self.pure_states[lab]:
                if t.matrix.matvec(s.vec) not in vertex_set:
                    raise TheoryValidationError(
                        f"{lab}: group element does not preserve the pure states"
                    )


# ---------------------------------------------------------------------------
# Basic operations
# ---------------------------------------------------------------------------


def pairing(e: Effect, s: State) -> Fraction:
    """Probability of the effect firing on the state."""
    if e.system != s.system:
        raise ValueError(f"system mismatch: {e.system.label} vs {s.system.label}")
    return e.vec.dot(s.vec)


def compose_states(s1: State, s2: State) -> State:
    """Product state on the composite system (tensor of coordinates)."""
    joint = SystemType(
        f"{s1.system.label}*{s2.system.label}", s1.vec.dim * s2.vec.dim
    )
    return State(joint, tensor(s1.vec, s2.vec))


def compose_effects(e1: Effect, e2: Effect) -> Effect:
    joint = SystemType(
        f"{e1.system.label}*{e2.system.label}", e1.vec.dim * e2.vec.dim
    )
    return Effect(joint, tensor(e1.vec, e2.vec))


def coarse_grain(m: Measurement, partition: Sequence[Sequence[int]]) -> Measurement:
    """Merge outcomes by summing effects over each partition block."""
    seen = sorted(i for block in partition for i in block)
    if seen != list(range(len(m.effects))):
        raise ValueError(f"invalid partition {partition}")
    sys_t = m.system
    out = []
    for block in partition:
        v = RVector.zero(m.effects[0].vec.dim)
        for i in block:
            v = v + m.effects[i].vec
        out.append(Effect(sys_t, v))
    return Measurement(tuple(out))


# ---------------------------------------------------------------------------
# Purity / mixedness / distinguishability
# ---------------------------------------------------------------------------


def is_pure(s: State, theory: TheoryInstance) -> bool:
    """Extreme-point test: no convex decomposition into other listed states."""
    others = [p.vec for p in theory.pure_states[s.system.label] if p.vec != s.vec]
    constraints = [
        (RVector.basis(s.vec.dim, k), s.vec[k]) for k in range(s.vec.dim)
    ]
    return cone_feasible(others, constraints) is None


def is_completely_mixed(s: State, theory: TheoryInstance) -> bool:
    """True iff every pure state can be subtracted with positive weight."""
    vertices = [p.vec for p in theory.pure_states[s.system.label]]
    for rho in vertices:
        # maximize p s.t. s = p*rho + sum_i c_i v_i, all weights >= 0
        a_rows = [
            [rho[k]] + [v[k] for v in vertices] for k in range(s.vec.dim)
        ]
        b = list(s.vec)
        objective = [Fraction(-1)] + [Fraction(0)] * len(vertices)
        res = lp_solve(a_rows, b, objective)
        if res is None or -res[1] <= 0:
            return False
    return True


def perfectly_distinguishable(
    states: Sequence[State], theory: TheoryInstance
) -> Optional[Measurement]:
    """Search the effect cone for a measurement with (e_i|s_j) = delta_ij.

    Variables are cone coefficients c[i][g] >= 0 for each outcome i and
    generator g; constraints are the delta conditions plus a coordinate-wise
    unit sum.  Returns the measurement, or None when the LP is infeasible.
    """
    if len(states) < 2:
        raise ValueError("need at least two states")
    lab = states[0].system.label
    gens = [e.vec for e in theory.effect_generators[lab]]
    unit = theory.unit_effect[lab].vec
    n, g, d = len(states), len(gens), unit.dim
    a_rows: list[list[Fraction]] = []
    b: list[Fraction] = []
    for i in range(n):
        for j, st in enumerate(states):
            row = [Fraction(0)] * (n * g)
            for k in range(g):
                row[i * g + k] = gens[k].dot(st.vec)
            a_rows.append(row)
            b.append(Fraction(1 if i == j else 0))
    for coord in range(d):
        row = [Fraction(0)] * (n * g)
        for i in range(n):
            for k in range(g):
                row[i * g + k] = gens[k][coord]
        a_rows.append(row)
        b.append(unit[coord])
    res = lp_solve(a_rows, b)
    if res is None:
        return None
    coeffs = res[0]
    sys_t = states[0].system
    effects = tuple(
        Effect(sys_t, cone_combination(gens, coeffs[i * g : (i + 1) * g]))
        for i in range(n)
    )
    return Measurement(effects)


# ---------------------------------------------------------------------------
# Principle checkers
# ---------------------------------------------------------------------------


def check_causality(theory: TheoryInstance) -> tuple[bool, dict]:
    """All listed complete measurements on a system share one unit effect."""
    for sys_t in theory.systems:
        unit = theory.unit_effect[sys_t.label].vec
        for k, meas in enumerate(theory.measurements[sys_t.label]):
            if meas.total() != unit:
                return False, {
                    "system": sys_t.label,
                    "measurement": k,
                    "reason": "effect sum differs from the unit effect",
                }
    return True, {}


def check_tomographic_locality(
    theory: TheoryInstance, a: SystemType, b: SystemType
) -> tuple[bool, dict]:
    """Product pure states must span the declared joint state space."""
    key = f"{a.label}*{b.label}"
    if key not in theory.composite_dims:
        raise KeyError(f"no composite dimension declared for {key}")
    target = theory.composite_dims[key]
    rows = [
        list(tensor(sa.vec, sb.vec))
        for sa in theory.pure_states[a.label]
        for sb in theory.pure_states[b.label]
    ]
    r = rank(RMatrix.from_rows(rows))
    return r == target, {"product_span_rank": r, "composite_dim": target}


def _distinguishable_pairs(
    theory: TheoryInstance, system: SystemType
) -> list[tuple[int, int]]:
    states = theory.pure_states[system.label]
    pairs = []
    for i in range(len(states)):
        for j in range(len(states)):
            if i != j and perfectly_distinguishable(
                [states[i], states[j]], theory
            ) is not None:
                pairs.append((i, j))
    return pairs


def check_bit_symmetry(
    theory: TheoryInstance, system: SystemType
) -> tuple[bool, dict]:
    """The listed group must act transitively on ordered pure distinguishable
    state pairs.  A failure only refutes the listed group, not a theory with a
    larger (e.g. continuous) reversible group.
    """
    states = theory.pure_states[system.label]
    pairs = _distinguishable_pairs(theory, system)
    if len(pairs) < 2:
        return True, {"pairs": len(pairs), "reason": "vacuous"}
    group = theory.reversible_group[system.label]
    vec_index = {s.vec: i for i, s in enumerate(states)}
    src = pairs[0]
    reachable = set()
    for t in group:
        p = t.matrix.matvec(states[src[0]].vec)
        q = t.matrix.matvec(states[src[1]].vec)
        if p in vec_index and q in vec_index:
            reachable.add((vec_index[p], vec_index[q]))
    for tgt in pairs:
        if tgt not in reachable:
            return False, {
                "pairs": len(pairs),
                "group_order": len(group),
                "unmappable": {"from": list(src), "to": list(tgt)},
            }
    return True, {"pairs": len(pairs), "group_order": len(group)}


# ---------------------------------------------------------------------------
# Theory JSON schema
# ---------------------------------------------------------------------------


def theory_to_json(theory: TheoryInstance) -> dict:
    def vec(v: RVector) -> list[str]:
        return [format_rational(c) for c in v]

    return {
        "systems": [{"label": s.label, "dim": s.dim} for s in theory.systems],
        "pure_states": {
            lab: [vec(s.vec) for s in lst] for lab, lst in theory.pure_states.items()
        },
        "unit_effect": {lab: vec(e.vec) for lab, e in theory.unit_effect.items()},
        "effect_generators": {
            lab: [vec(e.vec) for e in lst]
            for lab, lst in theory.effect_generators.items()
        },
        "measurements": {
            lab: [[vec(e.vec) for e in m.effects] for m in lst]
            for lab, lst in theory.measurements.items()
        },
        "reversible_group": {
            lab: [
                [
                    [format_rational(t.matrix[r, c]) for c in range(t.matrix.cols)]
                    for r in range(t.matrix.rows)
                ]
                for t in lst
            ]
            for lab, lst in theory.reversible_group.items()
        },
        "composite_dims": dict(theory.composite_dims),
        "sampled": theory.sampled,
    }


def theory_from_json(data: dict) -> TheoryInstance:
    """Load the theory schema; validates invariants before returning."""
    try:
        systems = [SystemType(s["label"], int(s["dim"])) for s in data["systems"]]
        by_label = {s.label: s for s in systems}

        def vec(coords) -> RVector:
            return RVector([rat(c) for c in coords])

        pure_states = {
            lab: [State(by_label[lab], vec(v)) for v in lst]
            for lab, lst in data["pure_states"].items()
        }
        unit_effect = {
            lab: Effect(by_label[lab], vec(v))
            for lab, v in data["unit_effect"].items()
        }
        effect_generators = {
            lab: [Effect(by_label[lab], vec(v)) for v in lst]
            for lab, lst in data["effect_generators"].items()
        }
        measurements = {
            lab: [
                Measurement(tuple(Effect(by_label[lab], vec(v)) for v in m))
                for m in lst
            ]
            for lab, lst in data["measurements"].items()
        }
        reversible_group = {
            lab: [
                Transformation(
                    by_label[lab],
                    by_label[lab],
                    RMatrix.from_rows([[rat(c) for c in row] for row in mat]),
                )
                for mat in lst
            ]
            for lab, lst in data["reversible_group"].items()
        }
        composite_dims = {k: int(v) for k, v in data.get("composite_dims", {}).items()}
        sampled = bool(data.get("sampled", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise TheorySchemaError(f"malformed theory JSON: {exc}") from exc
    theory = TheoryInstance(
        systems=systems,
        pure_states=pure_states,
        unit_effect=unit_effect,
        effect_generators=effect_generators,
        measurements=measurements,
        reversible_group=reversible_group,
        composite_dims=composite_dims,
        sampled=sampled,
    )
    theory.validate()
    return theory


class TheorySchemaError(ValueError):
    """Raised when theory JSON does not match the schema."""


def load_theory_file(path: str) -> TheoryInstance:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise TheorySchemaError(f"not valid JSON: {exc}") from exc
    return theory_from_json(data)
