"""Circuits that consume a shared-box advice state to decide a language slice.

The advice for a slice with membership function f is the n-party f-box; the
circuit for instance x measures auxiliary port j with setting x_j and accepts
iff the parity of the outcomes is 1.  The parity constraint of the box makes
every acceptance probability exactly 0 or 1, far inside the (2/3, 1/3)
promise gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .boxworld import Behavior, TruthTable, make_f_box, parity
from .exactmath import format_rational

ACCEPT_THRESHOLD = Fraction(2, 3)
REJECT_THRESHOLD = Fraction(1, 3)
MAX_SLICE_BITS = 12


@dataclass(frozen=True)
class LanguageSlice:
    n: int
    membership: TruthTable

    def __post_init__(self):
        if self.membership.n != self.n:
            raise ValueError("membership table length mismatch")


@dataclass(frozen=True)
class AdviceState:
    systems: int  # auxiliary-register port count d(n)
    payload: Behavior


@dataclass(frozen=True)
class AdviceCircuit:
    instance: int
    n: int
    # port j is measured with setting bit j of the instance; accept on parity 1
    accept_parity: int = 1


def build_boxworld_advice(slice_: LanguageSlice) -> tuple[AdviceState, dict]:
    """Advice state plus the uniform description of the circuit family."""
    if slice_.n > MAX_SLICE_BITS:
        raise ValueError(f"slice capped at n={MAX_SLICE_BITS}")
    advice = AdviceState(slice_.n, make_f_box(slice_.membership))
    family = {
        "ports": slice_.n,
        "settings": "port j measures with bit j of the instance",
        "postprocess": "accept iff outcome parity is 1",
    }
    return advice, family


def acceptance_probability(circuit: AdviceCircuit, advice: AdviceState) -> Fraction:
    """Exact acceptance probability of the circuit on the advice."""
    if circuit.n != advice.systems:
        raise ValueError(
            f"register mismatch: circuit {circuit.n}, advice {advice.systems}"
        )
    total = Fraction(0)
    for a, p in advice.payload.column(circuit.instance).items():
        if parity(a) == circuit.accept_parity:
            total += p
    return total


def uniform_coin_advice(n: int) -> AdviceState:
    """Independent fair coins on every port; accepts anything with prob 1/2."""
    weight = Fraction(1, 1 << n)
    table = {x: {a: weight for a in range(1 << n)} for x in range(1 << n)}
    return AdviceState(n, Behavior(n, table))


def decide_slice(slice_: LanguageSlice, advice: AdviceState | None = None) -> dict:
    """Classify every instance against the membership table.

    Instances with acceptance probability >= 2/3 are accepted, <= 1/3
    rejected, anything between is flagged invalid (broken promise).
    """
    if advice is None:
        advice, _ = build_boxworld_advice(slice_)
    n = slice_.n
    agreement = 0
    invalid = 0
    min_in = Fraction(1)
    max_out = Fraction(0)
    has_in = has_out = False
    for x in range(1 << n):
        p = acceptance_probability(AdviceCircuit(x, n), advice)
        if p >= ACCEPT_THRESHOLD:
            verdict = 1
        elif p <= REJECT_THRESHOLD:
            verdict = 0
        else:
            verdict = None
            invalid += 1
        member = slice_.membership(x)
        if verdict == member:
            agreement += 1
        if member:
            has_in = True
            min_in = min(min_in, p)
        else:
            has_out = True
            max_out = max(max_out, p)
    gap = (min_in if has_in else Fraction(1)) - (max_out if has_out else Fraction(0))
    return {
        "n": n,
        "agreement": agreement,
        "total": 1 << n,
        "invalid": invalid,
        "gap": format_rational(gap),
        "advice_ports": advice.systems,
    }
