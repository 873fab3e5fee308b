"""The gbit theory and n-party no-signalling behaviors.

Bit conventions: settings x and outcomes a are packed big-endian into ints,
party 0 owning the most significant bit.  Truth tables index f(x) by that
same big-endian integer.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Optional

from .exactmath import RMatrix, RVector, format_rational, rat
from .gptcore import (
    Effect,
    Measurement,
    State,
    SystemType,
    TheoryInstance,
    Transformation,
)

MAX_PARTIES = 12  # 4^n table entries; hard cap on every behavior builder


def bit(value: int, party: int, n: int) -> int:
    """Party's bit of a big-endian packed n-bit word."""
    return (value >> (n - 1 - party)) & 1


def drop_bit(value: int, party: int, n: int) -> int:
    """Remove one party's bit, compacting the remaining n-1 bits."""
    pos = n - 1 - party
    low = value & ((1 << pos) - 1)
    high = value >> (pos + 1)
    return (high << pos) | low


def parity(value: int) -> int:
    return bin(value).count("1") & 1


def bits_to_str(value: int, n: int) -> str:
    return format(value, f"0{n}b")


def str_to_bits(s: str) -> int:
    return int(s, 2) if s else 0


@dataclass(frozen=True)
class TruthTable:
    """Boolean function f:{0,1}^n -> {0,1} stored as 2^n bits."""

    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("truth table entries must be 0/1")

    def __call__(self, x: int) -> int:
        return self.bits[x]

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    @staticmethod
    def from_string(line: str) -> "TruthTable":
        line = line.strip()
        n = (len(line) - 1).bit_length()
        if len(line) != 1 << n:
            raise ValueError(f"length {len(line)} is not a power of two")
        return TruthTable(n, tuple(int(c) for c in line))

    @staticmethod
    def from_file(path: str) -> "TruthTable":
        with open(path) as fh:
            return TruthTable.from_string(fh.readline())

    @staticmethod
    def random(n: int, rng: random.Random) -> "TruthTable":
        return TruthTable(n, tuple(rng.randrange(2) for _ in range(1 << n)))


class Behavior:
    """Conditional probability table P(a|x) for n binary-setting parties.

    Stored sparsely as table[x][a] with zero entries omitted.
    """

    def __init__(self, n: int, table: dict[int, dict[int, Fraction]]):
        if n < 1 or n > MAX_PARTIES:
            raise ValueError(f"party count {n} outside 1..{MAX_PARTIES}")
        self.n = n
        self.table = table

    def prob(self, x: int, a: int) -> Fraction:
        return self.table.get(x, {}).get(a, Fraction(0))

    def column(self, x: int) -> dict[int, Fraction]:
        return self.table.get(x, {})

    def is_normalized(self) -> bool:
        # integer accumulation over a per-column common denominator (exact)
        for x in range(1 << self.n):
            col = self.column(x)
            if not col:
                return False
            if any(p < 0 for p in col.values()):
                return False
            denom = math.lcm(*(p.denominator for p in col.values()))
            total = sum(
                p.numerator * (denom // p.denominator) for p in col.values()
            )
            if total != denom:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "table": {
                f"{bits_to_str(x, self.n)}|{bits_to_str(a, self.n)}": format_rational(p)
                for x, col in sorted(self.table.items())
                for a, p in sorted(col.items())
                if p != 0
            },
        }

    @staticmethod
    def from_json(data: dict) -> "Behavior":
        n = int(data["n"])
        table: dict[int, dict[int, Fraction]] = {}
        for key, val in data["table"].items():
            xs, as_ = key.split("|")
            table.setdefault(str_to_bits(xs), {})[str_to_bits(as_)] = rat(val)
        return Behavior(n, table)


def make_f_box(f: TruthTable) -> Behavior:
    """The n-party box: P(a|x) = 1/2^(n-1) when the outcome parity equals
    f(x), and 0 otherwise.
    """
    n = f.n
    if n < 1 or n > MAX_PARTIES:
        raise ValueError(f"n={n} outside 1..{MAX_PARTIES}")
    weight = Fraction(1, 1 << (n - 1))
    evens, odds = [], []
    for a in range(1 << n):
        (odds if parity(a) else evens).append(a)
    table = {
        x: dict.fromkeys(odds if f(x) else evens, weight) for x in range(1 << n)
    }
    return Behavior(n, table)


@lru_cache(maxsize=None)
def _drop_tables(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(drop_bit(v, j, n) for v in range(1 << n)) for j in range(n)
    )


def is_no_signalling(b: Behavior) -> tuple[bool, Optional[dict]]:
    """Check every party's outcome marginal is independent of that party's
    setting, for each fixed context of the others.  These single-party
    equalities imply independence of all subset marginals.

    Marginals are accumulated as integers over one common denominator, so
    the comparison is exact.
    """
    n = b.n
    denoms = {p.denominator for col in b.table.values() for p in col.values()}
    denom = math.lcm(*denoms) if denoms else 1
    scale = {d: denom // d for d in denoms}
    drops = _drop_tables(n)
    for j in range(n):
        drop = drops[j]
        shift = n - 1 - j
        marg: tuple[dict[int, int], dict[int, int]] = ({}, {})
        for x, col in b.table.items():
            side = marg[(x >> shift) & 1]
            xkey = drop[x] << n
            for a, p in col.items():
                key = xkey | drop[a]
                side[key] = side.get(key, 0) + p.numerator * scale[p.denominator]
        if marg[0] != marg[1]:
            for key in sorted(set(marg[0]) | set(marg[1])):
                p0 = marg[0].get(key, 0)
                p1 = marg[1].get(key, 0)
                if p0 != p1:
                    return False, {
                        "party": j,
                        "others_settings": bits_to_str(key >> n, n - 1),
                        "others_outcomes": bits_to_str(key & ((1 << n) - 1), n - 1),
                        "marginals": [
                            format_rational(Fraction(p0, denom)),
                            format_rational(Fraction(p1, denom)),
                        ],
                    }
    return True, None


def sample_local_measurement(b: Behavior, x: int, seed: int) -> int:
    """Draw one outcome word from P(.|x) with a seeded generator.

    Exact: the draw is an integer below the common denominator, so the
    sampled distribution matches the table with no floating-point rounding.
    """
    col = sorted(b.column(x).items())
    if not col:
        raise ValueError(f"no outcomes for settings {bits_to_str(x, b.n)}")
    denom = math.lcm(*(p.denominator for _, p in col))
    rng = random.Random(seed)
    r = rng.randrange(denom)
    acc = 0
    for a, p in col:
        acc += p.numerator * (denom // p.denominator)
        if r < acc:
            return a
    raise AssertionError("column not normalized")


# ---------------------------------------------------------------------------
# Fiducial vector embedding (3^n coordinates)
# ---------------------------------------------------------------------------
#
# Coordinate index = base-3 digit word d, party 0 most significant.  Digit 0/1
# selects "party measures x=digit and sees outcome 0"; digit 2 is that party's
# normalization slot (outcome marginalized, setting irrelevant under NS).


def _digits(index: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        out.append(index % 3)
        index //= 3
    return out[::-1]


def behavior_to_vector(b: Behavior) -> State:
    n = b.n
    dim = 3**n
    coords = []
    for idx in range(dim):
        d = _digits(idx, n)
        x = 0
        free = []
        for j, dj in enumerate(d):
            x = (x << 1) | (dj if dj != 2 else 0)
            if dj == 2:
                free.append(j)
        total = Fraction(0)
        for combo in range(1 << len(free)):
            a = 0
            for j, dj in enumerate(d):
                if dj == 2:
                    a = (a << 1) | bit(combo, free.index(j), len(free))
                else:
                    a = a << 1
            total += b.prob(x, a)
        coords.append(total)
    system = SystemType(f"gbit^{n}", dim)
    return State(system, RVector(coords))


def vector_to_behavior(s: State, n: int) -> Behavior:
    """Invert the fiducial embedding; raises ValueError off the image."""
    if s.vec.dim != 3**n:
        raise ValueError(f"expected dim {3 ** n}, got {s.vec.dim}")
    # per-party functionals: P(0|x) reads slot x; P(1|x) = slot 2 - slot x
    table: dict[int, dict[int, Fraction]] = {}
    for x in range(1 << n):
        col: dict[int, Fraction] = {}
        for a in range(1 << n):
            total = Fraction(0)
            for combo in range(1 << n):
                # combo bit j: 0 -> slot x_j term, 1 -> slot 2 term (only a_j=1)
                coeff = 1
                idx = 0
                ok = True
                for j in range(n):
                    xj, aj = bit(x, j, n), bit(a, j, n)
                    if bit(combo, j, n) == 0:
                        idx = idx * 3 + xj
                        if aj == 1:
                            coeff = -coeff
                    else:
                        if aj == 0:
                            ok = False
                            break
                        idx = idx * 3 + 2
                if ok:
                    total += coeff * s.vec[idx]
            if total != 0:
                col[a] = total
        table[x] = col
    b = Behavior(n, table)
    if not b.is_normalized():
        raise ValueError("vector is outside the no-signalling embedding image")
    ns, _ = is_no_signalling(b)
    if not ns or behavior_to_vector(b).vec != s.vec:
        raise ValueError("vector is outside the no-signalling embedding image")
    return b


# ---------------------------------------------------------------------------
# The single-gbit theory
# ---------------------------------------------------------------------------


def gbit_theory() -> TheoryInstance:
    """Single Boxworld system: square state space in fiducial coordinates
    (P(a=0|x=0), P(a=0|x=1), normalization).
    """
    sys_t = SystemType("gbit", 3)
    vertices = [
        State(sys_t, RVector([alpha, beta, 1]))
        for alpha in (0, 1)
        for beta in (0, 1)
    ]
    unit = Effect(sys_t, RVector([0, 0, 1]))
    e00 = Effect(sys_t, RVector([1, 0, 0]))   # (x=0, a=0|
    e01 = Effect(sys_t, RVector([-1, 0, 1]))  # (x=0, a=1|
    e10 = Effect(sys_t, RVector([0, 1, 0]))   # (x=1, a=0|
    e11 = Effect(sys_t, RVector([0, -1, 1]))  # (x=1, a=1|
    measurements = [Measurement((e00, e01)), Measurement((e10, e11))]
    swap = RMatrix.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    flip = RMatrix.from_rows([[-1, 0, 1], [0, 1, 0], [0, 0, 1]])
    group = _close_group([swap, flip], 3)
    return TheoryInstance(
        systems=[sys_t],
        pure_states={"gbit": vertices},
        unit_effect={"gbit": unit},
        effect_generators={"gbit": [e00, e01, e10, e11]},
        measurements={"gbit": measurements},
        reversible_group={
            "gbit": [Transformation(sys_t, sys_t, m) for m in group]
        },
        composite_dims={"gbit*gbit": 9},
    )


def _close_group(generators: list[RMatrix], dim: int) -> list[RMatrix]:
    """Closure of a matrix set under multiplication (small groups only)."""
    seen = {RMatrix.identity(dim)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for m in frontier:
            for g in generators:
                prod = g.matmul(m)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return sorted(seen, key=lambda m: m.entries)
