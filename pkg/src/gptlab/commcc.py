"""Communication complexity: the one-bit shared-box protocol and exact
classical oracles.

A task is f(x,y) with x Alice's n bits (high half of the truth-table index)
and y Bob's n bits (low half).  The shared-box protocol consumes the 2n-party
box built from f: both sides measure with their inputs, Alice sends the
parity of her outcomes, and Bob XORs it with his own parity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import ceil, log2
from typing import Optional

from .boxworld import (
    Behavior,
    TruthTable,
    bits_to_str,
    make_f_box,
    parity,
    sample_local_measurement,
)

DET_CC_MAX_N = 3  # exhaustive protocol-tree recursion cap


@dataclass(frozen=True)
class CommTask:
    n: int
    f: TruthTable

    def __post_init__(self):
        if self.f.n != 2 * self.n:
            raise ValueError(
                f"truth table on {self.f.n} bits, expected {2 * self.n}"
            )

    def value(self, x: int, y: int) -> int:
        return self.f((x << self.n) | y)

    @staticmethod
    def from_file(path: str) -> "CommTask":
        with open(path) as fh:
            n = int(fh.readline())
            return CommTask(n, TruthTable.from_string(fh.readline()))


@dataclass
class ProtocolTranscript:
    x: int
    y: int
    settings: int
    outcomes: int
    messages: list[tuple[str, int]] = field(default_factory=list)
    output: int = 0
    seed: int = 0


def inner_product_task(n: int) -> CommTask:
    bits = []
    for x in range(1 << n):
        for y in range(1 << n):
            bits.append(parity(x & y))
    return CommTask(n, TruthTable(2 * n, tuple(bits)))


def equality_task(n: int) -> CommTask:
    bits = []
    for x in range(1 << n):
        for y in range(1 << n):
            bits.append(1 if x == y else 0)
    return CommTask(n, TruthTable(2 * n, tuple(bits)))


def random_task(n: int, rng: random.Random) -> CommTask:
    return CommTask(n, TruthTable.random(2 * n, rng))


def van_dam_run(
    task: CommTask,
    x: int,
    y: int,
    seed: int,
    box: Optional[Behavior] = None,
) -> ProtocolTranscript:
    """One run of the shared-box protocol; exactly one classical bit moves."""
    n = task.n
    if x >= 1 << n or y >= 1 << n or x < 0 or y < 0:
        raise ValueError("input outside {0,1}^n")
    if box is None:
        box = make_f_box(task.f)
    settings = (x << n) | y
    outcomes = sample_local_measurement(box, settings, seed)
    alice_parity = parity(outcomes >> n)
    bob_parity = parity(outcomes & ((1 << n) - 1))
    return ProtocolTranscript(
        x=x,
        y=y,
        settings=settings,
        outcomes=outcomes,
        messages=[("alice", alice_parity)],
        output=alice_parity ^ bob_parity,
        seed=seed,
    )


def one_way_cc(task: CommTask) -> int:
    """Exact deterministic one-way cost: ceil(log2 of distinct matrix rows)."""
    rows = {
        tuple(task.value(x, y) for y in range(1 << task.n))
        for x in range(1 << task.n)
    }
    return ceil(log2(len(rows)))


def det_cc(task: CommTask) -> int:
    """Exact deterministic two-way cost by protocol-tree recursion.

    Cost convention: total bits sent until Bob knows the answer; the answer
    bit itself is not charged.  Communication may stop once every column of
    the live rectangle is constant, since Bob then reads the answer off his
    own input.  Memoized on (row-set, column-set) bitmasks.
    """
    if task.n > DET_CC_MAX_N:
        raise ValueError(f"det_cc capped at n={DET_CC_MAX_N}")
    size = 1 << task.n
    full = (1 << size) - 1

    @lru_cache(maxsize=None)
    def rec(rows: int, cols: int) -> int:
        if all(
            len(
                {task.value(x, y) for x in range(size) if rows >> x & 1}
            ) <= 1
            for y in range(size)
            if cols >> y & 1
        ):
            return 0
        best = 2 * task.n  # sending both inputs always suffices
        for mask, other in _split_masks(rows):
            best = min(best, 1 + max(rec(mask, cols), rec(other, cols)))
        for mask, other in _split_masks(cols):
            best = min(best, 1 + max(rec(rows, mask), rec(rows, other)))
        return best

    return rec(full, full)


def _split_masks(live: int) -> list[tuple[int, int]]:
    """Proper bipartitions of a bitmask, anchored on its lowest set bit."""
    bits = [i for i in range(live.bit_length()) if live >> i & 1]
    if len(bits) < 2:
        return []
    anchor = 1 << bits[0]
    rest = bits[1:]
    out = []
    for combo in range(1 << len(rest)):
        mask = anchor
        for i, b in enumerate(rest):
            if combo >> i & 1:
                mask |= 1 << b
        other = live ^ mask
        if other:
            out.append((mask, other))
    return out


def verify_van_dam_all(task: CommTask, seed: int) -> dict:
    """Exhaustive protocol check over all (x,y), plus the classical oracles."""
    n = task.n
    if 2 * n > 12:
        raise ValueError("behavior table cap: 2n <= 12")
    box = make_f_box(task.f)
    correct = 0
    total = 0
    max_messages = 0
    for x in range(1 << n):
        for y in range(1 << n):
            t = van_dam_run(task, x, y, seed + total, box=box)
            total += 1
            max_messages = max(max_messages, len(t.messages))
            if t.output == task.value(x, y):
                correct += 1
    return {
        "correct": correct,
        "total": total,
        "max_messages": max_messages,
        "one_way_cc": one_way_cc(task),
        "det_cc": det_cc(task) if n <= DET_CC_MAX_N else None,
    }
