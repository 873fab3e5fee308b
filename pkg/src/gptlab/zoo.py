"""Concrete theory instances: classical bit, rebit, and a sampled qubit.

Continuum state spaces (rebit circle, qubit Bloch sphere) are sampled at
rational points via the Pythagorean parametrization
t -> ((1-t^2)/(1+t^2), 2t/(1+t^2)), so every checker computation stays exact.
A sampled theory's passed check is evidence at that resolution; a failed
causality or tomographic-locality check is definitive.  Bit-symmetry verdicts
always refer to the listed finite group.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .exactmath import RMatrix, RVector
from .gptcore import (
    Effect,
    Measurement,
    State,
    SystemType,
    TheoryInstance,
    Transformation,
)


def classical_bit_theory() -> TheoryInstance:
    """Two-outcome classical system: the 1-simplex of distributions."""
    sys_t = SystemType("cbit", 2)
    p0 = State(sys_t, RVector([1, 0]))
    p1 = State(sys_t, RVector([0, 1]))
    e0 = Effect(sys_t, RVector([1, 0]))
    e1 = Effect(sys_t, RVector([0, 1]))
    unit = Effect(sys_t, RVector([1, 1]))
    ident = RMatrix.identity(2)
    swap = RMatrix.from_rows([[0, 1], [1, 0]])
    return TheoryInstance(
        systems=[sys_t],
        pure_states={"cbit": [p0, p1]},
        unit_effect={"cbit": unit},
        effect_generators={"cbit": [e0, e1]},
        measurements={"cbit": [Measurement((e0, e1))]},
        reversible_group={
            "cbit": [Transformation(sys_t, sys_t, m) for m in (ident, swap)]
        },
        composite_dims={"cbit*cbit": 4},
    )


def _circle_points(k: int) -> list[tuple[Fraction, Fraction]]:
    """k rational points on the unit circle, closed under the square's
    symmetry group.  Starts from the four axis points and adds dihedral
    orbits of Pythagorean points until at least k points are present.
    """
    if k < 4:
        raise ValueError("need k >= 4")
    pts: list[tuple[Fraction, Fraction]] = [
        (Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(1)),
        (Fraction(-1), Fraction(0)),
        (Fraction(0), Fraction(-1)),
    ]
    seen = set(pts)
    denom = 2
    while len(pts) < k:
        t = Fraction(1, denom)
        c = (1 - t * t) / (1 + t * t)
        s = 2 * t / (1 + t * t)
        for x, z in _dihedral_orbit(c, s):
            if (x, z) not in seen:
                seen.add((x, z))
                pts.append((x, z))
        denom += 1
    return pts


def _dihedral_orbit(x: Fraction, z: Fraction) -> list[tuple[Fraction, Fraction]]:
    orbit = set()
    for _ in range(4):
        orbit.add((x, z))
        orbit.add((x, -z))
        x, z = -z, x
    return sorted(orbit)


def rebit_theory(k: int = 4) -> TheoryInstance:
    """Real-amplitude qubit: unit-trace real symmetric 2x2 matrices, in
    coordinates (x, z, normalization).  Composite dimension is 10 (unit-trace
    real symmetric 4x4), which product states cannot span.
    """
    sys_t = SystemType("rebit", 3)
    pts = _circle_points(k)
    states = [State(sys_t, RVector([x, z, 1])) for x, z in pts]
    unit = Effect(sys_t, RVector([0, 0, 1]))
    effects = [
        Effect(sys_t, RVector([x / 2, z / 2, Fraction(1, 2)])) for x, z in pts
    ]
    point_index = {(x, z): i for i, (x, z) in enumerate(pts)}
    measurements = []
    for i, (x, z) in enumerate(pts):
        j = point_index[(-x, -z)]
        if i < j:
            measurements.append(Measurement((effects[i], effects[j])))
    rot90 = RMatrix.from_rows([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    reflect = RMatrix.from_rows([[1, 0, 0], [0, -1, 0], [0, 0, 1]])
    group = _matrix_group([rot90, reflect], 3)
    return TheoryInstance(
        systems=[sys_t],
        pure_states={"rebit": states},
        unit_effect={"rebit": unit},
        effect_generators={"rebit": effects},
        measurements={"rebit": measurements},
        reversible_group={
            "rebit": [Transformation(sys_t, sys_t, m) for m in group]
        },
        composite_dims={"rebit*rebit": 10},
    )


def _sphere_point(rng: random.Random) -> tuple[Fraction, Fraction, Fraction]:
    """Random rational point on the unit sphere from two circle points."""
    t1 = Fraction(rng.randrange(1, 50), rng.randrange(50, 100))
    t2 = Fraction(rng.randrange(1, 50), rng.randrange(50, 100))
    c1 = (1 - t1 * t1) / (1 + t1 * t1)
    s1 = 2 * t1 / (1 + t1 * t1)
    c2 = (1 - t2 * t2) / (1 + t2 * t2)
    s2 = 2 * t2 / (1 + t2 * t2)
    return (c1 * c2, c1 * s2, s1)


def _octahedral_rotations() -> list[RMatrix]:
    """The 24 signed 3x3 permutation matrices with determinant +1."""
    import itertools

    mats = []
    for perm in itertools.permutations(range(3)):
        sign_perm = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if perm[i] > perm[j]:
                    sign_perm = -sign_perm
        for signs in itertools.product((1, -1), repeat=3):
            det = sign_perm * signs[0] * signs[1] * signs[2]
            if det != 1:
                continue
            rows = [[0] * 3 for _ in range(3)]
            for i in range(3):
                rows[i][perm[i]] = signs[i]
            mats.append(RMatrix.from_rows(rows))
    return mats


def qubit_sampled_theory(k: int = 6, seed: int = 0) -> TheoryInstance:
    """Qubit in Bloch coordinates (x, y, z, normalization), sampled at k
    rational pure states closed under the octahedral rotation group and
    negation.  Verdicts run in evidence mode (sampled=True).
    """
    if k < 6:
        raise ValueError("need k >= 6")
    sys_t = SystemType("qubit", 4)
    pts: list[tuple[Fraction, Fraction, Fraction]] = []
    seen = set()
    axes = [
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1)),
    ]
    rotations = _octahedral_rotations()

    def add_orbit(p):
        for m in rotations:
            for q in (p, tuple(-c for c in p)):
                img = tuple(m.matvec(RVector(q)).coords)
                if img not in seen:
                    seen.add(img)
                    pts.append(img)

    for p in axes:
        add_orbit(p)
    rng = random.Random(seed)
    while len(pts) < k:
        add_orbit(_sphere_point(rng))
    states = [State(sys_t, RVector([x, y, z, 1])) for x, y, z in pts]
    unit = Effect(sys_t, RVector([0, 0, 0, 1]))
    effects = [
        Effect(sys_t, RVector([x / 2, y / 2, z / 2, Fraction(1, 2)]))
        for x, y, z in pts
    ]
    point_index = {p: i for i, p in enumerate(pts)}
    measurements = []
    for i, p in enumerate(pts):
        j = point_index[tuple(-c for c in p)]
        if i < j:
            measurements.append(Measurement((effects[i], effects[j])))
    group_mats = [
        RMatrix.from_rows(
            [list(m.row(0)) + [0], list(m.row(1)) + [0], list(m.row(2)) + [0],
             [0, 0, 0, 1]]
        )
        for m in rotations
    ]
    return TheoryInstance(
        systems=[sys_t],
        pure_states={"qubit": states},
        unit_effect={"qubit": unit},
        effect_generators={"qubit": effects},
        measurements={"qubit": measurements},
        reversible_group={
            "qubit": [Transformation(sys_t, sys_t, m) for m in group_mats]
        },
        composite_dims={"qubit*qubit": 16},
        sampled=True,
    )


def _matrix_group(generators: list[RMatrix], dim: int) -> list[RMatrix]:
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
