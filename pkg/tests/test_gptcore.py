"""Operational-theory core: pairing, coarse-graining, purity, mixedness,
distinguishability, and the three principle checkers."""

import itertools
from fractions import Fraction as F

import pytest

from gptlab.boxworld import gbit_theory
from gptlab.exactmath import RVector
from gptlab.gptcore import (
    Effect,
    Measurement,
    State,
    TheoryValidationError,
    check_bit_symmetry,
    check_causality,
    check_tomographic_locality,
    coarse_grain,
    compose_effects,
    compose_states,
    is_completely_mixed,
    is_pure,
    pairing,
    perfectly_distinguishable,
    theory_from_json,
    theory_to_json,
)
from gptlab.zoo import classical_bit_theory


@pytest.fixture(scope="module")
def gbit():
    return gbit_theory()


@pytest.fixture(scope="module")
def cbit():
    return classical_bit_theory()


def gbit_vertex(theory, alpha, beta):
    for s in theory.pure_states["gbit"]:
        if s.vec == RVector([alpha, beta, 1]):
            return s
    raise AssertionError


def test_pairing_unit_on_normalized(gbit, cbit):
    for theory, lab in ((gbit, "gbit"), (cbit, "cbit")):
        unit = theory.unit_effect[lab]
        for s in theory.pure_states[lab]:
            assert pairing(unit, s) == 1


def test_pairing_gbit_fiducial(gbit):
    e00 = gbit.effect_generators["gbit"][0]  # (x=0, a=0|
    v = gbit_vertex(gbit, 1, 0)  # P(a=0|x=0) = 1
    assert pairing(e00, v) == 1
    mixed = State(gbit.system("gbit"), RVector([F(1, 2), F(1, 2), 1]))
    assert pairing(e00, mixed) == F(1, 2)


def test_pairing_system_mismatch(gbit, cbit):
    with pytest.raises(ValueError):
        pairing(cbit.unit_effect["cbit"], gbit.pure_states["gbit"][0])


def test_compose_products(gbit, cbit):
    s = compose_states(gbit.pure_states["gbit"][0], gbit.pure_states["gbit"][1])
    e = compose_effects(gbit.unit_effect["gbit"], gbit.unit_effect["gbit"])
    assert pairing(e, s) == 1
    # two classical bits in states 0 and 1: point mass on (0,1)
    joint = compose_states(cbit.pure_states["cbit"][0], cbit.pure_states["cbit"][1])
    assert joint.vec == RVector([0, 1, 0, 0])


def test_pairing_factorizes_on_products(gbit):
    for e1, e2 in itertools.product(gbit.effect_generators["gbit"], repeat=2):
        for s1, s2 in itertools.product(gbit.pure_states["gbit"], repeat=2):
            lhs = pairing(compose_effects(e1, e2), compose_states(s1, s2))
            assert lhs == pairing(e1, s1) * pairing(e2, s2)


def test_coarse_grain_identity_partition(gbit):
    m = gbit.measurements["gbit"][0]
    assert coarse_grain(m, [[0], [1]]) == m


def test_coarse_grain_full_merge(gbit):
    m = gbit.measurements["gbit"][0]
    merged = coarse_grain(m, [[0, 1]])
    assert len(merged.effects) == 1
    assert merged.effects[0].vec == gbit.unit_effect["gbit"].vec


def test_coarse_grain_merge_block():
    from gptlab.gptcore import SystemType

    st4 = SystemType("four", 4)
    effects = tuple(
        Effect(st4, RVector([1 if i == j else 0 for j in range(4)]))
        for i in range(4)
    )
    m = Measurement(effects)
    out = coarse_grain(m, [[0, 1], [2], [3]])
    assert len(out.effects) == 3
    assert out.effects[0].vec == RVector([1, 1, 0, 0])
    assert out.total() == m.total()


def test_coarse_grain_invalid_partition(gbit):
    m = gbit.measurements["gbit"][0]
    with pytest.raises(ValueError):
        coarse_grain(m, [[0]])
    with pytest.raises(ValueError):
        coarse_grain(m, [[0, 0], [1]])


def test_is_pure(gbit):
    vertex = gbit_vertex(gbit, 0, 0)
    assert is_pure(vertex, gbit)
    sys_t = gbit.system("gbit")
    midpoint = State(sys_t, RVector([F(1, 2), 0, 1]))
    assert not is_pure(midpoint, gbit)
    center = State(sys_t, RVector([F(1, 2), F(1, 2), 1]))
    assert not is_pure(center, gbit)


def test_is_completely_mixed(gbit, cbit):
    sys_t = gbit.system("gbit")
    center = State(sys_t, RVector([F(1, 2), F(1, 2), 1]))
    assert is_completely_mixed(center, gbit)
    assert not is_completely_mixed(gbit_vertex(gbit, 0, 0), gbit)
    uniform = State(cbit.system("cbit"), RVector([F(1, 2), F(1, 2)]))
    assert is_completely_mixed(uniform, cbit)


def test_distinguish_classical_bits(cbit):
    m = perfectly_distinguishable(cbit.pure_states["cbit"], cbit)
    assert m is not None
    for i, e in enumerate(m.effects):
        for j, s in enumerate(cbit.pure_states["cbit"]):
            assert pairing(e, s) == (1 if i == j else 0)


def test_distinguish_gbit_fiducial_pair(gbit):
    pair = [gbit_vertex(gbit, 0, 0), gbit_vertex(gbit, 1, 0)]
    m = perfectly_distinguishable(pair, gbit)
    assert m is not None
    assert pairing(m.effects[0], pair[0]) == 1
    assert pairing(m.effects[0], pair[1]) == 0
    assert pairing(m.effects[1], pair[1]) == 1


def test_distinguish_vertex_vs_center_absent(gbit):
    sys_t = gbit.system("gbit")
    center = State(sys_t, RVector([F(1, 2), F(1, 2), 1]))
    assert perfectly_distinguishable([gbit_vertex(gbit, 0, 0), center], gbit) is None


def listed_measurement_distinguishes(states, theory, lab):
    """Independent oracle: exhaustive search over the theory's listed
    measurements and outcome assignments for a delta_ij measurement."""
    n = len(states)
    for m in theory.measurements[lab]:
        if len(m.effects) < n:
            continue
        for assign in itertools.permutations(range(len(m.effects)), n):
            ok = True
            for i in range(n):
                for j, s in enumerate(states):
                    if pairing(m.effects[assign[i]], s) != (1 if i == j else 0):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return True
    return False


def test_lp_agrees_with_listed_measurement_oracle(gbit):
    states = gbit.pure_states["gbit"]
    for s1, s2 in itertools.permutations(states, 2):
        lp = perfectly_distinguishable([s1, s2], gbit) is not None
        listed = listed_measurement_distinguishes([s1, s2], gbit, "gbit")
        assert lp == listed


def test_check_causality(gbit, cbit):
    assert check_causality(gbit)[0]
    assert check_causality(cbit)[0]


def test_check_causality_corrupted(gbit):
    bad = gbit_theory()
    sys_t = bad.system("gbit")
    doubled = Measurement(
        tuple(
            Effect(sys_t, e.vec + e.vec) for e in bad.measurements["gbit"][1].effects
        )
    )
    bad.measurements["gbit"] = [bad.measurements["gbit"][0], doubled]
    ok, cert = check_causality(bad)
    assert not ok
    assert cert["measurement"] == 1


def test_check_tomographic_locality(gbit, cbit):
    sys_g = gbit.system("gbit")
    ok, cert = check_tomographic_locality(gbit, sys_g, sys_g)
    assert ok and cert["product_span_rank"] == 9
    sys_c = cbit.system("cbit")
    ok, cert = check_tomographic_locality(cbit, sys_c, sys_c)
    assert ok and cert["product_span_rank"] == 4


def test_check_bit_symmetry(gbit, cbit):
    assert check_bit_symmetry(cbit, cbit.system("cbit"))[0]
    ok, cert = check_bit_symmetry(gbit, gbit.system("gbit"))
    assert not ok
    assert cert["pairs"] == 12
    assert cert["group_order"] == 8
    assert "unmappable" in cert


def test_bit_symmetry_invariant_under_relabeling(gbit):
    shuffled = gbit_theory()
    shuffled.pure_states["gbit"] = list(reversed(shuffled.pure_states["gbit"]))
    assert (
        check_bit_symmetry(shuffled, shuffled.system("gbit"))[0]
        == check_bit_symmetry(gbit, gbit.system("gbit"))[0]
    )


def test_measurement_sums_and_pairing_ranges(gbit, cbit):
    for theory, lab in ((gbit, "gbit"), (cbit, "cbit")):
        unit = theory.unit_effect[lab].vec
        for m in theory.measurements[lab]:
            assert m.total() == unit
        for e in theory.effect_generators[lab]:
            for s in theory.pure_states[lab]:
                assert 0 <= pairing(e, s) <= 1


def test_theory_json_roundtrip(gbit):
    data = theory_to_json(gbit)
    again = theory_from_json(data)
    assert theory_to_json(again) == data


def test_validate_rejects_bad_group(gbit):
    bad = gbit_theory()
    bad.reversible_group["gbit"] = bad.reversible_group["gbit"][1:]
    with pytest.raises(TheoryValidationError):
        bad.validate()
