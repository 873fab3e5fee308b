"""Parity boxes, no-signalling checks, sampling, and the vector embedding."""

import random
from fractions import Fraction as F

import pytest

from gptlab.boxworld import (
    Behavior,
    TruthTable,
    behavior_to_vector,
    bit,
    bits_to_str,
    drop_bit,
    gbit_theory,
    is_no_signalling,
    make_f_box,
    parity,
    sample_local_measurement,
    vector_to_behavior,
)
from gptlab.gptcore import check_bit_symmetry


def test_bit_helpers():
    assert bit(0b100, 0, 3) == 1
    assert bit(0b100, 2, 3) == 0
    assert drop_bit(0b101, 1, 3) == 0b11
    assert bits_to_str(5, 4) == "0101"


def test_truth_table_roundtrip():
    tt = TruthTable.from_string("0110")
    assert tt.n == 2
    assert [tt(x) for x in range(4)] == [0, 1, 1, 0]
    assert tt.to_string() == "0110"
    with pytest.raises(ValueError):
        TruthTable.from_string("011")


def test_gbit_theory_shape():
    t = gbit_theory()
    assert len(t.pure_states["gbit"]) == 4
    unit = t.unit_effect["gbit"].vec
    for m in t.measurements["gbit"]:
        assert m.total() == unit
    t.validate()
    assert not check_bit_symmetry(t, t.system("gbit"))[0]


def test_pr_box():
    pr = make_f_box(TruthTable(2, (0, 0, 0, 1)))  # f = AND
    for x in range(4):
        want = 1 if x == 3 else 0
        for a in range(4):
            expect = F(1, 2) if parity(a) == want else F(0)
            assert pr.prob(x, a) == expect


def test_fbox_n1_deterministic():
    box = make_f_box(TruthTable(1, (0, 1)))  # f(x) = x
    assert box.prob(0, 0) == 1 and box.prob(0, 1) == 0
    assert box.prob(1, 1) == 1 and box.prob(1, 0) == 0


def test_fbox_n3_weights():
    rng = random.Random(3)
    f = TruthTable.random(3, rng)
    box = make_f_box(f)
    for x in range(8):
        col = box.column(x)
        assert len(col) == 4
        assert all(p == F(1, 4) for p in col.values())


def test_fbox_no_signalling_and_normalized():
    rng = random.Random(0)
    for n in (1, 2, 3, 4):
        box = make_f_box(TruthTable.random(n, rng))
        assert box.is_normalized()
        assert is_no_signalling(box)[0]


def test_product_box_no_signalling():
    # product of two deterministic local boxes: a_j = x_j
    table = {x: {x: F(1)} for x in range(4)}
    assert is_no_signalling(Behavior(2, table))[0]


def test_signalling_box_detected():
    # P(a|x) = 1 iff a_1 = x_2: party 1's outcome reads party 2's setting
    table = {}
    for x in range(4):
        a = (bit(x, 1, 2) << 1) | 0
        table[x] = {a: F(1)}
    ok, witness = is_no_signalling(Behavior(2, table))
    assert not ok
    assert witness["party"] == 1


def test_fbox_single_party_marginal_uniform():
    box = make_f_box(TruthTable.random(3, random.Random(5)))
    for x in range(8):
        for j in range(3):
            marg = sum(
                (p for a, p in box.column(x).items() if bit(a, j, 3) == 0),
                F(0),
            )
            assert marg == F(1, 2)


def test_sampling_deterministic_and_seeded():
    box = make_f_box(TruthTable(1, (0, 1)))
    assert sample_local_measurement(box, 1, 99) == 1
    pr = make_f_box(TruthTable(2, (0, 0, 0, 1)))
    outs = [sample_local_measurement(pr, 3, s) for s in range(50)]
    assert all(parity(a) == 1 for a in outs)
    assert outs == [sample_local_measurement(pr, 3, s) for s in range(50)]
    assert len(set(outs)) > 1  # both parity-1 outcomes occur


def test_parity_determinism_up_to_n10():
    rng = random.Random(11)
    for n in (2, 4, 6, 8, 10):
        f = TruthTable.random(n, rng)
        box = make_f_box(f)
        for trial in range(20):
            x = rng.randrange(1 << n)
            a = sample_local_measurement(box, x, 1000 + trial)
            assert parity(a) == f(x)


def test_behavior_vector_roundtrip_pr():
    pr = make_f_box(TruthTable(2, (0, 0, 0, 1)))
    s = behavior_to_vector(pr)
    assert s.vec.dim == 9
    back = vector_to_behavior(s, 2)
    assert back.table == {
        x: {a: p for a, p in col.items() if p != 0} for x, col in pr.table.items()
    }


def test_vector_embedding_linear():
    b1 = make_f_box(TruthTable(2, (0, 0, 0, 1)))
    b2 = make_f_box(TruthTable(2, (1, 0, 0, 1)))
    mix = Behavior(
        2,
        {
            x: {
                a: F(1, 3) * b1.prob(x, a) + F(2, 3) * b2.prob(x, a)
                for a in range(4)
                if F(1, 3) * b1.prob(x, a) + F(2, 3) * b2.prob(x, a) != 0
            }
            for x in range(4)
        },
    )
    v1, v2, vm = (behavior_to_vector(b).vec for b in (b1, b2, mix))
    assert vm == v1.scale(F(1, 3)) + v2.scale(F(2, 3))


def test_product_vertex_maps_to_tensor():
    from gptlab.exactmath import tensor

    # deterministic local boxes a=0 regardless of setting, per party
    table = {x: {0: F(1)} for x in range(4)}
    v = behavior_to_vector(Behavior(2, table)).vec
    single = behavior_to_vector(Behavior(1, {0: {0: F(1)}, 1: {0: F(1)}})).vec
    assert v == tensor(single, single)


def test_vector_outside_image_rejected():
    from gptlab.exactmath import RVector
    from gptlab.gptcore import State, SystemType

    bad = State(SystemType("gbit^1", 3), RVector([2, 0, 1]))
    with pytest.raises(ValueError):
        vector_to_behavior(bad, 1)


def test_behavior_json_roundtrip():
    pr = make_f_box(TruthTable(2, (0, 0, 0, 1)))
    again = Behavior.from_json(pr.to_json())
    assert again.n == 2
    assert again.table == pr.table
