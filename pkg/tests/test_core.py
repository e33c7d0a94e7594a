import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tcamsplit import core
from tcamsplit.core import (
    Partition,
    Transaction,
    TransactionSequence,
    apply_sequence,
    new_partition,
    sample_partition,
    validate_sequence,
)
from tcamsplit.errors import BadSum, IndexOutOfRange, KTooLarge, WidthOverflow, ZeroWeight


def seq(width, parts, *triples):
    return TransactionSequence(
        tuple(Transaction(s, d, m) for s, m, d in triples), width, parts
    )


def test_new_partition_basic():
    p = new_partition([5, 1, 2], 3)
    assert p.k == 3 and p.width == 3 and p.total == 8
    p1 = new_partition([8], 3)
    assert p1.k == 1


def test_new_partition_rejects():
    with pytest.raises(BadSum):
        new_partition([5, 1, 1], 3)
    with pytest.raises(ZeroWeight):
        new_partition([8, 0], 3)
    with pytest.raises(ZeroWeight):
        new_partition([], 3)
    with pytest.raises(WidthOverflow):
        new_partition([1], 129)


def test_apply_sequence_example():
    p = new_partition([5, 1, 2], 3)
    s = seq(3, 3, (1, 1, 2), (2, 2, 3), (3, 4, 1), (1, 8, 0))
    assert apply_sequence(p, s).is_zero()


def test_apply_sequence_trivial():
    assert apply_sequence(new_partition([8], 3), seq(3, 1, (1, 8, 0))).is_zero()
    assert apply_sequence(
        new_partition([4, 4], 3), seq(3, 2, (1, 4, 2), (2, 8, 0))
    ).is_zero()


def test_apply_sequence_index_out_of_range():
    p = new_partition([4, 4], 3)
    with pytest.raises(IndexOutOfRange):
        apply_sequence(p, seq(3, 2, (1, 4, 3)))


def test_validate_sequence_flags():
    p = new_partition([8], 3)
    rep = validate_sequence(p, seq(3, 1))
    assert not rep.zeroes
    rep = validate_sequence(p, seq(3, 1, (1, 8, 0)))
    assert rep.zeroes and rep.nonnegative and rep.sizes_monotone
    assert rep.zero_target_terminal_only and rep.power_of_two_sizes
    # shrinking sizes and mid-sequence pool use are flagged
    p2 = new_partition([4, 4], 3)
    rep = validate_sequence(p2, seq(3, 2, (1, 4, 0), (2, 4, 0)))
    assert rep.zeroes and not rep.zero_target_terminal_only
    rep = validate_sequence(p2, seq(3, 2, (1, 4, 2), (2, 8, 0), (1, 1, 2), (2, 1, 1)))
    assert not rep.sizes_monotone and not rep.nonnegative


def test_sum_conservation_random_sequences():
    rng = random.Random(11)
    p = new_partition([5, 1, 2], 3)
    values = [-8, 5, 1, 2]
    txs = []
    for _ in range(50):
        s, d = rng.sample(range(4), 2)
        lvl = rng.randrange(4)
        txs.append(Transaction(s, d, 1 << lvl))
        values[s] -= 1 << lvl
        values[d] += 1 << lvl
        state = apply_sequence(p, TransactionSequence(tuple(txs), 3, 3))
        assert sum(state.values) == 0
        assert list(state.values) == values


def test_concat_matches_sequential_application():
    p = new_partition([5, 1, 2], 3)
    s1 = seq(3, 3, (1, 1, 2))
    s2 = seq(3, 3, (2, 2, 3), (3, 4, 1), (1, 8, 0))
    combined = apply_sequence(p, s1.concat(s2))
    # replay s2 from the state after s1
    mid = apply_sequence(p, s1)
    q = new_partition(mid.weights, 3)
    assert apply_sequence(q, s2).is_zero()
    assert combined.is_zero()


def test_sampler_edges():
    rng = random.Random(0)
    assert sample_partition(1, 5, rng).weights == (32,)
    assert sample_partition(16, 4, rng).weights == (1,) * 16
    with pytest.raises(KTooLarge):
        sample_partition(17, 4, rng)
    with pytest.raises(KTooLarge):
        sample_partition(0, 4, rng)


def test_sampler_invariants():
    rng = random.Random(42)
    for _ in range(200):
        p = sample_partition(3, 8, rng)
        assert sum(p.weights) == 256
        assert all(w > 0 for w in p.weights)
        assert p.k == 3


def test_sampler_uniformity_k2_w4():
    rng = random.Random(7)
    freq = Counter(sample_partition(2, 4, rng).weights for _ in range(100_000))
    assert len(freq) == 15
    for count in freq.values():
        assert abs(count / 100_000 - 1 / 15) < 0.01


def test_sampler_huge_width():
    p = sample_partition(5, 100, random.Random(3))
    assert sum(p.weights) == 1 << 100 and all(w > 0 for w in p.weights)


@given(st.integers(1, 6), st.data())
@settings(max_examples=50, deadline=None)
def test_sampler_valid_partitions_property(width, data):
    k = data.draw(st.integers(1, min(8, 1 << width)))
    seed = data.draw(st.integers(0, 2**32))
    p = sample_partition(k, width, random.Random(seed))
    assert sum(p.weights) == 1 << width and len(p.weights) == k


def test_text_and_json_round_trips():
    p = core.partition_from_text("5,1,2")
    assert p == new_partition([5, 1, 2], 3)
    with pytest.raises(BadSum):
        core.partition_from_text("5,1,1")
    assert core.partition_from_json(core.partition_to_json(p)) == p
    s = seq(3, 3, (1, 1, 2), (1, 8, 0))
    assert core.sequence_from_text(core.sequence_to_text(s), 3, 3) == s
    obj = core.sequence_to_json_obj(s)
    assert obj[0] == {"src": 1, "level": 0, "size": 1, "dst": 2}
