from hypothesis import given, strategies as st

from pascal_adic import oracles
from pascal_adic.blocks import BlockId, materialize
from pascal_adic.conway import ConwaySeq, conway, d_sequence, interleave, verify_concatenation


def test_first_values():
    assert ConwaySeq().values(16) == [1, 1, 2, 2, 3, 4, 4, 4, 5, 6, 7, 7, 8, 8, 8, 8]


def test_powers_of_two():
    for e in range(1, 16):
        assert conway(1 << e) == 1 << (e - 1)


def test_differences_are_zero_or_one():
    assert set(d_sequence(1 << 16)) == {1, -1}


def test_concatenation_identity():
    assert verify_concatenation(10) == (True, None)
    expected = "".join(oracles.word(n, k) for n in range(1, 9) for k in range(n + 1))
    d = d_sequence(len(expected) + 2)
    assert [1 if ch == "a" else -1 for ch in expected] == d[: len(expected)]


def test_interleave_worked_example():
    # B_{3,1} cut as a|ab... : pieces alternate starting from the left word
    assert interleave(3, 1) == materialize(BlockId(3, 1))


@given(st.integers(2, 13), st.data())
def test_interleave_matches_materialize(n, data):
    k = data.draw(st.integers(1, n - 1))
    assert interleave(n, k) == materialize(BlockId(n, k))
