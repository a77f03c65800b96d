import pytest

from gridfree.enumeration import canonical_max_set, enumerate_max_sets, profile_dp_count_by_size
from gridfree.errors import ResourceLimitError
from gridfree.grid import GridDims, VertexSet, find_unit_squares, is_c4_free
from gridfree.letters import (
    COUNTEREXAMPLE_6X6,
    LetterArrays,
    all_letter_arrays,
    avoids_forbidden_patterns,
    block_deficits,
    corner_squares,
    count_realizable_pairs,
    decode_letter_arrays,
    encode_max_set,
    enumerate_valid_pairs,
    find_unrealizable_pairs,
)

WORKED_4X4 = VertexSet.from_vertices(4, [
    (1, 1), (2, 1), (3, 1), (4, 1), (1, 2), (3, 2),
    (1, 3), (2, 3), (3, 3), (4, 3), (2, 4), (4, 4),
])

# the 6x6 figure, vertex by vertex
COUNTEREXAMPLE_FIGURE = VertexSet.from_vertices(6, [
    (1, 2), (1, 3), (1, 4), (1, 6), (2, 1), (2, 2), (2, 4), (2, 5), (2, 6),
    (3, 1), (3, 3), (3, 4), (3, 5), (4, 1), (4, 2), (4, 3), (4, 5), (4, 6),
    (5, 1), (5, 3), (5, 4), (5, 5), (6, 1), (6, 2), (6, 3), (6, 5), (6, 6),
])


def test_worked_example():
    arrays = encode_max_set(WORKED_4X4)
    assert arrays.display_rows() == (["LL", "RR"], ["UU", "UU"])
    assert {d.missing for d in block_deficits(WORKED_4X4)} == {(2, 2), (4, 2), (1, 4), (3, 4)}
    assert decode_letter_arrays(arrays) == WORKED_4X4


def test_canonical_encodes_all_R_all_U():
    for n in (2, 4, 6):
        a, b = encode_max_set(canonical_max_set(GridDims(n))).display_rows()
        assert set("".join(a)) == {"R"} and set("".join(b)) == {"U"}


def test_decode_single_block():
    arrays = LetterArrays.from_display(["R"], ["U"])
    assert decode_letter_arrays(arrays) == VertexSet.from_vertices(2, [(1, 1), (2, 1), (1, 2)])


def test_counterexample_decodes_to_figure():
    s = decode_letter_arrays(COUNTEREXAMPLE_6X6)
    assert s == COUNTEREXAMPLE_FIGURE
    assert len(s) == 27
    assert avoids_forbidden_patterns(COUNTEREXAMPLE_6X6)
    assert find_unit_squares(s) == [(2, 4)]
    assert corner_squares(COUNTEREXAMPLE_6X6) == [(2, 4)]


def test_encode_rejects_non_maximum():
    with pytest.raises(ValueError):
        encode_max_set(VertexSet.full(4))
    with pytest.raises(ValueError):
        encode_max_set(VertexSet.empty(2))


def test_forbidden_patterns():
    assert not avoids_forbidden_patterns(LetterArrays.from_display(["LR", "RR"], ["UU", "UU"]))
    assert not avoids_forbidden_patterns(LetterArrays.from_display(["RR", "RR"], ["UU", "DU"]))
    assert avoids_forbidden_patterns(LetterArrays.from_display(["RR", "RR"], ["DU", "UU"]))
    assert avoids_forbidden_patterns(LetterArrays.from_display(["RR", "RR"], ["UU", "UU"]))


@pytest.mark.parametrize("m, expected", [(1, 4), (2, 81), (3, 4096)])
def test_valid_pair_count(m, expected):
    constructed = list(enumerate_valid_pairs(m))
    assert len(constructed) == len(set(constructed)) == expected == (m + 1) ** (2 * m)
    assert all(avoids_forbidden_patterns(p) for p in constructed)
    if m <= 2:
        filtered = {p for p in all_letter_arrays(m) if avoids_forbidden_patterns(p)}
        assert filtered == set(constructed)


def test_valid_pair_count_m3_by_filter():
    # a full 4^18 filter is too slow; A and B are independent, so filter each side
    from itertools import product
    rows_ok = sum(1 for r in product("LR", repeat=3) if "".join(r).find("LR") < 0)
    cols_ok = sum(1 for c in product("UD", repeat=3) if "".join(c).find("DU") < 0)
    assert rows_ok ** 3 * cols_ok ** 3 == 4096


@pytest.mark.parametrize("m", [1, 2])
def test_encode_decode_bijection_small(m):
    for arrays in all_letter_arrays(m):
        s = decode_letter_arrays(arrays)
        assert len(s) == 3 * m * m
        assert encode_max_set(s) == arrays


@pytest.mark.parametrize("n", [2, 4, 6])
def test_maximum_sets_avoid_patterns_and_round_trip(n):
    for s in enumerate_max_sets(GridDims(n)):
        arrays = encode_max_set(s)
        assert avoids_forbidden_patterns(arrays)
        assert decode_letter_arrays(arrays) == s


@pytest.mark.parametrize("m", [1, 2, 3])
def test_realizable_pairs_equal_maximum_sets(m):
    n = 2 * m
    realizable = [p for p in enumerate_valid_pairs(m) if is_c4_free(decode_letter_arrays(p))]
    assert len(realizable) == count_realizable_pairs(m)
    assert len(realizable) == profile_dp_count_by_size(GridDims(n)).counts[3 * m * m]
    assert {decode_letter_arrays(p) for p in realizable} == set(enumerate_max_sets(GridDims(n)))
    for p in realizable:
        assert encode_max_set(decode_letter_arrays(p)) == p


def test_realizable_counts():
    assert count_realizable_pairs(1) == 4
    assert count_realizable_pairs(3) < 4096


@pytest.mark.parametrize("m", [1, 2, 3])
def test_cross_block_square_characterisation(m):
    for p in enumerate_valid_pairs(m):
        squares = find_unit_squares(decode_letter_arrays(p))
        assert squares == corner_squares(p)


def test_find_unrealizable_pairs():
    assert find_unrealizable_pairs(1) == []
    found = find_unrealizable_pairs(3)
    assert any(f.arrays == COUNTEREXAMPLE_6X6 and (2, 4) in f.squares for f in found)
    assert len(found) == 4096 - 3600
    for f in found:
        assert avoids_forbidden_patterns(f.arrays)
        assert not is_c4_free(decode_letter_arrays(f.arrays))
    assert len(find_unrealizable_pairs(3, limit=5)) == 5


def test_pair_ceiling():
    with pytest.raises(ResourceLimitError):
        next(enumerate_valid_pairs(7))
    with pytest.raises(ResourceLimitError):
        count_realizable_pairs(4, max_count=1000)


def test_text_and_json_formats():
    text = COUNTEREXAMPLE_6X6.to_text()
    assert text == "LLL\nRRR\nLLL\n\nDUU\nDUU\nDUU\n"
    assert LetterArrays.from_text(text) == COUNTEREXAMPLE_6X6
    obj = COUNTEREXAMPLE_6X6.to_json_obj()
    assert obj["A"][0] == ["L", "L", "L"] and obj["B"][0] == ["D", "U", "U"]
    assert LetterArrays.from_json_obj(obj) == COUNTEREXAMPLE_6X6


def test_invalid_letters():
    with pytest.raises(ValueError):
        LetterArrays.from_display(["LU"], ["UD"])
    with pytest.raises(ValueError):
        LetterArrays.from_display(["L"], ["X"])
