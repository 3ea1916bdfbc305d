import json
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import full_rank_lattices, presentations
from tfext import serialize as ser
from tfext.completions import embed, padic_make
from tfext.errors import MalformedInput
from tfext.ext import DivisibleType, ExtCocycle, FinAbGroup, cyclic
from tfext.groups import INF, baer_type, localization, presentation
from tfext.lattices import lattice_from_rows, standard
from tfext.lim1 import CochainVector, TruncatedCocycle
from tfext.towers import dual_filtration, dyadic_filtration, scalar_cofiltration, tower_map

F = Fraction


def round_trip(value, decode):
    text = ser.dumps(ser.to_json(value))
    back = decode(json.loads(text))
    assert back == value
    assert ser.dumps(ser.to_json(back)) == text
    return text


def test_rationals():
    assert ser.vector_to_json([F(1, 2), 3, F(-4, 6)]) == ["1/2", "3", "-2/3"]
    assert ser.vector_from_json(["1/2", 3]) == (F(1, 2), F(3))
    with pytest.raises(MalformedInput):
        ser.vector_from_json([True])
    with pytest.raises(MalformedInput):
        ser.matrix_from_json([1, 2])


@given(full_rank_lattices())
def test_lattice_round_trip(a):
    round_trip(a, ser.lattice_from_json)


def test_lattice_accepts_non_canonical_rows():
    d = {"dim": 2, "den": 2, "rows": [[2, 0], [0, 2], [1, 1]]}
    assert ser.lattice_from_json(d) == lattice_from_rows(2, [[1, 0], [0, 1], [F(1, 2), F(1, 2)]])
    with pytest.raises(MalformedInput):
        ser.lattice_from_json({"dim": 1, "den": 0, "rows": [[1]]})
    with pytest.raises(MalformedInput):
        ser.lattice_from_json({"rows": [[1]]})


@given(presentations())
def test_group_round_trip(g):
    round_trip(g, ser.group_from_json)


def test_group_json_shape():
    g = presentation(baer_type(0, {2: 3, 5: INF}), localization(3))
    d = ser.group_to_json(g)
    assert d["rank"] == 2
    assert d["types"][0] == {"default": "0", "exceptions": {"2": 3, "5": "inf"}}
    with pytest.raises(MalformedInput):
        ser.group_from_json({"rank": 3, "types": d["types"]})
    with pytest.raises(MalformedInput):
        ser.baer_type_from_json({"default": "x"})


def test_tower_round_trips():
    round_trip(dyadic_filtration(4, 2), ser.tower_from_json)
    round_trip(scalar_cofiltration(1, [1, 2, 6]), ser.tower_from_json)
    f = dyadic_filtration(4)
    round_trip(tower_map(f, f, range(3), [[F(1)]]), ser.tower_map_from_json)
    with pytest.raises(MalformedInput):
        ser.tower_from_json({"kind": "bogus", "dim": 1, "levels": []})


def test_element_round_trips():
    f = dual_filtration(presentation(localization(2)), 5)
    round_trip(embed(f, [5]), ser.element_from_json)
    d = ser.element_to_json(embed(f, [5]))
    d["chain"] = d["chain"][:-1]
    with pytest.raises(MalformedInput):
        ser.element_from_json(d)


def test_padic_round_trip():
    x = padic_make(3, 2, [[1, 2, 0], [0, 0, 1]], shift=1)
    round_trip(x, ser.padic_from_json)
    one = ser.padic_to_json(padic_make(2, 1, [1, 0, 1]))
    assert one["digits"] == [1, 0, 1] and one["precision"] == 3


def test_lim1_round_trips():
    f = dyadic_filtration(4)
    round_trip(TruncatedCocycle(f, [[1], [2], [4]]), ser.cocycle_from_json)
    round_trip(CochainVector(f, [[3], [2], [4], [8]]), ser.cochain_from_json)


def test_ext_round_trips():
    c = ExtCocycle(cyclic(2), FinAbGroup((), 1), {((1,), (1,)): (1,)})
    text = round_trip(c, ser.ext_cocycle_from_json)
    assert json.loads(text)["table"] == {"(1,1)": [1]}
    round_trip(FinAbGroup((2, 4), 1), ser.fin_group_from_json)
    t = DivisibleType(True, 2, ((3, 1),))
    assert ser.divisible_type_from_json(ser.to_json(t)) == t


@pytest.mark.parametrize(
    "table",
    [{"(2,1)": [1]}, {"1,1": [1]}, {"(1,1)": [1, 2]}, {"(a,b)": [1]}],
)
def test_ext_table_rejects_bad_keys(table):
    d = {"base": {"orders": [2]}, "fiber": {"orders": [], "free_rank": 1}, "table": table}
    with pytest.raises(MalformedInput):
        ser.ext_cocycle_from_json(d)


def test_dumps_is_canonical():
    assert ser.dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
    with pytest.raises(TypeError):
        ser.to_json(object())
    assert ser.to_json(standard(1)) == {"dim": 1, "den": 1, "rows": [[1]]}
