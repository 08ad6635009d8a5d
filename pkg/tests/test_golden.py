"""Frozen reference values.

self_intersection.json was produced by the exact combinatorial search at
radius 12, which never touches floating-point geometry.  term_maps.json is a
regression record of engine output.
"""

import json
from pathlib import Path

import pytest

from geobracket import engine
from geobracket.bracket import BracketResult, bracket, bracket_bar, bracket_power
from geobracket.surface import builtin
from geobracket.words import canonical_class, parse_word

GOLDEN = Path(__file__).parent / "golden"
SL = json.loads((GOLDEN / "self_intersection.json").read_text())
TERMS = json.loads((GOLDEN / "term_maps.json").read_text())


@pytest.mark.parametrize("name", sorted(SL))
def test_self_intersection_table(name):
    s = builtin(name)
    got = {w: engine.self_intersection_number(s, canonical_class(parse_word(w))) for w in SL[name]}
    assert got == SL[name]


@pytest.mark.parametrize("name", sorted(TERMS))
def test_term_maps(name):
    s = builtin(name)
    for key, expected in TERMS[name].items():
        a, b = key.split()
        if a == "bar":
            r = bracket_bar(s, canonical_class(parse_word(b)))
        elif a == "power2":
            r = bracket_power(s, canonical_class(parse_word(b)), 2)
        else:
            r = bracket(s, canonical_class(parse_word(a)), canonical_class(parse_word(b)))
        assert r == BracketResult.from_dict(expected), key
