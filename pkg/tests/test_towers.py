"""Dyadic towers: words, kernels, invariance, the conditionally convergent sum."""

import random

import pytest

from mcctensor.errors import (DepthError, InvarianceError, MissingShiftError,
                              ParseError, TowerValidationError)
from mcctensor.towers import (DyadicTower, act_word, cc_sum, dump_tower,
                              dyadic_solenoid, invariance_level,
                              invariance_level_table, parse_tower,
                              tower_from_reference)


@pytest.fixture(scope="module")
def tower():
    return dyadic_solenoid(3)


def test_solenoid_level_sizes(tower):
    assert tower.max_level == 3
    assert [tower.size(m) for m in range(4)] == [1, 2, 4, 8]
    assert list(tower.level(2).labels) == ["0", "1", "2", "3"]


def test_solenoid_group_and_kernel_sizes(tower):
    assert [len(tower.group(m)) for m in range(4)] == [1, 2, 4, 8]
    # kernel of the projection m -> h has index 2^h
    assert len(tower.kernel(3, 0)) == 8
    assert len(tower.kernel(3, 1)) == 4
    assert len(tower.kernel(3, 2)) == 2
    assert len(tower.kernel(3, 3)) == 1
    with pytest.raises(DepthError):
        tower.kernel(1, 2)


def test_act_word_pushes_values_forward(tower):
    # +1 rotation: the value at position i moves to position i+1
    s = tower.shift_perm(2)
    assert act_word(s, ("x", "x", "x", "y")) == ("y", "x", "x", "x")
    assert act_word(s, ("x", "y", "x", "y")) == ("y", "x", "y", "x")


def test_act_word_is_a_group_action(tower):
    g = tower.group(3)
    rng = random.Random(0)
    for _ in range(25):
        w = tuple(rng.choice("xy") for _ in range(8))
        a, b = rng.choice(g), rng.choice(g)
        ab = tuple(a[b[i]] for i in range(8))
        assert act_word(ab, w) == act_word(a, act_word(b, w))


def test_no_shift_tower_raises():
    plain = DyadicTower([["0"], ["0", "1"]], [{"0": "0", "1": "0"}],
                        {"s": [{}, {"0": "1", "1": "0"}]})
    with pytest.raises(MissingShiftError):
        plain.shift_perm(1)


def test_invariance_level_examples(tower):
    assert invariance_level(tower, ("v", "w"), 1) == 1
    assert invariance_level(tower, ("v", "v"), 1) == 0
    assert invariance_level(tower, ("v", "w", "u", "u"), 2) == 2
    assert invariance_level(tower, ("v", "w", "v", "w"), 2) == 1
    assert invariance_level(tower, ("v",) * 8, 3) == 0


def test_invariance_level_table_examples(tower):
    # the two-word orbit is invariant as a set even though neither word is
    assert invariance_level_table(tower, {("x", "y"), ("y", "x")}, 1) == 0
    assert invariance_level_table(tower, {("x", "y")}, 1) == 1
    assert invariance_level_table(tower, set(), 2) == 0


def test_invariance_level_table_monotone_under_closure(tower):
    rng = random.Random(5)
    for _ in range(40):
        depth = rng.randint(1, 3)
        words = {tuple(rng.choice("xy") for _ in range(tower.size(depth)))
                 for _ in range(rng.randint(1, 4))}
        h = rng.randint(0, depth)
        closed = set()
        for w in words:
            for s in tower.kernel(depth, h):
                closed.add(act_word(s, w))
        assert invariance_level_table(tower, closed, depth) <= h


def test_cc_sum_fixed_point_contributes(tower):
    assert cc_sum(tower, ("x", "y"), {("x", "x")}, depth=1, level=0) == 1


def test_cc_sum_free_orbit_cancels(tower):
    assert cc_sum(tower, ("x", "y"), {("x", "y"), ("y", "x")}, depth=1, level=0) == 0


def test_cc_sum_deeper_example(tower):
    # constant word: fixed at every level, single contribution
    assert cc_sum(tower, ("x", "y"), {("x",) * 4}, depth=2, level=0) == 1
    # the full 4-cycle orbit of xxxy has no fixed words at level 0
    orbit = set()
    w = ("x", "x", "x", "y")
    for _ in range(4):
        orbit.add(w)
        w = act_word(tower.shift_perm(2), w)
    assert len(orbit) == 4
    assert cc_sum(tower, ("x", "y"), orbit, depth=2, level=0) == 0


def test_cc_sum_level_independent_randomized(tower):
    rng = random.Random(11)
    for _ in range(60):
        depth = rng.randint(1, 3)
        h = rng.randint(0, depth)
        support = set()
        for _ in range(rng.randint(1, 5)):
            w = tuple(rng.choice("xy") for _ in range(tower.size(depth)))
            for s in tower.kernel(depth, h):
                support.add(act_word(s, w))
        vals = [cc_sum(tower, ("x", "y"), support, depth, lvl)
                for lvl in range(h, depth + 1)]
        assert len(set(vals)) == 1


def test_cc_sum_rejects_non_invariant_table(tower):
    with pytest.raises(InvarianceError) as e:
        cc_sum(tower, ("x", "y"), {("x", "y")}, depth=1, level=0)
    assert e.value.pair == (("x", "y"), ("y", "x"))


def test_cc_sum_rejects_bad_words(tower):
    with pytest.raises(DepthError):
        cc_sum(tower, ("x", "y"), {("x", "y")}, depth=2, level=0)
    with pytest.raises(InvarianceError):
        cc_sum(tower, ("x", "y"), {("q", "q")}, depth=1, level=0)


def test_two_copy_solenoid():
    t2 = tower_from_reference("dyadic 2 x2")
    assert [t2.size(m) for m in range(3)] == [2, 4, 8]
    assert list(t2.level(1).labels) == ["a0", "a1", "b0", "b1"]
    # one rotation generator per copy: the level-1 group is Z/2 x Z/2
    assert t2.gen_names == ("sa", "sb")
    assert len(t2.group(1)) == 4
    # the shift rotates both copies at once
    s = t2.shift_perm(1)
    assert act_word(s, ("p", "q", "r", "r")) == ("q", "p", "r", "r")


def test_word_pull_factor_compress(tower):
    assert tower.pull_word(("x", "y"), 1, 2) == ("x", "y", "x", "y")
    assert tower.pull_word(("x", "y"), 1, 3) == ("x", "y") * 4
    assert tower.factor_level(("x", "y", "x", "y"), 2) == 1
    assert tower.factor_level(("x", "x", "x", "x"), 2) == 0
    assert tower.factor_level(("x", "x", "x", "y"), 2) == 2
    assert tower.compress_word(("x", "y", "x", "y"), 2, 1) == ("x", "y")
    with pytest.raises(DepthError):
        tower.compress_word(("x", "x", "x", "y"), 2, 1)


def test_words_enumeration(tower):
    ws = list(tower.words(1, ("x", "y")))
    assert ws == [("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]


def test_validation_rejects_bad_fiber():
    # a 3-element fiber is not a power of 2
    with pytest.raises(TowerValidationError):
        DyadicTower([["0"], ["0", "1", "2"]],
                    [{"0": "0", "1": "0", "2": "0"}], {"id": [{}, {}]})


def test_validation_rejects_non_commuting_generator():
    # the swap upstairs does not commute with a projection separating 0,1
    with pytest.raises(TowerValidationError):
        DyadicTower([["0", "1"], ["0", "1", "2", "3"]],
                    [{"0": "0", "1": "0", "2": "1", "3": "1"}],
                    {"s": [{}, {"0": "2", "2": "0"}]})


def test_validation_rejects_odd_group():
    with pytest.raises(TowerValidationError):
        DyadicTower([["0", "1", "2"]], [], {"r": [{"0": "1", "1": "2", "2": "0"}]})


def test_tower_text_roundtrip(tower):
    text = dump_tower(tower)
    back = parse_tower(text, name="dyadic")
    assert [list(l.labels) for l in back.levels] == \
        [list(l.labels) for l in tower.levels]
    assert back.child_to_parent == tower.child_to_parent
    assert back.gen_names == tower.gen_names
    for g in tower.gen_names:
        assert back.gens[g] == tower.gens[g]
    assert back.shift == tower.shift


def test_tower_parse_errors():
    with pytest.raises(ParseError):
        parse_tower("level 0: 0\n")  # no levels: header
    with pytest.raises(ParseError) as e:
        parse_tower("levels: 1\nlevel 0: 0\ngen s 0: (0 1)\n")
    assert e.value.line == 3  # cycle names an unknown label
    with pytest.raises(ParseError):
        parse_tower("levels: 2\nlevel 0: 0\nlevel 1: 0 1\n")  # missing proj


def test_tower_from_reference():
    t = tower_from_reference("dyadic 3")
    assert t.max_level == 3 and t.size(3) == 8
    with pytest.raises(ParseError):
        tower_from_reference("triadic 3")
