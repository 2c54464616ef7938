import pytest

from patavoid.occurrence import avoids
from patavoid.search import (ConstraintSet, NotAvoidableError, admissible_words, classify_growth,
                             complement_closed, enumerate_avoiders, essential_avoidance_check,
                             extendable_words, growth_statistics, max_avoiding_length)
from patavoid.words import Word, contains_factor, find_square

W = Word.parse
FIG1_SMALL = ["AAB.BBAA", "AAB.BBAB", "AABA.BAAB", "AAB.ABBA", "AAB.ABA.ABB.BBA.BAB.BAA"]


def test_square_free_binary_max_length():
    t = enumerate_avoiders("AA", 2, 10)
    assert t.exhausted and t.max_length == 3
    assert t.counts[3] == 2 and str(t.witness_longest) in {"010", "101"}
    assert all(t.counts.get(n, 0) == 0 for n in range(4, 11))


def test_aab_bbaa_row():
    t = enumerate_avoiders("AAB.BBAA", 2, 30)
    assert (t.max_length, t.total) == (22, 1428)
    assert len(t.witness_longest) == 22 and avoids(t.witness_longest, "AAB.BBAA")
    assert t.to_json()["convention"] == t.convention


@pytest.mark.parametrize("f", FIG1_SMALL)
def test_counts_match_brute_force_up_to_12(oracle, f):
    t = enumerate_avoiders(f, 2, 12)
    for n in range(1, 13):
        expect = sum(1 for w in oracle.binary(n) if not oracle.contains(w, f))
        assert t.counts.get(n, 0) == expect, (f, n)


def test_cube_free_counts_strictly_increase():
    t = enumerate_avoiders("AAA", 2, 30)
    seq = [t.counts[n] for n in range(5, 31)]
    assert all(a < b for a, b in zip(seq, seq[1:]))
    assert not t.exhausted and t.max_length is None and t.status == "limit reached"


def test_binary_counts_are_even():
    for f in FIG1_SMALL + ["AAA", "ABAAB"]:
        t = enumerate_avoiders(f, 2, 24)
        assert all(c % 2 == 0 for c in t.counts.values() if c)


def test_symmetry_shortcut_agrees_with_full_tree():
    for c in ["AAB.ABBA", ConstraintSet.build(["AAA"], sq=3)]:
        a = enumerate_avoiders(c, 2, 26)
        b = enumerate_avoiders(c, 2, 26, symmetry=False)
        assert a.counts == b.counts and a.max_length == b.max_length


def test_forbidden_factors_break_symmetry():
    c = ConstraintSet.build(["AA"], [W("010")])
    assert not c.letter_symmetric(2)
    t = enumerate_avoiders(c, 2, 10)
    # only "101" survives at length 3
    assert t.counts[3] == 1 and t.max_length == 3


def test_threads_give_identical_tables():
    one = enumerate_avoiders("AAB.ABBA", 2, 40)
    many = enumerate_avoiders("AAB.ABBA", 2, 40, threads=4, split_depth=8)
    assert one.counts == many.counts and one.max_length == many.max_length
    assert one.witness_longest == many.witness_longest


def test_budget_status():
    t = enumerate_avoiders("AAA", 2, 60, node_budget=500)
    assert t.status == "budget exhausted" and not t.exhausted and t.max_length is None


def test_constraint_set_validation():
    with pytest.raises(ValueError):
        ConstraintSet.build()
    with pytest.raises(ValueError):
        ConstraintSet.build(sq=0)
    c = ConstraintSet.build(["AAA"], sq=3)
    assert c.admits(W("0011")) and not c.admits(W("001001")) and not c.admits(W("000"))


@pytest.mark.parametrize("formula,t,length", [("AA.ABAB.BB", 3, 18), ("AAA", 3, 29),
                                              ("AAB.ABBA.BAA", 4, 39)])
def test_square_floor_side_claims(formula, t, length):
    tab = enumerate_avoiders(ConstraintSet.build([formula], sq=t), 2, 200)
    assert tab.exhausted and tab.max_length == length
    w = tab.witness_longest
    assert avoids(w, formula) and find_square(w, t) is None


@pytest.mark.parametrize("formula,forbid", [
    ("AA.ABA.ABBA", ["01110001110"]), ("AA.ABA.ABBA", ["010", "0110"]),
    ("ABA.AABB", ["0010", "00110"]), ("BBA.ABA.AABB", ["0010", "00110"]),
    ("AABA.AABB", ["0010", "00110"])])
def test_dichotomies_are_finite(formula, forbid):
    c = ConstraintSet.build([formula], [W(u) for u in forbid])
    n = max_avoiding_length(c, 2, 200)
    assert n is not None and n < 200
    # without the forbidden factors the formula is avoidable beyond that length
    assert max_avoiding_length(formula, 2, n + 5) is None


def test_classify_growth_examples():
    assert classify_growth("AAA", 2, 30).label == "exponential"
    assert classify_growth("ABA.AABB", 2, 30).label == "polynomial"
    v = classify_growth("AABA.AABB", 2, 30)
    assert v.label == "polynomial" and len(v.counts) == 30
    with pytest.raises(NotAvoidableError):
        classify_growth("AA", 2, 20)


def test_growth_statistics_rule():
    ratio, dg = growth_statistics([2 ** n for n in range(1, 15)])
    assert ratio == pytest.approx(2.0) and dg > 2
    ratio, dg = growth_statistics(list(range(10, 40, 2)))
    assert dg == pytest.approx(1.0)
    with pytest.raises(ValueError):
        growth_statistics([1, 2, 3])


def test_extendable_words_margin_zero_and_monotone():
    c = ConstraintSet.build(forbid=[W("010", 3), W("212", 3)], sq=1)
    base = extendable_words(c, 3, 6, 0)
    assert base == set(admissible_words(c, 3, 6))
    prev = base
    for m in range(1, 7):
        cur = extendable_words(c, 3, 6, m)
        assert cur <= prev
        prev = cur
    assert all(not contains_factor(u, W("010", 3)) for u in prev)


def test_essential_check_small_cases():
    c = ConstraintSet.build(forbid=[W("010", 3), W("212", 3)], sq=1)
    r = essential_avoidance_check(["b3"], c, 8, 8)
    assert r.passed and not r.missing_from_generators
    loose = ConstraintSet.build(forbid=[W("010", 3)])
    r = essential_avoidance_check(["b3"], loose, 6, 3)
    assert not r.passed and r.missing_from_generators


def test_complement_closed():
    assert complement_closed([W("0010"), W("1101")])
    assert not complement_closed([W("0010")])
