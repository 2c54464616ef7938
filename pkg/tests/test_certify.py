import json

import pytest

from patavoid.certify import (BOUNDED, CERTIFIED, REFUTED, congruence_discharges, load_claims,
                              verify_claim, verify_formula, verify_squares)
from patavoid.formula import parse_formula
from patavoid.morphic import Morphism, MorphismError, load_morphism
from patavoid.occurrence import avoids
from patavoid.words import Word, find_square


def test_squares_pass_and_refute():
    g = load_morphism("m_aa-abab-bb")
    assert verify_squares(g, 4).verdict == CERTIFIED
    bad = verify_squares(g, 3)
    assert bad.verdict == REFUTED
    (check,) = [c for c in bad.checks if not c.passed]
    w = Word.parse(check.counterexample, 2)
    hit = find_square(w, 3)
    assert hit is not None and hit.period >= 3


def test_squares_fifty_uniform():
    assert verify_squares("m_abab-baba", 3).verdict == CERTIFIED


def test_non_synchronizing_morphism_is_refuted():
    g = Morphism.from_images(["00", "01", "11"], name="bad")
    cert = verify_squares(g, 1)
    assert cert.verdict == REFUTED
    assert not cert.checks[0].passed


def test_easy_path():
    cert = verify_formula("m_aa-abab-bb", "AA.ABAB.BB", 4)
    assert cert.verdict == CERTIFIED
    assert [c.name for c in cert.checks] == ["easy"]


def test_congruence_discharge():
    f = parse_formula("ABA.BAAB.BAB")
    assert congruence_discharges(f, "A", 10, 3)
    assert not congruence_discharges(parse_formula("ABAAB"), "B", 10, 3)
    cert = verify_formula("m_aba-baab-bab", f, 3)
    assert cert.verdict == CERTIFIED
    assert any(c.name == "congruence" and c.passed for c in cert.checks)


def test_reduction_bounded_then_certified():
    g = load_morphism("m_abaab")
    low = verify_formula(g, "ABAAB", 3)
    assert low.verdict == BOUNDED
    assert all(c.counterexample is None for c in low.checks)
    high = verify_formula(g, "ABAAB", 3, x_bound=10)
    assert high.verdict == CERTIFIED
    red = high.checks[-1]
    assert red.bound["x_bound"] == 10 and red.bound["saturated"]


def test_guards():
    with pytest.raises(MorphismError):
        verify_formula("m_abaab", "ABAAB", 11)  # t > q
    with pytest.raises(MorphismError):
        verify_squares("g_y", 3)  # not uniform
    with pytest.raises(MorphismError):
        verify_formula("m_abaab", "ABC.CBA", 3)


def test_claim_reverse_and_json():
    r = verify_claim("m_abaab", "ABAAB", 3, reverse=True)
    assert [str(c.constraints) for c in r.formulas] == ["ABAAB", "BAABA"]
    payload = json.loads(json.dumps(r.to_json()))
    assert payload["verdict"] == r.verdict
    assert all("checks" in c for c in payload["formulas"])


def test_refuted_claim_carries_witness():
    r = verify_claim("m_aa-abab-bb", "AA.ABAB.BB", 3)
    assert r.verdict == REFUTED


def test_certified_images_really_avoid():
    g = load_morphism("m_aba-baab-bab")
    from patavoid.morphic import fixed_point_prefix
    img = g.apply(fixed_point_prefix("b3", 60))
    assert avoids(img, "ABA.BAAB.BAB") and find_square(img, 3) is None


def test_all_catalog_claims():
    claims = load_claims()
    assert len(claims) == 20
    assert len({str(c.formula) for c in claims}) == 18
    for c in claims:
        r = verify_claim(c.morphism, c.formula, c.t, c.reverse)
        assert r.verdict in (CERTIFIED, BOUNDED), (c, r.verdict)
        assert r.squares.verdict == CERTIFIED
        if c.formula == parse_formula("ABA.BAAB.BAB"):
            assert r.verdict == CERTIFIED
