import random

import pytest

from patavoid.morphic import (Morphism, MorphicWordSpec, MorphismError, SyncViolation,
                              adequate_span, catalog_names, fixed_point_prefix, is_synchronizing,
                              load_morphism, sqf_image_factors, sqf_pre_images, stable_factor_set)
from patavoid.words import Word, enumerate_square_free, factors, is_square_free

UNIFORM = [n for n in catalog_names() if n.startswith("m_")]


def test_parse_format_and_errors(tmp_path):
    g = Morphism.parse("# comment\n0 -> 0111\n\n1 -> 01  # trailing\n2 -> 00\n", name="gy")
    assert g.images == (b"\0\1\1\1", b"\0\1", b"\0\0") and g.width is None
    assert Morphism.parse(str(g)) == Morphism.parse(str(g))
    for bad in ["0 -> ", "0 -> 01\n0 -> 10", "1 -> 01", "0 => 01", "x -> 01"]:
        with pytest.raises(MorphismError):
            Morphism.parse(bad)
    path = tmp_path / "mine.txt"
    path.write_text("0 -> 01\n1 -> 10\n")
    assert load_morphism(path).images == (b"\0\1", b"\1\0")
    with pytest.raises(MorphismError):
        load_morphism("no_such_morphism")


def test_catalog_contents():
    names = catalog_names()
    for n in ["b2", "b3", "b4", "b5", "g_x", "g_y", "g_z", "g_zbar", "g_t", "g_w"]:
        assert n in names
    assert len(UNIFORM) >= 17
    assert load_morphism("m_abaab").width == 10
    assert load_morphism("m_aa-abab-bb").width == 11
    assert load_morphism("m_abab-baba").width == 50


def test_apply_examples():
    gy = load_morphism("g_y")
    assert str(gy.apply("012")) == "01110100"
    assert str(gy("")) == ""
    with pytest.raises(MorphismError):
        load_morphism("b2").apply(Word.parse("012"))


@pytest.mark.parametrize("name", UNIFORM)
def test_uniform_length_and_synchronizing(name):
    g = load_morphism(name)
    q = g.width
    assert q is not None and g.domain_size == 3
    ok, why = is_synchronizing(g)
    assert ok, why
    for w in enumerate_square_free(3, 5)[:10]:
        assert len(g.apply(w)) == q * len(w)


def test_synchronizing_examples():
    bad = Morphism.from_images(["00", "01", "11"])
    ok, why = is_synchronizing(bad)
    assert not ok and why == SyncViolation(0, 0, 0, 1)
    # 00 sits at offset 1 of g(01) = 0001
    assert (b"\0\0\0\1").find(b"\0\0", 1) == 1
    assert is_synchronizing(Morphism.from_images(["0", "1", "2"]))[0]


def test_fixed_point_prefixes():
    assert str(fixed_point_prefix("b3", 12)) == "012021012102"
    assert str(fixed_point_prefix("b2", 8)) == "01101001"
    assert str(fixed_point_prefix("g_y(b3)", 8)) == "01110100"
    long = fixed_point_prefix("b3", 2000)
    for n in (1, 50, 333, 1000):
        assert fixed_point_prefix("b3", n) == long[:n]
    assert is_square_free(long)


def test_spec_parse():
    s = MorphicWordSpec.parse("g_y(b3)")
    assert s.name == "g_y(b3)" and s.codomain_size == 2
    assert MorphicWordSpec.parse("b3").codomain_size == 3
    with pytest.raises(MorphismError):
        MorphicWordSpec.parse("g_y(")


def test_stable_factor_set():
    facs, prefix = stable_factor_set("b3", 6)
    assert facs == factors(prefix, 6)
    assert facs == factors(fixed_point_prefix("b3", 4 * len(prefix)), 6)


def test_sqf_pre_images_cover_square_free_words():
    pre = sqf_pre_images(6)
    assert set(enumerate_square_free(3, 6)) <= set(pre)
    assert all(is_square_free(w) for w in pre)


def test_sqf_image_factors_against_oracle(oracle):
    gy = load_morphism("g_y")
    got = {str(u) for u in sqf_image_factors(gy, 6, 3)}
    gy_img = {"0": "0111", "1": "01", "2": "00"}
    expect = set()
    for w in oracle.square_free(3, 6):
        img = "".join(gy_img[c] for c in w)
        expect |= {img[i:i + 3] for i in range(len(img) - 2)}
    assert got == expect
    assert "111" in got and any("11" in u for u in got)
    assert sqf_image_factors(gy, 6, 3) == sqf_image_factors(gy, 6, 3)


def test_sqf_image_factors_span_guard():
    g = load_morphism("m_abaab")
    assert adequate_span(g, 25) == 5
    with pytest.raises(MorphismError):
        sqf_image_factors(g, 4, 25)
    q = g.width
    facs = sqf_image_factors(g, adequate_span(g, q), q)
    for d in range(3):
        assert Word(g.images[d], g.codomain) in facs


def test_complement():
    gy = load_morphism("g_y")
    assert gy.complement().image_text(0) == "1000"
    with pytest.raises(MorphismError):
        load_morphism("b3").complement()


def test_random_uniform_lengths():
    rng = random.Random(3)
    g = load_morphism("m_aaa")
    for _ in range(20):
        w = Word.parse("".join(rng.choice("012") for _ in range(rng.randint(1, 15))), 3)
        assert len(g(w)) == g.width * len(w)
