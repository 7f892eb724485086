import pytest

from core.errors import PresentationSyntaxError, UnknownGenerator
from core.groups import Word, abelianize, commutator, make_Y_n_presentation
from core.presentations import load_presentation, parse_presentation, parse_word, render_presentation


def test_parse_brackets_and_powers():
    p = parse_presentation("gens: a b c\nrels: [a,b], a^2 b^-1")
    a, b = p.gen("a"), p.gen("b")
    assert p.generators == ("a", "b", "c")
    assert p.relators == (commutator(a, b), Word(((0, 2), (1, -1))))


def test_parse_is_whitespace_insensitive():
    assert parse_presentation("gens:a b;rels:[a,b]") == parse_presentation("gens: a  b\n\nrels:  [ a , b ]\n")


def test_parse_equations_and_identity():
    p = parse_presentation("gens: a b c\nrels: c = a b, a = 1")
    a, b, c = p.gen("a"), p.gen("b"), p.gen("c")
    assert p.relators == (c * b.inverse() * a.inverse(), a)


def test_parse_nested_brackets():
    p = parse_presentation("gens: x y z\nrels: [[x,y],z]")
    x, y, z = p.gen("x"), p.gen("y"), p.gen("z")
    assert p.relators == (commutator(commutator(x, y), z),)


def test_parse_empty_relator_list():
    p = parse_presentation("gens: a\nrels:")
    assert abelianize(p).free_rank == 1


def test_parse_rejects_undeclared_generators():
    with pytest.raises(UnknownGenerator):
        parse_presentation("gens: a\nrels: b")


def test_parse_reports_syntax_errors():
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("gens a b")


def test_render_then_parse_gives_the_same_presentation():
    p = make_Y_n_presentation(3)
    assert parse_presentation(render_presentation(p)) == p


def test_parse_word():
    p = parse_presentation("gens: a b\nrels:")
    assert parse_word("a b^-1 [a,b]", p) == p.gen("a") * p.gen("b", -1) * commutator(p.gen("a"), p.gen("b"))


def test_load_presentation(tmp_path):
    path = tmp_path / "torus.txt"
    path.write_text("gens: a b\nrels: [a,b]\n", encoding="utf-8")
    assert abelianize(load_presentation(path)).free_rank == 2
