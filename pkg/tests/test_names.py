import pytest

from src.names import (
    ClassResolver,
    NameSyntaxError,
    canonical_key,
    format_expression,
    parse_expression,
    substitute_family,
)


def test_parse_expression_sorts_and_cancels():
    terms = parse_expression("tau^2 x + h0^7 h5")
    assert terms == [(0, (("h0", 7), ("h5", 1))), (2, (("x", 1),))]
    assert parse_expression("h1 + h1") == []
    assert parse_expression("0") == []
    assert format_expression(terms) == "h0^7 h5 + tau^2 x"


def test_bracketed_names_and_indexed_generators():
    assert parse_expression("tau [h2 g]") == [(1, (("[h2g]", 1),))]
    assert parse_expression("h0(1)^2") == [(0, (("h0(1)", 2),))]
    assert canonical_key("P^2 h1") == (("P", 2), ("h1", 1))


def test_syntax_errors():
    with pytest.raises(NameSyntaxError):
        parse_expression("h1 $ h2")
    with pytest.raises(NameSyntaxError):
        parse_expression("h1 + ")
    with pytest.raises(NameSyntaxError):
        canonical_key("tau h1")


def test_family_substitution():
    assert substitute_family("h1^{k} e0", "k", 3) == "h1^3 e0"
    assert substitute_family("h1^{k+2} d0", "k", 3) == "h1^5 d0"


def test_resolver_degrees_from_label_table(motivic_chart):
    resolver = ClassResolver(motivic_chart, labels=[(4, 17, 10, "e0"), (4, 14, 8, "d0")])
    assert resolver.degree(parse_expression("h1^2 d0")) == (6, 16, 10)
    assert resolver.degree(parse_expression("tau e0")) == (4, 17, 9)
    assert not resolver.in_frontier((4, 17, 10))
    with pytest.raises(KeyError):
        resolver.degree(parse_expression("zz"))


def test_resolver_uses_product_edges(motivic_chart):
    resolver = ClassResolver(motivic_chart)
    h1c0 = resolver.resolve("h1 c0")
    assert (h1c0.s, h1c0.stem, h1c0.weight) == (4, 9, 6)
    assert not h1c0.is_zero
    assert resolver.resolve("h0 c0").is_zero
