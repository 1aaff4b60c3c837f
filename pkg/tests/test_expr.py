"""Parsing and evaluation of group-word expressions."""

from fractions import Fraction

import pytest

from commensurate import (
    CompletionElement,
    ContractViolation,
    DyadicAffine,
    PrecisionExhausted,
    bs12_pair,
    integers_pair,
    sl2_pair,
)
from commensurate.expr import (
    ExprError,
    PsiValue,
    evaluate,
    parse_expression,
    render,
)
from commensurate.registry import resolve_target

BS = bs12_pair()
Z2 = integers_pair(2)
SL2 = sl2_pair(2)


def ev(src, pair, depth=8):
    return evaluate(src, pair, depth, resolve_target)


# --- parsing ------------------------------------------------------------------

def test_parse_product_of_three():
    node = parse_expression("t*a*t^-1", BS)
    assert render(node) == "t*a^1*t^-1".replace("^1", "")  # sanity on shape


def test_parse_error_position():
    with pytest.raises(ExprError) as err:
        parse_expression("t**a", BS)
    assert err.value.pos == 2


def test_parse_unknown_generator():
    with pytest.raises(ExprError, match="unknown generator"):
        parse_expression("t*b", BS)


def test_parse_unbalanced():
    with pytest.raises(ExprError):
        parse_expression("inv(a", BS)
    with pytest.raises(ExprError):
        parse_expression("(a*t", BS)
    with pytest.raises(ExprError):
        parse_expression("a^t", BS)
    with pytest.raises(ExprError):
        parse_expression("", BS)


def test_parse_trailing_junk():
    with pytest.raises(ExprError):
        parse_expression("a a", BS)


def test_literals_per_instance(s4_pair, z8_pair):
    assert ev("(3/4; -2)", BS).rep == DyadicAffine(Fraction(3, 4), -2)
    assert ev("13", Z2).rep == 13
    assert ev("[[1,0],[1,1]]", SL2).rep == SL2.generators["l"]
    assert s4_pair.format_element(ev("(1 2)(3 4)", s4_pair, 2).rep) == "(1 2)(3 4)"
    assert ev("#5", z8_pair, 3).rep == 5
    with pytest.raises(ExprError):
        ev("3", BS)  # bare integers are not bs12 elements


def test_grouping_parens_vs_perm_literals(s4_pair):
    f = ev("((1 2)*(1 3))^2", s4_pair, 2)
    # (1 2)(1 3) = (1 3 2) composing right to left; squared gives (1 2 3)
    assert s4_pair.format_element(f.rep) == "(1 2 3)"


def test_render_round_trip(s4_pair):
    cases = [
        ("t*a*t^-1*a^-2", BS),
        ("inv(a^3*t^2)", BS),
        ("embed(5)*embed(6)", Z2),
        ("psi(mod:8, embed(13))", Z2),
        ("(a*t)^3*inv(t)", BS),
        ("[[1,1],[0,1]]*h^-2", SL2),
        ("(1 2)*(1 2 3)^2", s4_pair),
    ]
    for src, pair in cases:
        once = render(parse_expression(src, pair))
        again = render(parse_expression(once, pair))
        assert once == again


# --- evaluation semantics -------------------------------------------------------

def test_exact_word_keeps_requested_depth():
    f = ev("t*a*t^-1*a^-2", BS, 6)
    assert f.rep == BS.identity and f.depth == 6


def test_inv_forces_completion_arithmetic():
    f = ev("inv(a^3*t^2)", BS, 2)
    assert f.rep == DyadicAffine(Fraction(-3, 4), -2)
    assert f.depth == 0


def test_embed_products():
    f = ev("embed(5)*embed(6)", Z2, 4)
    assert f.rep == 11 and f.depth == 4


def test_power_of_truncated():
    f = ev("embed(3)^4", Z2, 5)
    assert f.rep == 12 and f.depth == 5
    zero = ev("embed(3)^0", Z2, 5)
    assert zero.rep == 0 and zero.depth == 5
    neg = ev("embed(t)^-2", BS, 6)
    assert neg.rep == DyadicAffine(Fraction(0), -2)
    assert neg.depth == 4  # each inverse-step costs one level here


def test_mixed_exact_and_truncated_products():
    # exact left factor: lifted just deep enough, no depth loss
    f = ev("t*embed(a)", BS, 8)
    assert f.depth == 8
    assert f.rep == DyadicAffine(Fraction(2), 1)
    # truncated left factor: the exact side embeds at the attained depth
    g = ev("embed(a)*t", BS, 8)
    assert g.depth == 7
    assert g.rep == DyadicAffine(Fraction(1), 1)


def test_embed_of_truncated_is_noop():
    f = ev("embed(embed(5))", Z2, 4)
    assert f.depth == 4 and f.rep == 5


def test_precision_exhausted_propagates():
    with pytest.raises(PrecisionExhausted):
        ev("embed(a)*t^5", BS, 3)


def test_contract_violation_propagates():
    with pytest.raises(ContractViolation):
        ev("(1/3; 0)", BS)
    with pytest.raises(ContractViolation):
        ev("[[1,2],[3,4]]", SL2)


def test_psi_expression():
    value = ev("psi(mod:8, embed(13))", Z2, 5)
    assert value == PsiValue("mod:8", 5)


def test_psi_exact_operand_uses_requested_depth():
    assert ev("psi(texp, a^5*t^3)", BS, 8).value == 3
    with pytest.raises(PrecisionExhausted):
        ev("psi(mod:8, 13)", Z2, 2)


def test_psi_cannot_be_multiplied():
    with pytest.raises(ExprError):
        ev("psi(texp, a)*t", BS)
    with pytest.raises(ExprError):
        ev("inv(psi(texp, a))", BS)
    with pytest.raises(ExprError):
        ev("psi(texp, a)^2", BS)


def test_unknown_target_is_reported():
    with pytest.raises(ExprError, match="unavailable"):
        ev("psi(mod:7, 1)", Z2)
    with pytest.raises(ExprError, match="unknown target"):
        ev("psi(nosuch, a)", BS)


def test_mod_target_on_factorial_chain():
    zf = integers_pair("factorial")
    target = resolve_target(zf, "mod:8")
    assert target.kill_level == 4  # 4! = 24 is the first multiple of 8
    assert ev("psi(mod:8, embed(13))", zf, 4).value == 5


def test_evaluate_returns_completion_elements():
    assert isinstance(ev("a", BS), CompletionElement)
