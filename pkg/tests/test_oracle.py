"""The brute-force suites against themselves and against the engine."""

import random

import pytest

from commensurate import finite_model_pair, parse_model
from commensurate.oracle import (
    coherent_chains,
    compare_engine,
    enumerate_completion,
    is_union_of_left_cosets,
    left_right_check,
    refinement_subgroup,
    run_model_suite,
)

SEED = 7


def _subgroup(model, members):
    return all(
        model.mul(a, model.inv(b)) in members for a in members for b in members
    )


def test_refinement_collapses_on_abelian(z8_pair):
    model = z8_pair.model
    for level in model.levels:
        for g in range(model.n):
            assert refinement_subgroup(model, level, g) == level


def test_refinement_postcondition_s4(s4_pair):
    model = s4_pair.model
    N = model.levels[1]  # the rotation subgroup of K
    g = s4_pair.parse_literal("(1 4)")
    M = refinement_subgroup(model, N, g)
    assert _subgroup(model, M)
    assert M <= N
    gN = model.left_coset(g, N)
    for h in range(model.n):
        piece = gN & model.right_coset(N, h)
        assert is_union_of_left_cosets(model, piece, M)


def test_refinement_exhaustive_everywhere(model_pairs):
    for pair in model_pairs:
        model = pair.model
        for N in model.levels:
            for g in range(model.n):
                M = refinement_subgroup(model, N, g)
                gN = model.left_coset(g, N)
                for h in range(model.n):
                    piece = gN & model.right_coset(N, h)
                    assert is_union_of_left_cosets(model, piece, M)


def test_completion_table_sizes(s4_pair, s4_d8_pair, z8_pair):
    assert enumerate_completion(s4_pair.model).size == 24
    assert enumerate_completion(s4_d8_pair.model).size == 6
    assert enumerate_completion(z8_pair.model).size == 8


def test_completion_table_s4_d8_is_nonabelian(s4_d8_pair):
    table = enumerate_completion(s4_d8_pair.model).table
    assert any(table[i][j] != table[j][i] for i in range(6) for j in range(6))


def test_completion_table_z8_is_cyclic(z8_pair):
    table = enumerate_completion(z8_pair.model)
    # repeated products of the class of #1 must sweep all 8 classes
    one = table.coset_of[1]
    seen, cur = set(), table.coset_of[0]
    for _ in range(8):
        seen.add(cur)
        cur = table.table[cur][one]
    assert len(seen) == 8


def test_completion_of_trivial_chain_is_quotient_by_k():
    text = """
kind: perm
points: 4
name: s4_over_a4
gens: (1 2), (1 2 3 4)
K: (1 2 3), (1 2)(3 4)
"""
    model = parse_model(text)
    assert [len(s) for s in model.levels] == [12]
    assert enumerate_completion(model).size == 2


def test_left_right_check_all_chains(model_pairs):
    for pair in model_pairs:
        for chain in coherent_chains(pair.model):
            assert left_right_check(pair.model, chain)


def test_left_right_check_rejects_incoherent(s4_pair):
    model = s4_pair.model
    chains = list(coherent_chains(model))
    # splice the bottom of one chain onto the top of another
    a, b = chains[0], chains[-1]
    assert not left_right_check(model, [a[0], a[1], b[2]])


def test_compare_engine_clean(model_pairs):
    for pair in model_pairs:
        report = compare_engine(pair, 300, random.Random(SEED))
        assert report.mismatches == []
        assert report.trials == 300


def test_compare_engine_detects_corruption():
    text = """
name: broken
kind: perm
points: 4
gens: (1 2), (1 2 3 4)
K: (1 2), (1 2 3)
level: (1 2 3)
level: -
corrupt_conj_depth: true
"""
    pair = finite_model_pair(parse_model(text))
    report = compare_engine(pair, 100, random.Random(SEED))
    assert report.mismatches
    assert any("depth" in m["op"] or "coset" in m["op"] for m in report.mismatches)


def test_run_model_suite_reports(s4_pair):
    report = run_model_suite(s4_pair, 50, random.Random(SEED))
    assert report.ok
    payload = report.to_json()
    assert '"model": "s4"' in payload and '"mismatches": []' in payload


def test_suite_deterministic_under_seed(z8_pair):
    a = run_model_suite(z8_pair, 80, random.Random(SEED)).to_json()
    b = run_model_suite(z8_pair, 80, random.Random(SEED)).to_json()
    assert a == b
