"""Brute-force ground truth on finite models.

Everything in here works with literal sets of element indices — no
depth bounds, no cleverness — so it can sit in judgment over the
generic engine.  `refinement_subgroup` builds the finite-index subgroup
whose left cosets refine all the mixed left/right intersections,
`enumerate_completion` multiplies whole filters out as sets, and
`compare_engine` replays random engine operations against both.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .core import PrecisionExhausted
from .finitemodel import FiniteModel, FiniteModelPair


class OracleError(Exception):
    """A set computation that the construction guarantees cannot fail, failed."""


def refinement_subgroup(model: FiniteModel, N: frozenset, g: int) -> frozenset:
    """A finite-index subgroup M of N such that every set gN ∩ Nh is a
    union of left cosets of M.

    M is N intersected with the conjugates h_i^-1 N h_i, where the h_i
    represent the distinct values of gN ∩ Nh as h runs over the group
    (the empty value included; its conjugate only shrinks M harmlessly).
    """
    gN = model.left_coset(g, N)
    reps: dict[frozenset, int] = {}
    for h in range(model.n):
        key = gN & model.right_coset(N, h)
        reps.setdefault(key, h)
    M = set(N)
    for h in reps.values():
        hinv = model.inv(h)
        M &= {model.mul(model.mul(hinv, x), h) for x in N}
    return frozenset(M)


def is_union_of_left_cosets(model: FiniteModel, subset, M) -> bool:
    return all(model.left_coset(s, M) <= subset for s in subset)


@dataclass(frozen=True)
class CompletionTable:
    """The completion of a finite model, multiplied out literally.

    ``reps[i]`` is the canonical representative (smallest index) of the
    i-th bottom-level coset; ``table[i][j]`` is the coset position of the
    filter product; ``coset_of[x]`` locates the coset of element x.
    """

    model: FiniteModel
    reps: tuple
    table: tuple
    coset_of: tuple

    @property
    def size(self) -> int:
        return len(self.reps)


def enumerate_completion(model: FiniteModel) -> CompletionTable:
    """Multiplication table of the completion, computed by set products.

    The product of the cosets g1·N and g2·N (N the chain bottom) is the
    literal set g1·M·g2·N with M = N ∩ g2·N·g2^-1, which the construction
    promises is the single coset g1·g2·N; that promise is checked for
    every pair, then the table is checked to be a group matching the
    quotient by the bottom (which is normal by the model preconditions).
    """
    N = model.bottom
    seen: dict[frozenset, int] = {}
    reps = []
    coset_of = [None] * model.n
    for x in range(model.n):
        coset = model.left_coset(x, N)
        if coset not in seen:
            seen[coset] = len(reps)
            reps.append(min(coset))
        coset_of[x] = seen[coset]

    table = []
    for g1 in reps:
        row = []
        for g2 in reps:
            g2inv = model.inv(g2)
            M = N & {model.mul(model.mul(g2, x), g2inv) for x in N}
            product = {
                model.mul(model.mul(g1, m), y)
                for m in M
                for y in model.left_coset(g2, N)
            }
            expected = model.left_coset(model.mul(g1, g2), N)
            if product != expected:
                raise OracleError(
                    f"filter product of {model.names[g1]} and {model.names[g2]} "
                    "is not a single coset"
                )
            row.append(coset_of[model.mul(g1, g2)])
        table.append(tuple(row))
    out = CompletionTable(model, tuple(reps), tuple(table), tuple(coset_of))

    # sanity: the table is a group and coincides with the quotient table
    k = out.size
    ident = coset_of[model.e]
    for i in range(k):
        if out.table[ident][i] != i or out.table[i][ident] != i:
            raise OracleError("completion table lost its identity")
    for i in range(k):
        for j in range(k):
            if out.table[i][j] != coset_of[model.mul(reps[i], reps[j])]:
                raise OracleError("completion table differs from the quotient")
    return out


def coherent_chains(model: FiniteModel):
    """All coherent nested left-coset chains (one per bottom coset)."""
    bottoms = {model.left_coset(x, model.bottom) for x in range(model.n)}
    for bottom in sorted(bottoms, key=min):
        g = min(bottom)
        yield [model.left_coset(g, level) for level in model.levels]


def left_right_check(model: FiniteModel, chain) -> bool:
    """Whether a coherent left-coset chain is also a coherent right-coset
    chain: at each level exactly one right coset contains the chain's
    bottom intersection, and those right cosets nest."""
    for d, coset in enumerate(chain):
        level = model.levels[d]
        if len(coset) != len(level):
            return False
        if d > 0 and not coset <= chain[d - 1]:
            return False
    bottom = chain[-1]
    previous = None
    for level in model.levels:
        containing = {model.right_coset(level, b) for b in bottom}
        if len(containing) != 1:
            return False
        right = containing.pop()
        if previous is not None and not right <= previous:
            return False
        previous = right
    return True


@dataclass
class OracleReport:
    model: str
    trials: int
    mismatches: list

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> str:
        payload = {
            "model": self.model,
            "trials": self.trials,
            "mismatches": self.mismatches,
        }
        return json.dumps(payload, indent=2)


def _oracle_conj(model: FiniteModel, cache: dict, g: int, d: int):
    """Least level j >= d uniformly conjugation-stable over g·N_d, by sets."""
    key = (g, d)
    if key not in cache:
        level = model.levels[d]
        coset = model.left_coset(g, level)
        found = None
        for j in range(d, len(model.levels)):
            ok = True
            for x in coset:
                xinv = model.inv(x)
                if not all(
                    model.conj(x, n) in level and model.conj(xinv, n) in level
                    for n in model.levels[j]
                ):
                    ok = False
                    break
            if ok:
                found = j
                break
        cache[key] = found
    return cache[key]


def _best_depth(model, cache, g, cap, budget):
    best = None
    for d in range(cap + 1):
        j = _oracle_conj(model, cache, g, d)
        if j is not None and j <= budget:
            best = d
    return best


def compare_engine(pair: FiniteModelPair, trials: int, rng) -> OracleReport:
    """Replay random mul/inv/eq_at_depth/valuation/right_rep calls and
    check every claim the engine makes against literal set arithmetic."""
    model = pair.model
    table = enumerate_completion(model)
    top = pair.max_depth
    conj_cache: dict = {}
    mismatches = []

    def note(op, inputs, expected, got):
        mismatches.append(
            {"op": op, "inputs": inputs, "expected": str(expected), "got": str(got)}
        )

    def fuzzed(g, d):
        # replace the rep by another member of its coset: nothing may change
        return pair.embed(model.mul(g, pair.sample_level(d, rng)), d)

    for _ in range(trials):
        d1 = rng.randrange(top + 1)
        d2 = rng.randrange(top + 1)
        g1 = rng.randrange(model.n)
        g2 = rng.randrange(model.n)
        f1 = fuzzed(g1, d1)
        f2 = fuzzed(g2, d2)
        coset1 = model.left_coset(f1.rep, model.levels[d1])
        coset2 = model.left_coset(f2.rep, model.levels[d2])
        label = (
            f"{model.names[f1.rep]}@{d1}, {model.names[f2.rep]}@{d2}"
        )

        # mul: depth claim and coset claim
        want_d = _best_depth(model, conj_cache, f2.rep, d2, d1)
        try:
            prod = f1 * f2
            got_d = prod.depth
        except PrecisionExhausted:
            prod = None
            got_d = None
        if got_d != want_d:
            note("mul-depth", label, want_d, got_d)
        if prod is not None and want_d is not None:
            literal = {model.mul(x, y) for x in coset1 for y in coset2}
            claimed = model.left_coset(prod.rep, model.levels[prod.depth])
            if not literal <= claimed:
                note("mul-coset", label, sorted(literal), sorted(claimed))

        # inv
        want_d = _best_depth(model, conj_cache, f1.rep, d1, d1)
        try:
            invf = f1.inverse()
            got_d = invf.depth
        except PrecisionExhausted:
            invf = None
            got_d = None
        if got_d != want_d:
            note("inv-depth", label, want_d, got_d)
        if invf is not None:
            literal = {model.inv(x) for x in coset1}
            claimed = model.left_coset(invf.rep, model.levels[invf.depth])
            if not literal <= claimed:
                note("inv-coset", label, sorted(literal), sorted(claimed))

        # eq_at_depth against literal coset equality
        d = rng.randrange(min(d1, d2) + 1)
        want = model.left_coset(f1.rep, model.levels[d]) == model.left_coset(
            f2.rep, model.levels[d]
        )
        if f1.eq_at_depth(f2, d) != want:
            note("eq_at_depth", f"{label} at {d}", want, not want)

        # valuation by literal downward scan
        want_v = None
        for dd in range(min(d1, d2) + 1):
            same = model.left_coset(f1.rep, model.levels[dd]) == model.left_coset(
                f2.rep, model.levels[dd]
            )
            if not same:
                break
            want_v = dd
        val = f1.valuation(f2)
        got_v = None if val.depth < 0 else val.depth
        if got_v != want_v:
            note("valuation", label, want_v, got_v)
        if (want_v == min(d1, d2)) != val.indistinguishable:
            note("valuation-flag", label, want_v == min(d1, d2), val.indistinguishable)

        # right_rep: the known left coset must sit inside the claimed right coset
        d = rng.randrange(top + 1)
        feasible = (j := _oracle_conj(model, conj_cache, f1.rep, d)) is not None and j <= d1
        try:
            h = f1.right_rep(d)
        except PrecisionExhausted:
            h = None
        if (h is not None) != feasible:
            note("right_rep-feasible", f"{label} at {d}", feasible, h is not None)
        if h is not None:
            if not coset1 <= model.right_coset(model.levels[d], h):
                note("right_rep-coset", f"{label} at {d}", "containment", "violated")

        # products of bottom-depth elements against the completion table
        b1 = pair.embed(g1, top)
        b2 = pair.embed(g2, top)
        try:
            prod = b1 * b2
        except PrecisionExhausted:
            prod = None
        want_class = table.table[table.coset_of[g1]][table.coset_of[g2]]
        if prod is None or table.coset_of[prod.rep] != want_class:
            got = None if prod is None else table.coset_of[prod.rep]
            note("table", f"{model.names[g1]} * {model.names[g2]}", want_class, got)

    return OracleReport(model=model.name, trials=trials, mismatches=mismatches)


def run_model_suite(pair: FiniteModelPair, trials: int, rng) -> OracleReport:
    """Exhaustive refinement/left-right/table checks plus randomized replay."""
    model = pair.model
    mismatches = []

    for d, N in enumerate(model.levels):
        for g in range(model.n):
            M = refinement_subgroup(model, N, g)
            gN = model.left_coset(g, N)
            for h in range(model.n):
                if not is_union_of_left_cosets(model, gN & model.right_coset(N, h), M):
                    mismatches.append(
                        {
                            "op": "refinement",
                            "inputs": f"level {d}, g={model.names[g]}, h={model.names[h]}",
                            "expected": "union of left cosets",
                            "got": "not a union",
                        }
                    )

    for chain in coherent_chains(model):
        if not left_right_check(model, chain):
            mismatches.append(
                {
                    "op": "left-right",
                    "inputs": model.names[min(chain[-1])],
                    "expected": "coherent right chain",
                    "got": "incoherent",
                }
            )

    try:
        enumerate_completion(model)
    except OracleError as err:
        mismatches.append(
            {
                "op": "completion-table",
                "inputs": model.name,
                "expected": "single-coset products",
                "got": str(err),
            }
        )

    report = compare_engine(pair, trials, rng)
    report.mismatches[:0] = mismatches
    return report
