import itertools

import numpy as np
import pytest

import oracles
from nearvec.errors import NotRegularError
from nearvec.nearfield import dickson_p2, prime_field
from nearvec.regularity import (
    CONDITIONS,
    canonical_isomorphism,
    check_dimension_corollary,
    check_span_family,
    compatible,
    condition1_regular,
    condition_suite,
    dim_element_fast,
    direct_sum_map,
    distributive_decomposition,
    is_regular,
    maximal_regular_decomposition,
    regular_components,
)
from nearvec.space import dimension_table, product_space, stratum, twisted_space


def lab(V, vs):
    return [V.label(v) for v in vs]


def compatible_oracle(V, u, v):
    Q = oracles.quasi_kernel_bruteforce(V)
    return any(int(V.add[u, V.act[lam, v]]) in Q for lam in V.scalar.nonzero)


# -- compatibility and condition 1 -----------------------------------------------------


def test_compatible_examples(d25_self, t513):
    ok, lam = compatible(d25_self, 1, d25_self.parse("g"))
    assert ok and lam is not None
    assert d25_self.q_mask[d25_self.add[1, d25_self.act[lam, d25_self.parse("g")]]]
    ok, lam = compatible(t513, t513.parse("(1,0)"), t513.parse("(0,1)"))
    assert not ok and lam is None


def test_compatible_with_itself(t5113):
    for u in t5113.q_star:
        assert compatible(t5113, u, u)[0]


def test_compatible_against_oracle(t5113):
    q = t5113.q_star
    for u, v in itertools.product(q[:6], q[-6:]):
        assert compatible(t5113, u, v)[0] == compatible_oracle(t5113, u, v)


def test_condition1(d25_self, d25_sq, t513):
    assert condition1_regular(d25_self).holds
    assert condition1_regular(d25_sq).holds
    r = condition1_regular(t513)
    assert not r.holds
    assert lab(t513, r.witness) == ["(1,0)", "(0,1)"]


def test_trivial_regular_cases():
    assert is_regular(product_space(prime_field(2), 1))
    assert is_regular(twisted_space(5, [1, 1]))


# -- the condition suite -------------------------------------------------------------------


@pytest.mark.parametrize("name", ["d25_self", "t513", "t5113"])
def test_suite_agrees_everywhere(name, request):
    V = request.getfixturevalue(name)
    want = is_regular(V)
    for u in V.q_star:
        verdict = condition_suite(V, u)
        assert verdict.agree, (V.label(u), verdict.values)
        assert verdict.regular == want
        assert set(verdict.values) == set(CONDITIONS)


def test_suite_on_d25_squared(d25_sq):
    for u in ("(1,1)", "(g,g)", "(1,0)", "(2+g,0)"):
        verdict = condition_suite(d25_sq, d25_sq.parse(u))
        assert all(verdict.values.values())


def test_suite_failures_carry_witnesses(t513):
    verdict = condition_suite(t513, t513.parse("(1,0)"))
    assert not any(verdict.values.values())
    for k, r in verdict.per_condition.items():
        assert r.witness is not None, k


def test_verdict_json(t513):
    data = condition_suite(t513, t513.parse("(1,0)")).to_json()
    assert data["conditions"]["1"]["holds"] is False
    assert data["conditions"]["1"]["witness"] == ["(1,0)", "(0,1)"]
    assert list(data["conditions"]) == [str(k) for k in CONDITIONS]


def test_verdict_tsv(d25_self):
    rows = condition_suite(d25_self, 1).tsv_rows()
    assert len(rows) == 10
    assert rows[0].split("\t")[2:4] == ["1", "true"]


# -- decompositions ---------------------------------------------------------------------------


def test_distributive_decomposition_d25(d25_self):
    dec = distributive_decomposition(d25_self, 1)
    assert [d25_self.scalar.label(x) for x in dec.delta_basis] == ["1", "g"]
    assert [set(lab(d25_self, s)) for s in dec.summands] == [
        {"0", "1", "2", "3", "4"},
        {"0", "g", "2g", "3g", "4g"},
    ]


def test_distributive_decomposition_d25_squared(d25_sq):
    dec = distributive_decomposition(d25_sq, d25_sq.parse("(1,1)"))
    S1, Sg = dec.summands
    assert set(S1) == set(stratum(d25_sq, d25_sq.parse("(1,1)")))
    assert set(Sg) == set(stratum(d25_sq, d25_sq.parse("(g,g)")))
    # unique representation, checked directly
    sums = [int(d25_sq.add[a, b]) for a in S1 for b in Sg]
    assert sorted(sums) == list(range(625))


def test_distributive_decomposition_of_vector_space():
    V = product_space(prime_field(5), 2)
    dec = distributive_decomposition(V, 1)
    assert len(dec.summands) == 1 and len(dec.summands[0]) == 25


def test_distributive_decomposition_rejects_non_regular(t513):
    with pytest.raises(NotRegularError):
        distributive_decomposition(t513, t513.parse("(1,0)"))


def test_direct_sum_map_rejects_overlap(d25_self):
    assert direct_sum_map(d25_self, [[0, 1, 2, 3, 4], [0, 1, 2, 3, 4]]) is None


def test_canonical_isomorphism(d25_self, d25_sq, t513):
    iso = canonical_isomorphism(d25_self, 1)
    assert iso.check() and len(iso.basis) == 1
    iso = canonical_isomorphism(d25_sq, d25_sq.parse("(1,1)"))
    assert lab(d25_sq, iso.basis) == ["(1,0)", "(0,1)"]
    assert iso.check()
    # the coordinate map sends (a, b) with a, b in Z5 to itself
    for a, b in itertools.product(range(5), repeat=2):
        assert iso(a + 25 * b) == a + 25 * b
    with pytest.raises(NotRegularError):
        canonical_isomorphism(t513, t513.parse("(1,0)"))


def test_isomorphism_check_catches_a_broken_map(d25_sq):
    iso = canonical_isomorphism(d25_sq, d25_sq.parse("(1,1)"))
    f = np.array(iso.forward)
    f[[3, 4]] = f[[4, 3]]
    broken = type(iso)(iso.source, iso.target, f, np.argsort(f), iso.basis)
    assert broken.failure() is not None


def test_maximal_regular_decomposition(t513, t5113, d25_self):
    dec = maximal_regular_decomposition(t513)
    assert [sorted(lab(t513, s)) for s in dec.summands] == [
        sorted(f"({a},0)" for a in range(5)),
        sorted(f"(0,{a})" for a in range(5)),
    ]
    dec = maximal_regular_decomposition(t5113)
    assert sorted(len(s) for s in dec.summands) == [5, 25]
    assert len(maximal_regular_decomposition(d25_self).summands) == 1


def test_maximal_summands_are_regular(t5113):
    for s in maximal_regular_decomposition(t5113).summands:
        assert is_regular(t5113.restrict(s.members))


def test_regular_components(t513, d25_self):
    assert lab(t513, regular_components(t513, t513.parse("(1,1)"))) == ["(1,0)", "(0,1)"]
    assert lab(t513, regular_components(t513, 0)) == ["(0,0)", "(0,0)"]
    assert regular_components(d25_self, 7) == (7,)


def test_components_sum_back(t5113):
    for v in t5113.vectors:
        assert t5113.total(regular_components(t5113, v)) == v


# -- dimensions ----------------------------------------------------------------------------------


def test_dimension_corollary(d25_sq, d25_self, t513):
    r = check_dimension_corollary(d25_sq, d25_sq.parse("(1,1)"))
    assert (r.dim_space, r.dim_stratum) == (2, 2)
    r = check_dimension_corollary(d25_self, 1)
    assert (r.dim_space, r.dim_stratum) == (1, 1)
    r = check_dimension_corollary(t513, t513.parse("(1,0)"))
    assert (r.dim_space, r.dim_stratum) == (2, 1)
    assert not r.equal and r.consistent


@pytest.mark.parametrize("name", ["t513", "t5113", "d25_self"])
def test_fast_dimension_matches_search(name, request):
    V = request.getfixturevalue(name)
    table = dimension_table(V)
    for v in V.vectors:
        assert dim_element_fast(V, v) == table[v]


def test_span_family(t513, t5113):
    r = check_span_family(t513, t513.parse("(1,1)"))
    assert r.ok and r.dim == 2 and r.component_dims == (1, 1)
    r = check_span_family(t5113, t5113.parse("(1,1,1)"))
    assert r.ok and r.dim == 2 and sorted(r.component_dims) == [1, 1]


def test_fast_dimension_d9_squared():
    V = product_space(dickson_p2(3), 2)
    table = dimension_table(V)
    assert all(dim_element_fast(V, v) == table[v] for v in V.vectors)
