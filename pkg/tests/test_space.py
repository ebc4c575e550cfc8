import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from nearvec.errors import InvariantError, NotFreeError, NotInQuasiKernelError, ParseError, SizeBoundError
from nearvec.nearfield import dickson_p2, distributive_elements, prime_field, verify_nearfield
from nearvec.space import (
    additions_index,
    closure,
    dim_element,
    dimension_table,
    distributive_of,
    in_K,
    induced_addition,
    is_scalar_basis,
    product_space,
    quasi_kernel,
    scalar_basis,
    span,
    stratum,
    table_space,
    twisted_space,
    verify_space,
)


def labels(V, vs):
    return {V.label(v) for v in vs}


# -- construction and invariants -------------------------------------------------


@pytest.mark.parametrize("name", ["d25_self", "d25_sq", "t513", "t5113"])
def test_spaces_satisfy_axioms(name, request):
    V = request.getfixturevalue(name)
    rep = verify_space(V)
    assert rep.ok, rep.text()


def test_product_space_componentwise(d25_sq, d25):
    V = d25_sq
    x, y = V.parse("(1+g,3)"), V.parse("(2g,4+g)")
    assert V.label(V.plus(x, y)) == "(1+3g,2+g)"
    lam = d25.parse("g")
    assert V.label(V.scale(lam, x)) == "(" + d25.label(d25.mul[lam, d25.parse("1+g")]) + "," + d25.label(d25.mul[lam, 3]) + ")"


def test_tuple_encoding_little_endian(t513):
    assert t513.parse("(1,0)") == 1
    assert t513.parse("(0,1)") == 5
    assert t513.label(7) == "(2,1)"


def test_twisted_rejects_non_free_exponent():
    with pytest.raises(NotFreeError) as e:
        twisted_space(5, [1, 2])
    assert "gcd(2,4)=2" in str(e.value)


def test_size_bound():
    with pytest.raises(SizeBoundError):
        product_space(prime_field(5), 6)


def test_non_free_table_space_fails_verification(z5):
    # Z5 acting on Z5 by a -> a^2 x is not free (and not additive in a)
    add = np.array(z5.add)
    act = np.array([[(a * a * x) % 5 for x in range(5)] for a in range(5)])
    rep = verify_space(table_space(z5, add, act))
    assert not rep.ok
    assert not rep["action-free"].ok


def test_parse_errors(d25_sq):
    with pytest.raises(ParseError):
        d25_sq.parse("(1,2,3)")
    with pytest.raises(ParseError):
        d25_sq.parse("(1,7g)")


# -- quasi-kernel ------------------------------------------------------------------


def test_quasi_kernel_of_d25_is_everything(d25_self):
    assert len(quasi_kernel(d25_self)) == 25


def test_quasi_kernel_of_vector_spaces():
    assert len(quasi_kernel(product_space(prime_field(5), 2))) == 25
    assert len(quasi_kernel(product_space(prime_field(5), 3))) == 125
    assert len(quasi_kernel(twisted_space(5, [1, 1]))) == 25


def test_quasi_kernel_of_d25_squared(d25_sq, d25):
    # every lam*(a, b) with a, b in Z5, computed with pair arithmetic
    want = set()
    for lam in range(25):
        for a in range(5):
            for b in range(5):
                want.add(oracles.dickson_mul(lam, a, 5) + 25 * oracles.dickson_mul(lam, b, 5))
    got = set(quasi_kernel(d25_sq))
    assert got == want
    assert len(got) == 145


def test_quasi_kernel_twisted_axes(t513):
    Q = quasi_kernel(t513)
    assert len(Q) == 9
    assert set(Q) == oracles.quasi_kernel_bruteforce(t513)
    assert all(t513.coords[v].min() == 0 for v in Q)


@pytest.mark.parametrize("name", ["d25_self", "t513", "t5113"])
def test_quasi_kernel_matches_bruteforce(name, request):
    V = request.getfixturevalue(name)
    assert set(quasi_kernel(V)) == oracles.quasi_kernel_bruteforce(V)


def test_quasi_kernel_brute_d9_squared(d9):
    V = product_space(d9, 2)
    assert set(quasi_kernel(V)) == oracles.quasi_kernel_bruteforce(V)


def test_quasi_kernel_closed_under_action(d25_sq):
    Q = set(quasi_kernel(d25_sq))
    for v in Q:
        assert set(d25_sq.act[:, v].tolist()) <= Q


# -- induced additions ------------------------------------------------------------------


def test_induced_addition_at_one_is_field_addition(d25_self, d25):
    A = induced_addition(d25_self, d25.one)
    assert np.array_equal(A.table, d25.add)


def test_induced_addition_at_g(d25_self, d25):
    g = d25_self.parse("g")
    A = induced_addition(d25_self, g)
    P = d25.parse
    assert d25.label(A(P("g"), P("1"))) == "4+g"
    assert d25.label(A(P("1"), P("1"))) == "2"
    for a in range(25):
        for b in range(25):
            assert A(a, b) == oracles.induced_addition_bruteforce(d25_self, g, a, b)


def test_induced_nearfields_verify(d25_sq):
    for u in d25_sq.q_star[:40]:
        assert verify_nearfield(d25_sq.nearfield_of(u)).ok


def test_induced_addition_outside_quasi_kernel(t513):
    with pytest.raises(NotInQuasiKernelError) as e:
        induced_addition(t513, t513.parse("(1,1)"))
    assert e.value.code == "not-in-quasikernel"
    assert e.value.witness is not None
    with pytest.raises(NotInQuasiKernelError):
        induced_addition(t513, t513.zero)


def test_induced_addition_witness_is_real(t513):
    u = t513.parse("(1,1)")
    with pytest.raises(NotInQuasiKernelError) as e:
        induced_addition(t513, u)
    a, b = (int(x) for x in e.value.witness)
    s = t513.add[t513.act[a, u], t513.act[b, u]]
    assert s not in set(t513.act[:, u].tolist())


def test_distributive_of(d25_self, d25):
    for u in ("1", "g", "2+3g"):
        assert distributive_of(d25_self, d25_self.parse(u)).labels() == ["0", "1", "2", "3", "4"]
    V = product_space(prime_field(7), 2)
    assert len(distributive_of(V, 1)) == 7


# -- strata and additions ------------------------------------------------------------------


def test_stratum_of_one(d25_self):
    assert labels(d25_self, stratum(d25_self, 1)) == {"0", "1", "2", "3", "4"}


@pytest.mark.parametrize("d", range(5))
def test_stratum_of_d_plus_g(d25_self, d25, d):
    u = d25.parse(f"{d}+g" if d else "g")
    want = {oracles.dickson_mul(u, c, 5) for c in range(5)}
    assert set(stratum(d25_self, u)) == want


def test_stratum_of_one_one(d25_sq):
    S = stratum(d25_sq, d25_sq.parse("(1,1)"))
    assert set(S) == {a + 25 * b for a in range(5) for b in range(5)}


def test_additions_index_d25(d25_self):
    idx = additions_index(d25_self, 1)
    assert len(idx.cosets) == 6
    assert [d25_self.label(r) for r in idx.representatives] == ["1", "g", "1+g", "2+g", "3+g", "4+g"]
    assert idx.bijective


def test_additions_index_d25_distinct_tables(d25_self):
    # compare the six coset addition tables pairwise
    tables = [induced_addition(d25_self, r).table for r in additions_index(d25_self, 1).representatives]
    for i in range(6):
        for j in range(i + 1, 6):
            assert not np.array_equal(tables[i], tables[j])


def test_additions_index_twisted_not_surjective(t513):
    idx = additions_index(t513, t513.parse("(1,0)"))
    assert idx.well_defined and idx.injective
    assert not idx.surjective


def test_in_K(d25):
    d = distributive_elements(d25)
    assert in_K(d, (1, 3))
    assert not in_K(d, (1, d25.parse("g")))
    assert in_K(d, (0, 0))


# -- spans, bases, dimension ---------------------------------------------------------------


def test_span_examples(d25_self, t513):
    assert len(span(d25_self, [d25_self.parse("2+g")])) == 25
    assert set(span(d25_self, [])) == {0}
    axis = span(t513, [t513.parse("(1,0)")])
    assert labels(t513, axis) == {f"({a},0)" for a in range(5)}


def test_span_matches_closure_oracle(t5113):
    gens = [t5113.parse("(1,0,0)"), t5113.parse("(0,0,1)")]
    assert set(span(t5113, gens)) == oracles.additive_closure(t5113, gens)


def test_scalar_basis_lengths(d25_self, d25_sq, t513):
    assert len(scalar_basis(d25_self)) == 1
    assert len(scalar_basis(d25_sq)) == 2
    B = scalar_basis(t513)
    assert [t513.label(b) for b in B] == ["(1,0)", "(0,1)"]
    assert is_scalar_basis(d25_sq, scalar_basis(d25_sq))


def test_scalar_basis_order_invariance(d25_sq, t5113):
    for V in (d25_sq, t5113):
        assert len(scalar_basis(V, "reverse")) == len(scalar_basis(V))


def test_restriction_to_an_axis():
    V = twisted_space(5, [1, 3])
    sub = V.restrict(span(V, [V.parse("(1,0)")]))
    assert len(scalar_basis(sub)) == 1
    with pytest.raises(InvariantError):
        V.restrict([0, 1])


def test_dim_element_examples(d25_sq, t513):
    assert dim_element(d25_sq, 0) == 0
    assert dim_element(d25_sq, d25_sq.parse("(1,g)")) == 2
    assert dim_element(t513, t513.parse("(1,1)")) == 2
    assert dim_element(t513, t513.parse("(3,0)")) == 1


def test_dimension_table_matches_layered_search(t5113):
    table = dimension_table(t5113)
    q = t5113.q_star
    for v in range(0, t5113.size, 7):
        assert table[v] == oracles.min_sum_length(t5113, v, q)


def test_closure_restricted_scalars(d25_self, d25):
    d = distributive_elements(d25)
    mask = closure(d25_self, [1], scalars=d.members)
    assert set(np.flatnonzero(mask)) == {0, 1, 2, 3, 4}


D25_SQ = product_space(dickson_p2(5), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 624), st.integers(0, 624), st.integers(0, 24))
def test_action_is_additive_random(v, w, lam):
    V = D25_SQ
    assert V.act[lam, V.add[v, w]] == V.add[V.act[lam, v], V.act[lam, w]]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 3))
def test_prime_products_are_vector_spaces(p, n):
    if p**n > 400:
        return
    V = product_space(prime_field(p), n)
    assert len(quasi_kernel(V)) == V.size
    assert len(scalar_basis(V)) == n
    assert len(V.distinct_additions) == 1
