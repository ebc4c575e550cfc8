import pytest

from nearvec.nearfield import dickson_p2, prime_field
from nearvec.properties import (
    PROPERTIES,
    addition_classes_are_cosets,
    distributive_set_conjugates,
    kernel_tuples_share_addition,
    product_quasi_kernel_formula,
    run_properties,
    strata_are_vector_spaces,
)
from nearvec.space import distributive_of, product_space, twisted_space


@pytest.mark.parametrize("name", ["d25_self", "d25_sq", "t513", "t5113"])
def test_all_properties_hold(name, request):
    V = request.getfixturevalue(name)
    for r in run_properties(V):
        assert r.ok, r.line()


def test_properties_on_more_spaces():
    for V in (product_space(dickson_p2(3), 2), twisted_space(7, [1, 5]), product_space(prime_field(3), 3)):
        assert all(r.ok for r in run_properties(V))


def test_property_names_are_unique():
    names = [p(product_space(prime_field(2), 1)).name for p in PROPERTIES]
    assert len(set(names)) == len(names)


def test_cosets_check_counts_every_pair(d25_self):
    r = addition_classes_are_cosets(d25_self)
    assert r.ok and r.checked == 24**3


def test_conjugation_is_nontrivial_in_d25(d25_self, d25):
    # g d g^-1 is still Z5 here, but the check must visit every (u, lambda)
    r = distributive_set_conjugates(d25_self)
    assert r.ok and r.checked == 24 * 24
    u = d25_self.parse("g")
    assert distributive_of(d25_self, u).labels() == ["0", "1", "2", "3", "4"]


def test_kernel_tuples_on_twisted_uses_summands(t513):
    r = kernel_tuples_share_addition(t513)
    assert r.ok and r.checked > 0


def test_product_formula_skips_other_kinds(t513):
    r = product_quasi_kernel_formula(t513)
    assert r.ok and r.checked == 0


def test_strata_check_reports_line(d25_sq):
    r = strata_are_vector_spaces(d25_sq)
    assert r.line().startswith("strata-are-vector-spaces: pass")
