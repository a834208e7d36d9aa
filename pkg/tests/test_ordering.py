import json

import pytest
from hypothesis import given, strategies as st

from pdmosc.errors import ConstraintViolation, UnknownScheme
from pdmosc.ordering import (
    SCHEMES,
    Hermiticity,
    OrderingMeans,
    classify_hermiticity,
    derived_means,
    load_ordering,
    make_ordering,
    named_scheme,
    ordering_from_dict,
)


def test_ml_means():
    m = derived_means(named_scheme("mathews-lakshmanan"))
    assert (m.alpha_bar, m.gamma_bar, m.alphagamma_bar) == (-0.5, -0.5, 0.0)
    assert classify_hermiticity(m) is Hermiticity.HERMITIAN


def test_carinena_is_non_hermitian():
    m = derived_means(named_scheme("carinena"))
    assert (m.alpha_bar, m.gamma_bar, m.alphagamma_bar) == (-0.5, 0.0, 0.0)
    assert classify_hermiticity(m) is Hermiticity.NON_HERMITIAN
    assert m.discriminant == pytest.approx(0.25)


def test_zhu_kroemer_and_bdd():
    zk = derived_means(named_scheme("zhu-kroemer"))
    assert zk.alphagamma_bar == 0.25 and zk.discriminant == 1.0
    b = derived_means(named_scheme("ben-daniel-duke"))
    assert (b.alpha_bar, b.gamma_bar, b.alphagamma_bar) == (0.0, 0.0, 0.0)


def test_scheme_lookup_is_case_insensitive():
    assert named_scheme(" Carinena ").name == "carinena"


def test_unknown_scheme():
    with pytest.raises(UnknownScheme, match="weyl"):
        named_scheme("weyl")


def test_exponent_constraint_reports_term():
    with pytest.raises(ConstraintViolation) as info:
        make_ordering([(0.5, 0, 0, -1), (0.5, 0, 0, 0)])
    assert info.value.index == 1


def test_weights_must_sum_to_one():
    with pytest.raises(ConstraintViolation):
        make_ordering([(0.7, 0, -1, 0)])


def test_empty_ordering_rejected():
    with pytest.raises(ConstraintViolation):
        make_ordering([])


def test_validity_example_means():
    m = derived_means(make_ordering([(0.5, 2, -2, -1), (0.5, -2, 0, 1)]))
    assert (m.alpha_bar, m.gamma_bar, m.alphagamma_bar) == (0.0, 0.0, -2.0)
    assert m.discriminant == -8.0


def test_dict_roundtrip(tmp_path):
    for name in SCHEMES:
        o = named_scheme(name)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(o.to_dict()))
        assert derived_means(load_ordering(path)) == derived_means(o)


def test_load_single_element_list(tmp_path):
    path = tmp_path / "o.json"
    path.write_text(json.dumps([named_scheme("carinena").to_dict()]))
    assert load_ordering(path).name == "carinena"
    path.write_text(json.dumps([named_scheme("carinena").to_dict()] * 2))
    with pytest.raises(ConstraintViolation):
        load_ordering(path)


def test_malformed_dict():
    with pytest.raises(ConstraintViolation):
        ordering_from_dict({"terms": [{"w": 1, "alpha": 0}]})


exps = st.floats(-3, 3, allow_nan=False)


@given(st.lists(st.tuples(exps, exps), min_size=1, max_size=4), st.data())
def test_means_are_weighted_averages(pairs, data):
    raw = data.draw(st.lists(st.floats(0.05, 1.0), min_size=len(pairs), max_size=len(pairs)))
    total = sum(raw)
    w = [r / total for r in raw]
    w[-1] = 1.0 - sum(w[:-1])
    terms = [(wi, a, -1.0 - a - g, g) for wi, (a, g) in zip(w, pairs)]
    m = derived_means(make_ordering(terms))
    assert m.alpha_bar == pytest.approx(sum(wi * a for wi, (a, _) in zip(w, pairs)), abs=1e-12)
    assert m.gamma_bar == pytest.approx(sum(wi * g for wi, (_, g) in zip(w, pairs)), abs=1e-12)
    lo = min(a * g for a, g in pairs)
    hi = max(a * g for a, g in pairs)
    assert lo - 1e-9 <= m.alphagamma_bar <= hi + 1e-9


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_discriminant_identity(a, g, ag):
    m = OrderingMeans(a, g, ag)
    assert m.discriminant == pytest.approx((g - a) ** 2 + 4 * ag, abs=1e-12)
