import pytest

from nfactorial.errors import BoundExceeded, UsageError
from nfactorial.grfiltration import (
    coinvariant_model,
    filtration,
    gr_series,
    gr_vs_a,
    layer_sign_multiplicities,
    layers_stable,
    validate_coinvariant_model,
)


def test_coinvariant_model():
    model = coinvariant_model(3)
    assert model.dim == 6
    assert model.graded_dims == [1, 2, 2, 1]
    with pytest.raises(BoundExceeded):
        coinvariant_model(7)
    with pytest.raises(UsageError):
        coinvariant_model(0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_validate_coinvariant_model(n):
    assert validate_coinvariant_model(n)


def test_validate_coinvariant_model_bound():
    with pytest.raises(BoundExceeded):
        validate_coinvariant_model(5)


def test_gr_series_small():
    assert gr_series(2, 2) == [1, 1]
    assert gr_series(3, 2) == [1, 4, 1]
    assert sum(gr_series(4, 3)) == 24


def test_filtration_layers():
    filt = filtration(3, 2)
    assert filt.layer_dims == [1, 5, 6]
    assert filt.top_index == 2
    assert layers_stable(filt)
    assert layer_sign_multiplicities(filt) == [0, 0, 1]


def test_filtration_preconditions():
    with pytest.raises(UsageError):
        filtration(3, 1)
    with pytest.raises(BoundExceeded):
        filtration(5, 2, max_n=4)


@pytest.mark.parametrize("p,q,r", [(2, 1, 0), (2, 1, 1), (2, 2, 0), (3, 1, 0), (3, 1, 1)])
def test_gr_matches_harmonics(p, q, r):
    comparison = gr_vs_a(p, q, r)
    assert comparison.equal
    assert comparison.top_ok
    assert comparison.sign_position_ok
    assert comparison.formulas_ok
    assert comparison.passed
    assert comparison.certificate == "exact"


def test_gr_consensus_mode():
    comparison = gr_vs_a(2, 1, 1, mode="modular_consensus")
    assert comparison.gr_dims == [1, 4, 1]
    assert comparison.certificate in ("consensus", "exact")


def test_gr_bound():
    with pytest.raises(BoundExceeded):
        gr_vs_a(2, 3, 1, max_n=6)
