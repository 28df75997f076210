from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ccp import popularity as pm
from ccp.errors import IndexOutOfRange, NotNormalized, OutOfRange, ParseError, RangeError, SizeTooSmall
from ccp.numerics import Backend, binomial


def test_from_values_rational(pop4):
    assert pop4.n == 4
    assert pop4.exact
    assert pop4[3] == Fraction(3, 10)


def test_from_values_errors():
    with pytest.raises(NotNormalized):
        pm.from_values([0.5, 0.5, 0.1])
    with pytest.raises(OutOfRange):
        pm.from_values([1.0, 0.0])
    with pytest.raises(SizeTooSmall):
        pm.from_values([Fraction(1)])
    with pytest.raises(NotNormalized):
        pm.from_values([Fraction(1, 3), Fraction(1, 3)])


def test_float_tolerance_and_renormalize():
    pm.from_values([0.1, 0.2, 0.3, 0.4 + 5e-13])
    with pytest.raises(NotNormalized):
        pm.from_values([0.1, 0.2, 0.3, 0.4 + 1e-9])
    pop = pm.from_values([1.0, 1.0, 2.0], renormalize=True)
    assert pop.probs == (0.25, 0.25, 0.5)


def test_uniform():
    assert pm.uniform(3).probs == (Fraction(1, 3),) * 3
    assert pm.uniform(2).probs == (Fraction(1, 2),) * 2
    assert pm.uniform(4, "float").probs == (0.25,) * 4
    with pytest.raises(SizeTooSmall):
        pm.uniform(1)


def test_subset_probability(pop4, pop4_float):
    assert pm.subset_probability(pop4, (1, 3)) == Fraction(2, 5)
    assert pm.subset_probability(pop4_float, (1, 3)) == pytest.approx(0.4)
    assert pm.subset_probability(pop4, ()) == 0
    assert pm.subset_probability(pop4, (1, 2, 3, 4)) == 1
    with pytest.raises(IndexOutOfRange):
        pm.subset_probability(pop4, (5,))


def test_subsets_of_size_order():
    assert list(pm.subsets_of_size(3, 2)) == [(1, 2), (1, 3), (2, 3)]
    assert list(pm.subsets_of_size(4, 0)) == [()]
    with pytest.raises(RangeError):
        pm.subsets_of_size(3, 4)


def test_subsets_exhaustive_counts():
    for n in range(0, 13):
        for j in range(0, n + 1):
            subsets = list(pm.subsets_of_size(n, j))
            assert len(subsets) == len(set(subsets)) == binomial(n, j)
            assert subsets == sorted(subsets)


def test_subsets_are_lazy():
    stream = pm.subsets_of_size(60, 30)
    assert next(stream) == tuple(range(1, 31))


@st.composite
def rational_pops(draw, n_min=2, n_max=9):
    weights = draw(st.lists(st.integers(1, 30), min_size=n_min, max_size=n_max))
    total = sum(weights)
    return pm.from_values([Fraction(w, total) for w in weights])


@given(rational_pops(), st.data())
def test_additivity_and_complement(pop, data):
    labels = list(range(1, pop.n + 1))
    chosen = data.draw(st.lists(st.sampled_from(labels), unique=True))
    J = tuple(sorted(chosen[: len(chosen) // 2]))
    K = tuple(sorted(chosen[len(chosen) // 2:]))
    union = tuple(sorted(J + K))
    assert pm.subset_probability(pop, union) == pm.subset_probability(pop, J) + pm.subset_probability(pop, K)
    rest = tuple(i for i in labels if i not in J)
    assert pm.subset_probability(pop, J) + pm.subset_probability(pop, rest) == 1


def test_parse_documents():
    pop = pm.parse({"probabilities": ["1/10", "2/10", "3/10", "4/10"]})
    assert pop.exact and pop.probs[0] == Fraction(1, 10)
    assert pm.parse({"uniform": 4}).probs == (Fraction(1, 4),) * 4
    with pytest.raises(NotNormalized):
        pm.parse({"probabilities": [0.5, 0.6]})
    dec = pm.parse({"probabilities": ["0.1", "0.2", "0.3", "0.4"]})
    assert dec.backend is Backend.FLOAT
    forced = pm.parse({"probabilities": ["0.1", "0.2", "0.3", "0.4"]}, backend="exact")
    assert forced.probs == (Fraction(1, 10), Fraction(1, 5), Fraction(3, 10), Fraction(2, 5))
    with pytest.raises(ParseError):
        pm.parse({"probabilities": ["a/b", "1/2"]})
    with pytest.raises(ParseError):
        pm.parse({"weights": [1, 2]})


def test_load_file(tmp_path):
    path = tmp_path / "pop.json"
    path.write_text('{"probabilities": ["1/2", "1/3", "1/6"]}')
    assert pm.load(path).probs == (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))
    with pytest.raises(ParseError):
        pm.load(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(ParseError):
        pm.load(tmp_path / "bad.json")
