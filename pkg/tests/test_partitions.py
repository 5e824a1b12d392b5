import pytest

from nfactorial.errors import UsageError
from nfactorial.partitions import (
    Cell,
    Partition,
    box_plus_row,
    cells,
    classify,
    d_k,
    deg_remainder,
    diagram_stats,
    dual,
    is_b_fixed,
    iter_admissible_kr,
    n_k,
    n_k_closed_form,
    n_k_dual_closed_form,
    partitions_of,
    predicted_n_after_step,
    reduce_step,
    staircase,
    staircase_top_degree,
    top_degree_formulas,
)

BOX_PLUS_ROW = [(p, q, r) for p in range(2, 5) for q in range(1, 4) for r in range(p)]


def test_parse_and_format():
    sigma = Partition.parse("3,1,1")
    assert sigma.parts == (3, 1, 1)
    assert str(sigma) == "3,1,1"
    assert sigma.n == 5
    assert sigma.m == 2
    assert sigma[0] == 3 and sigma[7] == 0


@pytest.mark.parametrize("text", ["1,0", "1,2", "", "a,b", "2,-1"])
def test_parse_rejects(text):
    with pytest.raises(UsageError):
        Partition.parse(text)


def test_dual():
    assert dual(Partition((3, 1))) == Partition((2, 1, 1))
    assert dual(Partition((4, 2, 1))) == Partition((3, 2, 1, 1))
    assert dual(Partition((3, 1, 1))) == Partition((3, 1, 1))
    for sigma in partitions_of(6):
        assert dual(dual(sigma)) == sigma


def test_partition_counts():
    assert [len(partitions_of(n)) for n in range(1, 7)] == [1, 2, 3, 5, 7, 11]
    four = partitions_of(4)
    assert four[0] == Partition((4,))
    assert four[-1] == Partition((1, 1, 1, 1))


def test_cells_row_major():
    assert cells(Partition((2, 1))) == [Cell(0, 0), Cell(1, 0), Cell(0, 1)]


def test_diagram_stats():
    stats = diagram_stats(Partition((2, 1)))
    assert stats.d_sigma == 2
    assert stats.d_ideal == 2
    assert stats.N == 0
    stats = diagram_stats(Partition((4, 2, 1)))
    assert stats.d_ideal == 4
    assert stats.N == 3


def test_d_k_and_n_k():
    sigma = Partition((2, 1))
    assert [d_k(sigma, k) for k in (1, 2, 3)] == [0, 1, 3]
    assert [n_k(sigma, k) for k in (0, 1, 2)] == [3, 1, 0]
    with pytest.raises(UsageError):
        d_k(sigma, 0)


def test_admissible_pairs():
    assert list(iter_admissible_kr(Partition((2, 1)))) == [(2, 2), (3, 1), (3, 2), (3, 3)]


def test_box_plus_row():
    assert box_plus_row(2, 1, 1) == Partition((2, 1))
    assert box_plus_row(2, 2, 0) == Partition((2, 2))
    assert box_plus_row(3, 2, 1) == Partition((3, 3, 1))
    with pytest.raises(UsageError):
        box_plus_row(2, 1, 2)
    with pytest.raises(UsageError):
        box_plus_row(1, 3, 0)


@pytest.mark.parametrize("p,q,r", BOX_PLUS_ROW)
def test_closed_forms_agree(p, q, r):
    sigma = box_plus_row(p, q, r)
    for k in range(p + 2):
        assert n_k(sigma, k) == n_k_closed_form(p, q, r, k)
    for k in range(q + 3):
        assert n_k(dual(sigma), k) == n_k_dual_closed_form(p, q, r, k)


@pytest.mark.parametrize("p,q,r", BOX_PLUS_ROW)
def test_top_degree_identity(p, q, r):
    n = p * q + r
    d, d_dual = top_degree_formulas(p, q, r)
    assert p * d + d_dual == n * (n - 1) // 2


def test_top_degree_anchor():
    assert top_degree_formulas(2, 1, 1) == (1, 1)
    assert top_degree_formulas(2, 2, 0) == (2, 2)
    assert top_degree_formulas(3, 1, 1) == (1, 3)


def test_staircase():
    assert staircase(3) == Partition((3, 2, 1))
    for m in range(1, 6):
        assert staircase_top_degree(m) == diagram_stats(staircase(m)).d_sigma


def test_deg_remainder():
    assert deg_remainder(2) == (1, 1)
    assert deg_remainder(3) == (2, 0)
    assert deg_remainder(4) == (4, 1)
    assert deg_remainder(6) == (staircase_top_degree(3), 0)


def test_classify():
    assert classify(Partition((3, 2, 1))).kind == "staircase"
    assert classify(Partition((2, 2))).kind == "box"
    c = classify(Partition((3, 3, 1)))
    assert (c.kind, c.p, c.q, c.r) == ("box_plus_row", 3, 2, 1)
    assert classify(Partition((4, 2, 1))).kind == "other"
    assert is_b_fixed(Partition((3, 1)))
    assert not is_b_fixed(Partition((2, 2)))


def test_reduce_step_n_recursion():
    sigma = Partition((4, 2, 1))
    stepped = reduce_step(sigma)
    assert stepped == Partition((4, 2, 1, 1))
    assert predicted_n_after_step(sigma) == 2
    assert diagram_stats(stepped).N == 2


def test_reduce_step_prediction_everywhere():
    for n in range(1, 7):
        for sigma in partitions_of(n):
            assert predicted_n_after_step(sigma) == diagram_stats(reduce_step(sigma)).N
