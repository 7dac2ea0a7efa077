import itertools
from collections import Counter
from math import factorial

import pytest
from hypothesis import given, strategies as st

from hlrvkit.exact import RatFunc
from hlrvkit.partitions import (Partition, arm_leg_hook, conjugate, count_syt, dominance_leq, n_stat,
                                n_stat_by_conjugate, n_stat_by_legs, partitions_of, ssyt_enumerate,
                                z_lambda, z_lambda_qt)

q, t = RatFunc.var("q"), RatFunc.var("t")


def pentagonal_counts(limit):
    """Partition numbers from Euler's pentagonal recurrence (independent oracle)."""
    p = [1] + [0] * limit
    for n in range(1, limit + 1):
        k, total = 1, 0
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def all_partitions_upto(n):
    return [lam for m in range(n + 1) for lam in partitions_of(m)]


partition_st = st.integers(0, 8).flatmap(lambda n: st.sampled_from(partitions_of(n)))


def test_partitions_of_small():
    assert partitions_of(0) == [Partition(())]
    assert partitions_of(3) == [(3,), (2, 1), (1, 1, 1)]


def test_partition_counts_match_pentagonal_recurrence():
    p = pentagonal_counts(12)
    assert len(partitions_of(10)) == 42
    for n in range(13):
        lams = partitions_of(n)
        assert len(lams) == p[n] == len(set(lams))


def test_partitions_are_reverse_lex():
    for n in range(1, 8):
        lams = partitions_of(n)
        assert lams == sorted(lams, reverse=True)


def test_conjugate_examples():
    assert conjugate((4, 4, 3, 1)) == (4, 3, 3, 2)
    assert conjugate(()) == ()
    for lam in all_partitions_upto(8):
        assert conjugate(conjugate(lam)) == lam


def test_arm_leg_hook_examples():
    assert arm_leg_hook((4, 4, 3, 1), (2, 1)) == (3, 2, 6)
    assert arm_leg_hook((1,), (1, 1)) == (0, 0, 1)
    lam = Partition((2, 1))
    # hooks counted by hand: (1,1) -> 3, (1,2) -> 1, (2,1) -> 1
    assert sum(arm_leg_hook(lam, s)[2] for s in lam.cells()) == 3 + 1 + 1
    with pytest.raises(ValueError):
        arm_leg_hook((2, 1), (2, 2))


def test_n_stat_examples():
    assert n_stat((5,)) == 0
    for m in range(1, 7):
        assert n_stat((1,) * m) == m * (m - 1) // 2
    assert n_stat((4, 4, 3, 1)) == 13


def test_n_stat_three_formulas_agree():
    for lam in all_partitions_upto(10):
        assert n_stat(lam) == n_stat_by_legs(lam) == n_stat_by_conjugate(lam)


def test_z_lambda():
    for n in range(1, 7):
        assert z_lambda((1,) * n) == factorial(n)
        assert z_lambda((n,)) == n
    assert z_lambda_qt((2, 1)) == 2 * (1 - q ** 2) * (1 - q) / ((1 - t ** 2) * (1 - t))


def cycle_type(perm):
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        out.append(length)
    return tuple(sorted(out, reverse=True))


@pytest.mark.parametrize("n", range(1, 7))
def test_class_sizes_by_brute_force(n):
    counts = Counter(cycle_type(p) for p in itertools.permutations(range(n)))
    assert set(counts) == set(partitions_of(n))
    for lam in partitions_of(n):
        assert counts[lam] == factorial(n) // z_lambda(lam)


def brute_force_ssyt(shape, weight):
    cells = [(i, j) for i, r in enumerate(shape) for j in range(r)]
    content = [v + 1 for v, m in enumerate(weight) for _ in range(m)]
    out = set()
    for filling in set(itertools.permutations(content)):
        T = dict(zip(cells, filling))
        rows_ok = all(T[(i, j)] <= T[(i, j + 1)] for (i, j) in cells if (i, j + 1) in T)
        cols_ok = all(T[(i, j)] < T[(i + 1, j)] for (i, j) in cells if (i + 1, j) in T)
        if rows_ok and cols_ok:
            out.add(tuple(tuple(T[(i, j)] for j in range(r)) for i, r in enumerate(shape)))
    return out


def test_ssyt_examples():
    (T,) = ssyt_enumerate((2,), (1, 1))
    assert [list(r) for r in T.rows] == [[1, 2]]
    assert ssyt_enumerate((1, 1), (2,)) == []
    assert len(ssyt_enumerate((2, 1), (1, 1, 1))) == 2


def test_ssyt_against_brute_force():
    for n in range(1, 6):
        for shape in partitions_of(n):
            for weight in partitions_of(n):
                got = {tuple(tuple(r) for r in T.rows) for T in ssyt_enumerate(shape, weight)}
                assert got == brute_force_ssyt(shape, weight)
                assert all(T.is_valid() and T.weight() == tuple(weight) for T in ssyt_enumerate(shape, weight))


def test_standard_tableaux_count_by_hook_formula():
    for n in range(1, 7):
        for lam in partitions_of(n):
            assert len(ssyt_enumerate(lam, (1,) * n)) == count_syt(lam)
        assert sum(count_syt(lam) ** 2 for lam in partitions_of(n)) == factorial(n)


def test_dominance_examples():
    assert dominance_leq((1, 1, 1), (3,))
    assert dominance_leq((2, 2), (3, 1))
    assert not dominance_leq((3, 1), (2, 2))
    assert not dominance_leq((3, 1, 1, 1), (2, 2, 2)) and not dominance_leq((2, 2, 2), (3, 1, 1, 1))
    with pytest.raises(ValueError):
        dominance_leq((2,), (1,))


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.sampled_from(partitions_of(n)),
                                                      st.sampled_from(partitions_of(n)))))
def test_dominance_reversed_by_conjugation(pair):
    lam, mu = pair
    assert dominance_leq(lam, mu) == dominance_leq(conjugate(mu), conjugate(lam))


@given(partition_st)
def test_hook_multiset_symmetric_under_conjugation(lam):
    lam = Partition(lam)
    lamc = conjugate(lam)
    hooks = sorted(arm_leg_hook(lam, s)[2] for s in lam.cells())
    hooks_c = sorted(arm_leg_hook(lamc, s)[2] for s in lamc.cells())
    assert hooks == hooks_c


@given(partition_st)
def test_conjugate_transposes_diagram(lam):
    lam = Partition(lam)
    assert {(j, i) for i, j in lam.cells()} == set(conjugate(lam).cells())


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
