import json
import logging
from math import factorial

import pytest

from hlrvkit import macdonald as mac
from hlrvkit.exact import MPoly, RatFunc
from hlrvkit.macdonald import (J_in_p, P_in_p, Q_in_p, b_c_factors, kostka_qt, macdonald_P,
                               macdonald_P_oracle, macdonald_table, modified_macdonald)
from hlrvkit.partitions import conjugate, count_syt, partitions_of
from hlrvkit.symfunc import (e_product_in_p, hall_pair_qt, m_coefficients, s_coefficients,
                             schur_in_p)

q, t = RatFunc.var("q"), RatFunc.var("t")
SWAP = {"q": ("t", 1), "t": ("q", 1)}
UPTO4 = [lam for n in range(1, 5) for lam in partitions_of(n)]
UPTO3 = [lam for n in range(1, 4) for lam in partitions_of(n)]


def specialize(coeffs, point=None, subs=None):
    out = {}
    for mu, c in coeffs.items():
        v = c.partial_eval(point) if point else c.monomial_subs(subs)
        if v:
            out[mu] = v
    return out


@pytest.mark.parametrize("lam", UPTO4, ids=str)
def test_tableau_formula_matches_gram_schmidt(lam):
    assert macdonald_P(lam) == macdonald_P_oracle(lam)


@pytest.mark.parametrize("lam", UPTO4, ids=str)
def test_P_is_unitriangular(lam):
    from hlrvkit.partitions import dominance_leq
    P = macdonald_P(lam)
    assert P[lam] == RatFunc(1)
    assert all(dominance_leq(mu, lam) for mu in P)


@pytest.mark.parametrize("lam", UPTO4, ids=str)
def test_P_at_q_equals_t_is_schur(lam):
    n = sum(lam)
    assert specialize(macdonald_P(lam), subs={"q": ("t", 1)}) == m_coefficients(schur_in_p(lam), n)


@pytest.mark.parametrize("lam", UPTO4, ids=str)
def test_P_at_t_equals_one_is_monomial(lam):
    assert specialize(macdonald_P(lam), point={"t": 1}) == {lam: RatFunc(1)}


@pytest.mark.parametrize("lam", UPTO4, ids=str)
def test_P_at_q_equals_one_is_elementary(lam):
    n = sum(lam)
    assert specialize(macdonald_P(lam), point={"q": 1}) == m_coefficients(e_product_in_p(conjugate(lam)), n)


def test_small_cases():
    assert macdonald_P((1,)) == {(1,): RatFunc(1)}
    assert hall_pair_qt(P_in_p((2,)), P_in_p((1, 1))) == RatFunc(0)
    b, c, cp = b_c_factors((1,))
    assert (c, cp) == (1 - t, 1 - q)
    assert b_c_factors(())[0] == RatFunc(1)


@pytest.mark.parametrize("lam", UPTO4, ids=str)
def test_c_prime_is_dual_of_c(lam):
    _, c, cp = b_c_factors(tuple(lam))
    _, c_dual, _ = b_c_factors(tuple(conjugate(lam)))
    assert cp == c_dual.monomial_subs(SWAP)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_P_Q_biorthogonal(n):
    for lam in partitions_of(n):
        for mu in partitions_of(n):
            assert hall_pair_qt(P_in_p(lam), Q_in_p(mu)) == RatFunc(int(lam == mu))


@pytest.mark.parametrize("lam", UPTO3, ids=str)
def test_J_norm(lam):
    _, c, cp = b_c_factors(tuple(lam))
    assert hall_pair_qt(J_in_p(lam), J_in_p(lam)) == c * cp


def test_modified_macdonald_examples():
    assert modified_macdonald((1,)) == schur_in_p((1,))
    assert kostka_qt((2,)) == {(2,): MPoly.const(1), (1, 1): MPoly.var("q")}
    assert kostka_qt((1, 1)) == {(2,): MPoly.const(1), (1, 1): MPoly.var("t")}


@pytest.mark.parametrize("lam", UPTO4, ids=str)
def test_modified_macdonald_duality(lam):
    K, Kd = kostka_qt(lam), kostka_qt(conjugate(lam))
    assert {mu: c.monomial_subs(SWAP) for mu, c in K.items()} == Kd


@pytest.mark.parametrize("lam", UPTO4, ids=str)
def test_kostka_polynomial_with_nonnegative_coefficients(lam):
    for mu, c in kostka_qt(lam).items():
        assert isinstance(c, MPoly)
        assert all(v > 0 for v in c.terms.values())


@pytest.mark.parametrize("lam", UPTO4, ids=str)
def test_kostka_matches_schur_expansion(lam):
    n = sum(lam)
    expected = {mu: RatFunc(c) for mu, c in kostka_qt(lam).items()}
    assert s_coefficients(modified_macdonald(lam), n) == expected


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_kostka_column_sums_at_one(n):
    for mu in partitions_of(n):
        total = sum(count_syt(lam) * c.eval({"q": 1, "t": 1}) for lam, c in kostka_qt(mu).items())
        assert total == factorial(n)


def test_cache_round_trip(tmp_path):
    mac.clear_memory_cache()
    fresh = macdonald_table(3, tmp_path)
    path = tmp_path / "macdonald_n3.json"
    assert path.exists()
    data = json.loads(path.read_text())
    assert data["version"] == mac.CACHE_VERSION
    assert {tuple(e["lambda"]) for e in data["entries"]} == set(partitions_of(3))
    mac.clear_memory_cache()
    loaded = macdonald_table(3, tmp_path)
    for lam in partitions_of(3):
        assert loaded[lam].Htilde_in_s == fresh[lam].Htilde_in_s
        assert loaded[lam].P_in_m == fresh[lam].P_in_m
        assert loaded[lam].Htilde_in_p == fresh[lam].Htilde_in_p


@pytest.mark.parametrize("content", ["{not json", json.dumps({"version": -1, "entries": []}),
                                     json.dumps({"version": 1, "entries": []})])
def test_bad_cache_falls_back_to_recomputation(tmp_path, caplog, content):
    mac.clear_memory_cache()
    (tmp_path / "macdonald_n2.json").write_text(content)
    with caplog.at_level(logging.WARNING, logger="hlrvkit.macdonald"):
        table = macdonald_table(2, tmp_path)
    assert caplog.records
    assert table[(2,)].Htilde_in_s == {(2,): MPoly.const(1), (1, 1): MPoly.var("q")}
    assert json.loads((tmp_path / "macdonald_n2.json").read_text())["version"] == mac.CACHE_VERSION


def test_parallel_table_matches_serial(tmp_path):
    mac.clear_memory_cache()
    par = macdonald_table(3, None, jobs=2)
    mac.clear_memory_cache()
    ser = macdonald_table(3, None, jobs=1)
    assert {l: e.Htilde_in_s for l, e in par.items()} == {l: e.Htilde_in_s for l, e in ser.items()}
