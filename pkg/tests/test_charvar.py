import random

import pytest
from hypothesis import given, strategies as st

from hlrvkit.braidwalk import Perm
from hlrvkit.charvar import (CharVarSpec, EigenvalueData, HlrvGrid, MotiveSum, SpecError, c_from_f,
                             cell_decomposition, cross_check_epoly, dimension, duality_check,
                             e_coefficients, f_from_c, generic_check, hlrv, hlrv_function,
                             hook_polynomial, motive_sum, piece_label, specialize)
from hlrvkit.exact import MPoly, RatFunc, parse_poly
from hlrvkit.partitions import conjugate, partitions_of
from worked_examples import RANK2_CELLS, RANK3_CELLS, perm_of

z, w = RatFunc.var("z"), RatFunc.var("w")
RANK2 = CharVarSpec.parse(0, "1,1;1,1;1,1;1,1")
RANK3 = CharVarSpec.parse(0, "1,1,1;1,1,1;1,1,1")
TORUS1 = CharVarSpec.parse(1, "1")
TORUS2 = CharVarSpec.parse(1, "2")


def poly(text):
    return parse_poly(text)


# -- specs, dimension, genericity ------------------------------------------------

def test_spec_parsing():
    assert RANK2.k == 4 and RANK2.n == 2 and RANK2.very_generic
    assert not CharVarSpec.parse(0, "2,1;2,1;3").very_generic
    for bad in ["2;1,1,1", "1,2", "a", "0"]:
        with pytest.raises(SpecError):
            CharVarSpec.parse(0, bad)
    with pytest.raises(SpecError):
        CharVarSpec.parse(-1, "1")


def test_dimension_examples():
    assert dimension(RANK2) == 2
    assert dimension(RANK3) == 2
    for n in range(1, 5):
        assert dimension(CharVarSpec(1, ((n,),))) == 2


def test_generic_torus():
    for n in range(2, 6):
        spec = CharVarSpec(1, ((n,),))
        for c in range(1, n):
            res = generic_check(spec, EigenvalueData(n, 0, (((-c, ()),),)))
            assert res.generic == (__import__("math").gcd(c, n) == 1)


def test_generic_rank2_example():
    i, minus_i = (1, (0,)), (3, (0,))
    a, a_inv = (0, (1,)), (0, (-1,))
    eig = EigenvalueData(4, 1, ((i, minus_i),) * 3 + ((a, a_inv),))
    assert generic_check(RANK2, eig).generic


def test_not_generic_examples():
    res = generic_check(CharVarSpec(0, ((2,),)), EigenvalueData(1, 0, (((0, ()),),)))
    assert not res.generic and res.witness == ((1,),)
    i, minus_i = (1, ()), (3, ())
    res = generic_check(RANK2, EigenvalueData(4, 0, ((i, minus_i),) * 4))
    assert not res.generic and res.witness is not None
    res = generic_check(CharVarSpec(0, ((1,), (1,))), EigenvalueData(3, 0, (((1, ()),), ((1, ()),))))
    assert not res.generic and "determinant" in res.reason


# -- hook polynomials ------------------------------------------------------------

def test_hook_polynomial_examples():
    assert hook_polynomial((1,), 0) == 1 / ((z ** 2 - 1) * (1 - w ** 2))
    assert hook_polynomial((1,), 1) == (z - w) ** 2 / ((z ** 2 - 1) * (1 - w ** 2))
    assert hook_polynomial((), 2) == RatFunc(1)


@pytest.mark.parametrize("g", [0, 1, 2])
def test_hook_polynomial_symmetries(g):
    swap = {"z": ("w", 1), "w": ("z", 1)}
    for n in range(1, 4):
        for lam in partitions_of(n):
            H = hook_polynomial(tuple(lam), g)
            assert H == hook_polynomial(tuple(conjugate(lam)), g).monomial_subs(swap)
            assert H == H.subs({"z": -z, "w": -w})


# -- HLRV functions --------------------------------------------------------------

def test_rank2_golden():
    res = hlrv(RANK2)
    assert res.ok
    assert res.value_neg == z ** 2 + 4 + w ** 2
    assert res.grid.c == {(2, 0): 1, (0, 0): 4, (0, 2): 1}


def test_rank3_golden():
    res = hlrv(RANK3)
    assert res.ok
    assert res.value_neg == z ** 2 + 6 + w ** 2


@pytest.mark.parametrize("spec", [TORUS1, TORUS2], ids=["n=1", "n=2"])
def test_punctured_torus(spec):
    res = hlrv(spec)
    assert res.value == (z - w) ** 2
    assert res.ok


@pytest.mark.parametrize("spec", [RANK2, TORUS1, TORUS2, CharVarSpec.parse(0, "1,1;1,1;1,1;2")],
                         ids=["rank2", "torus1", "torus2", "rank2-degenerate"])
def test_truncation_is_sufficient(spec):
    assert hlrv_function(spec) == hlrv_function(spec, truncation=spec.n + 1)


def test_truncation_below_weight_rejected():
    with pytest.raises(ValueError):
        hlrv_function(RANK2, truncation=1)


def test_genus_one_two_punctures():
    res = hlrv(CharVarSpec.parse(1, "1,1"))
    assert res.ok and duality_check(res.grid)
    assert specialize(res.grid, "E") == poly("q^4 - q^3 - q + 1")


def test_validation_failures_reported():
    res = hlrv(CharVarSpec.parse(0, "3"))
    assert not res.ok
    assert any("negative expected dimension" in p for p in res.problems)
    bad = HlrvGrid(2, {(2, 0): 1, (0, 0): -1, (1, 0): 1})
    probs = bad.problems()
    assert any("negative" in p for p in probs) and any("parity" in p for p in probs)
    assert any("c[0,2]" in p for p in probs)


def test_hlrv_is_symmetric_for_several_types():
    for g, mu in [(0, "2,1;2,1;1,1,1;1,1,1"), (0, "1,1;1,1;1,1;1,1;1,1"), (1, "1,1")]:
        res = hlrv(CharVarSpec.parse(g, mu))
        assert res.ok, res.problems
        assert duality_check(res.grid)
        assert res.value == res.value.monomial_subs({"z": ("w", 1), "w": ("z", 1)})


# -- specializations and motives --------------------------------------------------

def rank2_grid():
    return HlrvGrid(2, {(2, 0): 1, (0, 0): 4, (0, 2): 1})


def rank3_grid():
    return HlrvGrid(2, {(2, 0): 1, (0, 0): 6, (0, 2): 1})


def test_specializations_rank2():
    g = rank2_grid()
    assert specialize(g, "weight") == poly("q^2 + 4*q + t^2")
    assert specialize(g, "E") == poly("q^2 + 4*q + 1")
    # t = 0 keeps the i = 0 entries: c_00 q^{(2+0-0)/2} + c_02 q^{(2+2-0)/2}
    assert specialize(g, "pure") == poly("q^2 + 4*q")
    assert specialize(g, "poincare") == poly("5*t^2 + t^4")
    assert e_coefficients(g) == [1, 4, 1]


def test_specializations_rank3():
    assert specialize(rank3_grid(), "E") == poly("q^2 + 6*q + 1")
    with pytest.raises(ValueError):
        specialize(rank3_grid(), "bogus")


def test_parity_violation_rejected():
    with pytest.raises(ValueError):
        specialize(HlrvGrid(2, {(1, 0): 1}), "weight")


def test_duality_examples():
    assert duality_check(rank2_grid())
    assert duality_check(rank3_grid())
    assert not duality_check(HlrvGrid(2, {(2, 0): 1}))


def test_motive_sums():
    assert str(motive_sum(rank2_grid())) == "L^0[2] ⊕ (L^1)^{⊕4} ⊕ L^2"
    assert str(motive_sum(rank3_grid())) == "L^0[2] ⊕ (L^1)^{⊕6} ⊕ L^2"
    torus = hlrv(TORUS2).grid
    assert str(motive_sum(torus)) == "L^0[2] ⊕ (L^1[1])^{⊕2} ⊕ L^2"
    assert motive_sum(rank2_grid()).to_json() == [[0, 2, 1], [1, 0, 4], [2, 0, 1]]
    with pytest.raises(ValueError):
        MotiveSum.from_dict({(0, 0): -1})


# -- cells -----------------------------------------------------------------------

def cell_rows(dec, n):
    return [(tuple(p.label() for p in c.taus + c.ws), set(c.walk.stay)) for c in dec.cells]


def expected_rows(rows, n):
    return [(tuple(perm_of(x, n).label() for x in labels), stays) for labels, stays in rows]


def test_rank2_cells():
    dec = cell_decomposition(RANK2)
    assert len(dec.cells) == 7
    assert dec.f == [1, 6]
    assert cell_rows(dec, 2) == expected_rows(RANK2_CELLS, 2)
    assert dec.summary(unicode=True) == "𝕂^{⊔6} ⊔ (𝕂^×)^2"
    assert dec.compact_summary() == "K^6 ⊔ (Kx)^2"
    assert dec.e_polynomial() == poly("q^2 + 4*q + 1")


def test_rank3_cells():
    dec = cell_decomposition(RANK3)
    assert len(dec.cells) == 9
    assert dec.f == [1, 8]
    assert cell_rows(dec, 3) == expected_rows(RANK3_CELLS, 3)
    assert dec.summary(unicode=True) == "𝕂^{⊔8} ⊔ (𝕂^×)^2"
    assert dec.compact_summary() == "K^8 ⊔ (Kx)^2"


@pytest.mark.parametrize("g,mu", [(0, "1,1;1,1;1,1;1,1"), (0, "1,1,1;1,1,1;1,1,1"), (1, "1,1"),
                                  (0, "2,1;2,1;1,1,1;1,1,1"), (0, "1,1;1,1;1,1;1,1;1,1")])
def test_cell_invariants_and_cross_check(g, mu):
    spec = CharVarSpec.parse(g, mu)
    dec = cell_decomposition(spec)
    d = dimension(spec)
    assert all(c.a_bar + 2 * c.b_bar == d for c in dec.cells)
    top = [c for c in dec.cells if c.b_bar == 0]
    assert len(top) == 1 and top[0].a_bar == d
    assert dec.cells[-1] is top[0]   # the maximal cell comes last in the admissible order
    res = hlrv(spec)
    assert res.ok
    check = cross_check_epoly(spec, hlrv_result=res, cells=dec)
    assert check.ok, str(check)
    assert f_from_c(e_coefficients(res.grid), d) == dec.f


def test_genus_one_cells():
    dec = cell_decomposition(CharVarSpec.parse(1, "1,1"))
    assert dec.f == [1, 3, 0]
    assert dec.e_polynomial() == poly("q^4 - q^3 - q + 1")


def test_cells_need_very_generic():
    with pytest.raises(SpecError):
        cell_decomposition(CharVarSpec.parse(0, "1,1;1,1;2"))


def test_piece_labels():
    assert piece_label(2, 0) == "(Kx)^2"
    assert piece_label(0, 1) == "K"
    assert piece_label(1, 1) == "Kx × K"
    assert piece_label(2, 1, unicode=True) == "(𝕂^×)^2 × 𝕂"
    assert piece_label(0, 0) == "pt"


def test_cell_json():
    js = cell_decomposition(RANK2).to_json()
    assert js["f"] == [1, 6] and len(js["cells"]) == 7
    assert {"wvec", "braid", "walk", "a_bar", "b_bar"} <= set(js["cells"][0])


# -- f_j <-> c_l ---------------------------------------------------------------------

def test_f_from_c_examples():
    assert f_from_c([1, 4, 1], 2) == [1, 6]
    assert f_from_c([1, 6, 1], 2) == [1, 8]
    assert c_from_f([1, 6], 2) == [1, 4, 1]


def test_c_from_f_matches_cell_polynomial():
    # Σ_j f_j (q−1)^{d−2j} q^j, expanded directly
    rng = random.Random(5)
    for _ in range(20):
        d = 2 * rng.randint(1, 5)
        f = [1] + [rng.randint(0, 9) for _ in range(d // 2)]
        q = MPoly.var("q")
        total = MPoly.const(0)
        for j, fj in enumerate(f):
            total = total + (q - 1) ** (d - 2 * j) * q ** j * fj
        coeffs = [0] * (d + 1)
        for e, v in total.terms.items():
            coeffs[e[0] if e else 0] += v
        assert c_from_f(f, d) == coeffs


@given(st.integers(1, 6).flatmap(lambda h: st.lists(st.integers(0, 50), min_size=h, max_size=h)))
def test_f_c_round_trip(tail):
    f = [1] + tail
    d = 2 * len(tail)
    c = c_from_f(f, d)
    assert f_from_c(c, d) == f
    assert c_from_f(f_from_c(c, d), d) == c


def test_f_from_c_needs_even_dimension():
    with pytest.raises(ValueError):
        f_from_c([1, 1], 1)
