"""Invariants of generic character varieties.

* dimension and (very) genericity of a type μ⃗ with eigenvalue data;
* HLRV functions ℍ_μ(z,w) from modified Macdonald functions and plethystic Log;
* the coefficient grid of ℍ_μ(−z,w) and its specializations (𝕎, E, pure part,
  Poincaré polynomial, formal motive sum);
* cell decompositions of very generic character varieties via admissible
  walks, and the cell counts f_j in both directions.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .braidwalk import (BraidWord, Perm, Walk, admissible, all_perms, coset_min_reps,
                        enumerate_walks, shape_braid)
from .exact import MPoly, NotPolynomialError, RatFunc
from .macdonald import modified_macdonald
from .partitions import Partition, arm_leg_hook, as_partition, partitions_of
from .symfunc import DiagonalSeries, SymSeries, h_product_in_p, hall_pair, log_pleth, tensor

log = logging.getLogger(__name__)

Z = RatFunc.var("z")
W = RatFunc.var("w")


class SpecError(ValueError):
    """An ill-formed or unsupported character-variety type."""


# -- types ------------------------------------------------------------------

@dataclass(frozen=True)
class CharVarSpec:
    g: int
    mu: Tuple[Partition, ...]

    def __post_init__(self):
        mu = tuple(as_partition(m) for m in self.mu)
        object.__setattr__(self, "mu", mu)
        if self.g < 0:
            raise SpecError("genus must be non-negative")
        if not mu:
            raise SpecError("need at least one puncture")
        if len({m.weight for m in mu}) != 1 or mu[0].weight == 0:
            raise SpecError(f"all punctures need partitions of the same positive size: {mu}")

    @classmethod
    def parse(cls, g: int, text: str) -> CharVarSpec:
        """μ grammar: punctures separated by ';', parts by ','; e.g. "1,1;1,1;2"."""
        try:
            mu = [Partition(int(x) for x in block.split(",")) for block in text.split(";")]
        except ValueError as exc:
            raise SpecError(f"cannot parse type {text!r}: {exc}") from exc
        return cls(g, tuple(mu))

    @property
    def k(self) -> int:
        return len(self.mu)

    @property
    def n(self) -> int:
        return self.mu[0].weight

    @property
    def very_generic(self) -> bool:
        return self.mu[-1] == Partition((1,) * self.n)

    def to_json(self) -> dict:
        return {"g": self.g, "k": self.k, "mu": [list(m) for m in self.mu]}

    def label(self) -> str:
        return f"g={self.g}, mu={';'.join(','.join(map(str, m)) for m in self.mu)}"


def dimension(spec: CharVarSpec) -> int:
    """d_μ = n²(2g−2+k) − Σ_{i,j} (μ^i_j)² + 2."""
    n = spec.n
    d = n * n * (2 * spec.g - 2 + spec.k) - sum(p * p for m in spec.mu for p in m) + 2
    if d % 2:
        log.warning("odd dimension %d for %s", d, spec.label())
    return d


# -- genericity ---------------------------------------------------------------

Eigenvalue = Tuple[int, Tuple[int, ...]]   # (exponent in ℤ/N, exponents in ℤ^m)


@dataclass(frozen=True)
class EigenvalueData:
    """Eigenvalues ζ_N^a · x^v, one per block of μ^i (block j has multiplicity μ^i_j)."""
    N: int
    rank: int
    blocks: Tuple[Tuple[Eigenvalue, ...], ...]

    def __post_init__(self):
        if self.N < 1 or self.rank < 0:
            raise ValueError("need N ≥ 1 and a non-negative free rank")
        blocks = tuple(tuple((int(a) % self.N, tuple(int(x) for x in v)) for a, v in punct)
                       for punct in self.blocks)
        for punct in blocks:
            for _, v in punct:
                if len(v) != self.rank:
                    raise ValueError(f"free exponent {v} should have length {self.rank}")
        object.__setattr__(self, "blocks", blocks)


@dataclass(frozen=True)
class GenericResult:
    generic: bool
    witness: Optional[Tuple[Tuple[int, ...], ...]] = None   # block counts chosen per puncture
    reason: str = ""


def _add(x: Eigenvalue, y: Eigenvalue, N: int) -> Eigenvalue:
    return ((x[0] + y[0]) % N, tuple(a + b for a, b in zip(x[1], y[1])))


def _scale(x: Eigenvalue, c: int, N: int) -> Eigenvalue:
    return ((x[0] * c) % N, tuple(a * c for a in x[1]))


def _submultisets(mults: Sequence[int], size: int):
    if not mults:
        if size == 0:
            yield ()
        return
    for c in range(min(mults[0], size), -1, -1):
        for rest in _submultisets(mults[1:], size - c):
            yield (c,) + rest


def generic_check(spec: CharVarSpec, eig: EigenvalueData) -> GenericResult:
    """Π det C_i = 1, and no choice of n' < n eigenvalues per puncture multiplies to 1."""
    if len(eig.blocks) != spec.k:
        raise ValueError("one eigenvalue list per puncture is required")
    for m, punct in zip(spec.mu, eig.blocks):
        if len(punct) != len(m):
            raise ValueError(f"puncture of type {list(m)} needs {len(m)} distinct eigenvalues")
        if len(set(punct)) != len(punct):
            raise ValueError("eigenvalue blocks of one puncture must be distinct")
    N, zero = eig.N, (0, (0,) * eig.rank)
    total = zero
    for m, punct in zip(spec.mu, eig.blocks):
        for mult, e in zip(m, punct):
            total = _add(total, _scale(e, mult, N), N)
    if total != zero:
        return GenericResult(False, None, "the product of the determinants is not 1")
    for size in range(1, spec.n):
        choices = [list(_submultisets(tuple(m), size)) for m in spec.mu]
        for combo in iproduct(*choices):
            acc = zero
            for counts, punct in zip(combo, eig.blocks):
                for c, e in zip(counts, punct):
                    if c:
                        acc = _add(acc, _scale(e, c, N), N)
            if acc == zero:
                return GenericResult(False, combo, f"{size} eigenvalues per puncture multiply to 1")
    return GenericResult(True)


# -- HLRV functions ----------------------------------------------------------

def _zw(a: int, b: int) -> RatFunc:
    return RatFunc(MPoly(("z", "w"), {(a, b): 1}), 1, normalize=False)


@lru_cache(maxsize=None)
def hook_polynomial(lam: Tuple[int, ...], g: int) -> RatFunc:
    """𝓗_λ(z,w) = Π_s (z^{2a+1} − w^{2l+1})^{2g} / ((z^{2a+2} − w^{2l})(z^{2a} − w^{2l+2}))."""
    lam = as_partition(lam)
    out = RatFunc(1)
    for s in lam.cells():
        a, l, _ = arm_leg_hook(lam, s)
        num = (_zw(2 * a + 1, 0) - _zw(0, 2 * l + 1)) ** (2 * g)
        den = (_zw(2 * a + 2, 0) - _zw(0, 2 * l)) * (_zw(2 * a, 0) - _zw(0, 2 * l + 2))
        out = out * num / den
    return out


_QT_TO_ZW = {"q": ("z", 2), "t": ("w", 2)}


def _htilde_zw(lam: Partition, N: int, cache_dir) -> SymSeries:
    Ht = modified_macdonald(lam, cache_dir)
    return Ht.map_coeffs(lambda c: c.monomial_subs(_QT_TO_ZW)).with_truncation(N)


def cauchy_function(g: int, k: int, N: int, cache_dir=None) -> DiagonalSeries:
    """Ω(z,w) = Σ_{|λ| ≤ N} 𝓗_λ(z,w) Π_i H̃_λ(x_i; z², w²), graded by |λ|."""
    comps = [SymSeries.one(k, N)]
    for m in range(1, N + 1):
        acc = SymSeries.zero(k, N)
        for lam in partitions_of(m):
            H = _htilde_zw(lam, N, cache_dir)
            acc = acc + tensor([H] * k, N).scale(hook_polynomial(tuple(lam), g))
        comps.append(acc)
    return DiagonalSeries(comps)


@dataclass
class HlrvGrid:
    """ℍ_μ(−z,w) = Σ c[(i,j)] z^i w^j."""
    d: int
    c: Dict[Tuple[int, int], int]

    def problems(self) -> List[str]:
        if self.d < 0:
            return [f"negative expected dimension d = {self.d}: the character variety is empty"]
        out = []
        for (i, j), v in sorted(self.c.items()):
            if v < 0:
                out.append(f"negative coefficient c[{i},{j}] = {v}")
            if (j - i) % 2:
                out.append(f"c[{i},{j}] = {v} violates the parity j − i even")
            if not (0 <= i <= self.d and 0 <= j <= self.d and i + j <= self.d):
                out.append(f"c[{i},{j}] = {v} lies outside the degree range for d = {self.d}")
        for key in ((0, self.d), (self.d, 0)):
            if self.c.get(key, 0) != 1:
                out.append(f"c[{key[0]},{key[1]}] = {self.c.get(key, 0)}, expected 1")
        return out

    def as_poly(self) -> MPoly:
        return MPoly(("z", "w"), {(i, j): v for (i, j), v in self.c.items()})

    def to_json(self) -> List[List[int]]:
        return [[i, j, v] for (i, j), v in sorted(self.c.items())]


class ValidationFailure(Exception):
    def __init__(self, problems: Sequence[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


@dataclass
class HlrvResult:
    spec: CharVarSpec
    d: int
    value: RatFunc                 # ℍ_μ(z,w)
    value_neg: RatFunc             # ℍ_μ(−z,w)
    grid: Optional[HlrvGrid]
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def hlrv_function(spec: CharVarSpec, truncation: Optional[int] = None, cache_dir=None) -> RatFunc:
    """ℍ_μ(z,w) = −(z²−1)(w²−1) ⟨Log Ω, h_μ⟩ as an exact rational function."""
    n = spec.n
    N = n if truncation is None else truncation
    if N < n:
        raise ValueError(f"truncation {N} is below the weight {n}")
    omega = cauchy_function(spec.g, spec.k, N, cache_dir)
    logomega = log_pleth(omega)
    h_mu = tensor([h_product_in_p(m, N) for m in spec.mu], N)
    pairing = hall_pair(logomega[n], h_mu)
    return -(Z ** 2 - 1) * (W ** 2 - 1) * pairing


def grid_of(poly: MPoly) -> Dict[Tuple[int, int], int]:
    vars = poly.vars
    if any(v not in ("z", "w") for v in vars):
        raise ValueError(f"unexpected variables {vars}")
    out = {}
    for e, c in poly.terms.items():
        ex = dict(zip(vars, e))
        out[(ex.get("z", 0), ex.get("w", 0))] = int(c)
    return out


def hlrv(spec: CharVarSpec, truncation: Optional[int] = None, cache_dir=None) -> HlrvResult:
    d = dimension(spec)
    value = hlrv_function(spec, truncation, cache_dir)
    value_neg = value.subs({"z": -Z})
    problems = []
    grid = None
    try:
        grid = HlrvGrid(d, grid_of(value_neg.to_poly()))
        problems = grid.problems()
    except NotPolynomialError:
        problems = [f"ℍ(−z,w) is not a polynomial: {value_neg}"]
    return HlrvResult(spec, d, value, value_neg, grid, problems)


# -- specializations ---------------------------------------------------------

def weight_polynomial(grid: HlrvGrid) -> MPoly:
    """𝕎(q,t) = Σ c_ij q^{(d+j−i)/2} t^i."""
    terms: Dict[Tuple[int, int], int] = {}
    for (i, j), v in grid.c.items():
        if (grid.d + j - i) % 2:
            raise ValueError(f"c[{i},{j}] violates the parity condition")
        key = ((grid.d + j - i) // 2, i)
        terms[key] = terms.get(key, 0) + v
    return MPoly(("q", "t"), terms)


def specialize(grid: HlrvGrid, target: str) -> MPoly:
    """target ∈ {weight, E, pure, poincare}."""
    Wqt = weight_polynomial(grid)
    if target == "weight":
        return Wqt
    if target == "E":
        return Wqt.partial_eval({"t": -1}).to_poly()
    if target == "pure":
        return Wqt.partial_eval({"t": 0}).to_poly()
    if target == "poincare":
        return MPoly(("t",), _collect(((grid.d + j,), v) for (i, j), v in grid.c.items()))
    raise ValueError(f"unknown specialization {target!r}")


def _collect(pairs) -> Dict[Tuple[int, ...], int]:
    out: Dict[Tuple[int, ...], int] = {}
    for e, v in pairs:
        out[e] = out.get(e, 0) + v
    return out


def e_coefficients(grid: HlrvGrid) -> List[int]:
    """c_ℓ with Σ c_ℓ q^ℓ = √q^d ℍ(1/√q, √q) = 𝕎(q,−1)."""
    E = specialize(grid, "E")
    out = [0] * (grid.d + 1)
    for e, v in E.terms.items():
        out[e[0] if e else 0] += v
    return out


def duality_check(grid: HlrvGrid) -> bool:
    return all(grid.c.get((j, i), 0) == v for (i, j), v in grid.c.items())


_SUP = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


@dataclass(frozen=True)
class MotiveSum:
    """⊕ (L^a[b])^{⊕mult}, stored as {(a, b): mult}."""
    terms: Tuple[Tuple[Tuple[int, int], int], ...]

    @classmethod
    def from_dict(cls, d: Dict[Tuple[int, int], int]) -> MotiveSum:
        items = [(k, v) for k, v in d.items() if v]
        if any(v < 0 for _, v in items):
            raise ValueError("motive multiplicities must be positive")
        return cls(tuple(sorted(items, key=lambda kv: (kv[0][0], -kv[0][1]))))

    def as_dict(self) -> Dict[Tuple[int, int], int]:
        return dict(self.terms)

    def __str__(self) -> str:
        pieces = []
        for (a, b), mult in self.terms:
            sym = f"L^{a}" + (f"[{b}]" if b else "")
            pieces.append(sym if mult == 1 else f"({sym})^{{⊕{mult}}}")
        return " ⊕ ".join(pieces) if pieces else "0"

    def to_json(self) -> List[List[int]]:
        return [[a, b, m] for (a, b), m in self.terms]


def motive_sum(grid: HlrvGrid) -> MotiveSum:
    """⊕_{i,j} (L^{(d+j−i)/2}[i])^{⊕c_ij}."""
    out: Dict[Tuple[int, int], int] = {}
    for (i, j), v in grid.c.items():
        if (grid.d + j - i) % 2:
            raise ValueError(f"c[{i},{j}] violates the parity condition")
        key = ((grid.d + j - i) // 2, i)
        out[key] = out.get(key, 0) + v
    return MotiveSum.from_dict(out)


# -- cell decompositions -----------------------------------------------------

def _perm_key(w: Perm) -> Tuple[int, Tuple[int, ...]]:
    """A total order extending the Bruhat order: length, then one-line notation."""
    return (w.length(), tuple(w))


def _wvec_key(taus: Sequence[Perm], ws: Sequence[Perm]):
    comps = list(taus) + list(ws)
    return (sum(w.length() for w in comps), tuple((-w.length(), tuple(w)) for w in comps))


def _walk_key(walk: Walk):
    return tuple(_perm_key(p) for p in walk.states[1:])


@dataclass(frozen=True)
class CellDescriptor:
    taus: Tuple[Perm, ...]
    ws: Tuple[Perm, ...]
    walk: Walk
    a_bar: int
    b_bar: int

    @property
    def braid(self) -> BraidWord:
        return self.walk.braid

    def label(self) -> str:
        return piece_label(self.a_bar, self.b_bar)

    def to_json(self) -> dict:
        return {"wvec": {"tau": [list(t) for t in self.taus], "w": [list(w) for w in self.ws]},
                "braid": list(self.braid.letters), "walk": self.walk.to_json(),
                "a_bar": self.a_bar, "b_bar": self.b_bar}


def piece_label(a: int, b: int, unicode: bool = False) -> str:
    """(𝕂^×)^a × 𝕂^b in ASCII ("(Kx)^2", "K") or with blackboard letters."""
    K, Kx = ("𝕂", "𝕂^×") if unicode else ("K", "Kx")
    parts = []
    if a:
        parts.append(f"({Kx})^{a}" if a > 1 else (f"({Kx})" if unicode else Kx))
    if b:
        parts.append(f"{K}^{b}" if b > 1 else K)
    return " × ".join(parts) if parts else "pt"


@dataclass
class CellDecomposition:
    spec: CharVarSpec
    d: int
    cells: List[CellDescriptor]

    @property
    def f(self) -> List[int]:
        counts = [0] * (self.d // 2 + 1)
        for c in self.cells:
            counts[c.b_bar] += 1
        return counts

    def e_polynomial(self) -> MPoly:
        """Σ_cells (q−1)^{ā} q^{b̄}."""
        q = MPoly.var("q")
        total = MPoly.const(0)
        for c in self.cells:
            total = total + (q - 1) ** c.a_bar * q ** c.b_bar
        return total

    def summary(self, unicode: bool = False) -> str:
        """Disjoint-union summary, e.g. "K^{⊔6} ⊔ (Kx)^2"."""
        counts = Counter((c.a_bar, c.b_bar) for c in self.cells)
        pieces = []
        for (a, b), m in sorted(counts.items(), key=lambda kv: (kv[0][0], -kv[0][1])):
            lab = piece_label(a, b, unicode)
            if m > 1:
                lab = (f"({lab})" if " " in lab or "^" in lab else lab) + f"^{{⊔{m}}}"
            pieces.append(lab)
        return " ⊔ ".join(pieces)

    def compact_summary(self) -> str:
        """Multiplicities folded into exponents of single-factor pieces, e.g. "K^6 ⊔ (Kx)^2"."""
        counts = Counter((c.a_bar, c.b_bar) for c in self.cells)
        pieces = []
        for (a, b), m in sorted(counts.items(), key=lambda kv: (kv[0][0], -kv[0][1])):
            lab = piece_label(a, b)
            pieces.append(lab if m == 1 else f"{lab}^{m}" if lab in ("K", "Kx") else f"({lab})^{{⊔{m}}}")
        return " ⊔ ".join(pieces)

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "d": self.d,
                "cells": [c.to_json() for c in self.cells], "f": self.f,
                "summary": self.summary()}


def shape_vectors(spec: CharVarSpec):
    """All (τ⃗, ẇ⃗) ∈ W^{2g} × Π_{i<k} (minimal representatives of W/W(μ^i))."""
    n = spec.n
    taus_all = all_perms(n)
    reps = [coset_min_reps(n, m) for m in spec.mu[:-1]]
    for taus in iproduct(taus_all, repeat=2 * spec.g):
        for ws in iproduct(*reps):
            yield tuple(taus), tuple(ws)


def cell_decomposition(spec: CharVarSpec) -> CellDecomposition:
    if not spec.very_generic:
        raise SpecError("cell decompositions need a very generic type: "
                        "the last puncture C_k must be regular semisimple, i.e. μ^k = (1^n)")
    d = dimension(spec)
    n, g = spec.n, spec.g
    cells = []
    for taus, ws in sorted(shape_vectors(spec), key=lambda tw: _wvec_key(*tw)):
        beta = shape_braid(g, n, taus, ws)
        walks = [p for p in enumerate_walks(beta) if admissible(p, g, n, taus)]
        for p in sorted(walks, key=_walk_key):
            a = len(p.stay) + 2 * g * n - 2 * n + 2
            if a < 0 or a > d or (d - a) % 2:
                raise ValueError(f"cell with ā = {a} is incompatible with d = {d}")
            cells.append(CellDescriptor(taus, ws, p, a, (d - a) // 2))
    top = [c for c in cells if c.b_bar == 0]
    if len(top) != 1:
        raise ValueError(f"expected exactly one cell with b̄ = 0, found {len(top)}")
    return CellDecomposition(spec, d, cells)


# -- cell counts versus E-polynomial coefficients -----------------------------

def c_from_f(f: Sequence[int], d: int) -> List[int]:
    """c̃_ℓ = Σ_{j=0}^{ℓ} f_{ℓ−j} binom(d−2ℓ+2j, j) (−1)^j, with f_i = 0 beyond d/2."""
    f = list(f) + [0] * (d + 1)
    out = []
    for l in range(d + 1):
        total = 0
        for j in range(l + 1):
            fi = f[l - j] if l - j <= d // 2 else 0
            top = d - 2 * l + 2 * j
            if fi and top >= 0:
                total += fi * comb(top, j) * (-1) ** j
        out.append(total)
    return out


def f_from_c(c: Sequence[int], d: int) -> List[int]:
    """The closed formula for f_j (0 ≤ j ≤ d/2) in terms of c_0, …, c_j."""
    if d % 2:
        raise ValueError("the closed formula needs an even dimension")
    h = d // 2
    out = []
    for j in range(h + 1):
        total = Fraction(0)
        for l in range(j + 1):
            r = j - l
            bracket = Fraction(0)
            for i in range(r // 2 + 1):
                bracket += Fraction((-1) ** i * factorial(h - l - i) * 2 ** (r - 2 * i),
                                    factorial(h - j) * factorial(i) * factorial(r - 2 * i))
            for i in range(1, r // 2 + 1):
                bracket += Fraction((-1) ** i * factorial(h - l - i - 1) * 2 ** (r - 2 * i),
                                    factorial(h - j) * factorial(i - 1) * factorial(r - 2 * i))
            total += c[l] * bracket
        if total.denominator != 1:
            raise ValueError(f"non-integral cell count f_{j} = {total}")
        out.append(int(total))
    return out


@dataclass
class CrossCheck:
    hlrv_side: MPoly
    cell_side: MPoly

    @property
    def ok(self) -> bool:
        return self.hlrv_side == self.cell_side

    def __str__(self) -> str:
        verdict = "agree" if self.ok else "DISAGREE"
        return f"HLRV side {self.hlrv_side} ; cell side {self.cell_side} : {verdict}"


def cross_check_epoly(spec: CharVarSpec, cache_dir=None, hlrv_result: Optional[HlrvResult] = None,
                      cells: Optional[CellDecomposition] = None) -> CrossCheck:
    res = hlrv_result or hlrv(spec, cache_dir=cache_dir)
    if res.grid is None:
        raise ValidationFailure(res.problems)
    dec = cells or cell_decomposition(spec)
    return CrossCheck(specialize(res.grid, "E"), dec.e_polynomial())
