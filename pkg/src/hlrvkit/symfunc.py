"""Symmetric functions in several alphabets, stored in the power-sum basis.

A :class:`SymSeries` over ``k`` alphabets is a finite sum of terms
``c * p_{λ¹}(x₁) ⋯ p_{λᵏ}(x_k)`` with rational-function coefficients.  Every
series carries a truncation degree ``N``; terms with some ``|λⁱ| > N`` are
dropped as soon as they appear.

Plethystic Exp/Log act on :class:`DiagonalSeries`, whose grading variable is
the common degree of a term in all alphabets (all alphabets have the same
degree in every stored term).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import RatFunc
from .partitions import Partition, partitions_of, z_lambda, z_lambda_qt

Key = Tuple[Tuple[int, ...], ...]


def _merge(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


class SymSeries:
    """Truncated element of Λ(x₁,…,x_k) ⊗ ℚ(vars) in the power-sum basis."""

    __slots__ = ("k", "N", "terms")

    def __init__(self, k: int, N: int, terms: Optional[Mapping[Key, object]] = None):
        if k < 1:
            raise ValueError("need at least one alphabet")
        self.k, self.N = k, N
        clean: Dict[Key, RatFunc] = {}
        for key, c in (terms or {}).items():
            key = tuple(tuple(p) for p in key)
            if len(key) != k:
                raise ValueError(f"term {key} does not have {k} alphabets")
            if any(sum(p) > N for p in key):
                continue
            c = RatFunc.coerce(c)
            if c:
                clean[key] = clean[key] + c if key in clean else c
        self.terms = {key: c for key, c in clean.items() if c}

    @classmethod
    def _raw(cls, k: int, N: int, terms: Dict[Key, RatFunc]) -> SymSeries:
        obj = object.__new__(cls)
        obj.k, obj.N, obj.terms = k, N, terms
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def scalar(cls, c, k: int = 1, N: int = 0) -> SymSeries:
        return cls(k, N, {((),) * k: c})

    @classmethod
    def one(cls, k: int = 1, N: int = 0) -> SymSeries:
        return cls.scalar(1, k, N)

    @classmethod
    def zero(cls, k: int = 1, N: int = 0) -> SymSeries:
        return cls(k, N, {})

    @classmethod
    def power_sum(cls, parts: Sequence[int], alphabet: int = 0, k: int = 1, N: Optional[int] = None) -> SymSeries:
        parts = tuple(Partition(sorted(parts, reverse=True)))
        N = sum(parts) if N is None else N
        key = tuple(parts if i == alphabet else () for i in range(k))
        return cls(k, N, {key: 1})

    @classmethod
    def from_rational(cls, coeffs: Mapping[Tuple[int, ...], Fraction], alphabet: int = 0,
                      k: int = 1, N: Optional[int] = None) -> SymSeries:
        """Lift a single-alphabet expansion {partition: rational} into alphabet ``alphabet``."""
        if N is None:
            N = max((sum(p) for p in coeffs), default=0)
        terms = {tuple(p if i == alphabet else () for i in range(k)): c for p, c in coeffs.items()}
        return cls(k, N, terms)

    # -- basic protocol -----------------------------------------------------
    def _check(self, other: SymSeries):
        if not isinstance(other, SymSeries):
            raise TypeError("expected a SymSeries")
        if (self.k, self.N) != (other.k, other.N):
            raise ValueError(f"shape mismatch: (k={self.k}, N={self.N}) vs (k={other.k}, N={other.N})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymSeries):
            return NotImplemented
        return (self.k, self.N) == (other.k, other.N) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, key) -> RatFunc:
        key = tuple(tuple(p) for p in key)
        return self.terms.get(key, RatFunc(0))

    def __add__(self, other: SymSeries) -> SymSeries:
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = out[key] + c if key in out else c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return SymSeries._raw(self.k, self.N, out)

    def __neg__(self) -> SymSeries:
        return SymSeries._raw(self.k, self.N, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other: SymSeries) -> SymSeries:
        return self + (-other)

    def scale(self, c) -> SymSeries:
        c = RatFunc.coerce(c)
        if not c:
            return SymSeries.zero(self.k, self.N)
        return SymSeries._raw(self.k, self.N, {key: v * c for key, v in self.terms.items()})

    def map_coeffs(self, fn) -> SymSeries:
        return SymSeries(self.k, self.N, {key: fn(c) for key, c in self.terms.items()})

    def __mul__(self, other) -> SymSeries:
        if not isinstance(other, SymSeries):
            return self.scale(other)
        self._check(other)
        N = self.N
        out: Dict[Key, RatFunc] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                key = tuple(_merge(a, b) for a, b in zip(ka, kb))
                if any(sum(p) > N for p in key):
                    continue
                v = ca * cb
                out[key] = out[key] + v if key in out else v
        return SymSeries._raw(self.k, N, {key: c for key, c in out.items() if c})

    __rmul__ = scale

    def with_truncation(self, N: int) -> SymSeries:
        return SymSeries(self.k, N, self.terms)

    def degree_part(self, degrees: Sequence[int]) -> SymSeries:
        degrees = tuple(degrees)
        return SymSeries._raw(self.k, self.N, {key: c for key, c in self.terms.items()
                                              if tuple(sum(p) for p in key) == degrees})

    def adams(self, d: int) -> SymSeries:
        """p_r ↦ p_{rd} in every alphabet and v ↦ v^d on coefficients (terms beyond N dropped)."""
        if d < 1:
            raise ValueError("Adams operation needs d >= 1")
        out = {}
        for key, c in self.terms.items():
            nk = tuple(tuple(r * d for r in p) for p in key)
            if any(sum(p) > self.N for p in nk):
                continue
            out[nk] = c.adams(d)
        return SymSeries._raw(self.k, self.N, out)

    def omega(self) -> SymSeries:
        """The involution p_λ ↦ ε_λ p_λ applied in every alphabet."""
        out = {}
        for key, c in self.terms.items():
            sign = (-1) ** sum(sum(p) - len(p) for p in key)
            out[key] = c if sign == 1 else -c
        return SymSeries._raw(self.k, self.N, out)

    def to_records(self) -> List[dict]:
        return [{"partitions": [list(p) for p in key], "coeff": str(c)}
                for key, c in sorted(self.terms.items())]

    @classmethod
    def from_records(cls, records: Iterable[dict], k: int, N: int) -> SymSeries:
        return cls(k, N, {tuple(tuple(p) for p in r["partitions"]): RatFunc.coerce(r["coeff"])
                          for r in records})

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{_key_str(key)}" for key, c in sorted(self.terms.items())) or "0"
        return f"SymSeries(k={self.k}, N={self.N}: {body})"


def _key_str(key: Key) -> str:
    parts = []
    for i, p in enumerate(key):
        if p:
            parts.append(f"p{list(p)}(x{i + 1})")
    return "*".join(parts) or "1"


def tensor(factors: Sequence[SymSeries], N: Optional[int] = None) -> SymSeries:
    """Product f₁(x₁)⋯f_k(x_k) of single-alphabet series placed in separate alphabets."""
    k = len(factors)
    N = max(f.N for f in factors) if N is None else N
    out: Dict[Key, RatFunc] = {}
    for combo in iproduct(*(f.terms.items() for f in factors)):
        key = tuple(kv[0][0] for kv in combo)
        if any(sum(p) > N for p in key):
            continue
        c = RatFunc(1)
        for kv in combo:
            c = c * kv[1]
        out[key] = out[key] + c if key in out else c
    return SymSeries(k, N, out)


def sym_mul(a: SymSeries, b: SymSeries) -> SymSeries:
    return a * b


# -- classical bases (rational coefficients) ------------------------------

@lru_cache(maxsize=None)
def _h_rational(n: int) -> Dict[Tuple[int, ...], Fraction]:
    if n < 0:
        return {}
    return {tuple(lam): Fraction(1, z_lambda(lam)) for lam in partitions_of(n)}


@lru_cache(maxsize=None)
def _e_rational(n: int) -> Dict[Tuple[int, ...], Fraction]:
    if n < 0:
        return {}
    return {tuple(lam): Fraction((-1) ** (n - len(lam)), z_lambda(lam)) for lam in partitions_of(n)}


def _rmul(a: Mapping, b: Mapping) -> Dict[Tuple[int, ...], Fraction]:
    out: Dict[Tuple[int, ...], Fraction] = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            key = _merge(ka, kb)
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _radd(a: Mapping, b: Mapping, scale=1) -> Dict[Tuple[int, ...], Fraction]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + scale * v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _s_rational(lam: Tuple[int, ...]) -> Dict[Tuple[int, ...], Fraction]:
    """Jacobi–Trudi determinant det(h_{λ_i - i + j}) expanded along rows."""
    l = len(lam)
    if l == 0:
        return {(): Fraction(1)}

    @lru_cache(maxsize=None)
    def minor(row: int, cols: frozenset) -> Tuple[Tuple[Tuple[int, ...], Fraction], ...]:
        if row == l:
            return (((), Fraction(1)),)
        acc: Dict[Tuple[int, ...], Fraction] = {}
        ordered = sorted(cols)
        for pos, j in enumerate(ordered):
            idx = lam[row] - (row + 1) + (j + 1)
            if idx < 0:
                continue
            sub = dict(minor(row + 1, cols - {j}))
            if not sub:
                continue
            term = _rmul(_h_rational(idx), sub)
            acc = _radd(acc, term, -1 if pos % 2 else 1)
        return tuple(acc.items())

    return dict(minor(0, frozenset(range(l))))


def h_in_p(n: int, N: Optional[int] = None) -> SymSeries:
    return SymSeries.from_rational(_h_rational(n), N=n if N is None else N)


def e_in_p(n: int, N: Optional[int] = None) -> SymSeries:
    return SymSeries.from_rational(_e_rational(n), N=n if N is None else N)


def schur_in_p(lam: Sequence[int], N: Optional[int] = None) -> SymSeries:
    lam = tuple(Partition(lam))
    return SymSeries.from_rational(_s_rational(lam), N=sum(lam) if N is None else N)


def h_product_in_p(mu: Sequence[int], N: Optional[int] = None) -> SymSeries:
    out: Dict[Tuple[int, ...], Fraction] = {(): Fraction(1)}
    for part in mu:
        out = _rmul(out, _h_rational(part))
    return SymSeries.from_rational(out, N=sum(mu) if N is None else N)


def e_product_in_p(mu: Sequence[int], N: Optional[int] = None) -> SymSeries:
    out: Dict[Tuple[int, ...], Fraction] = {(): Fraction(1)}
    for part in mu:
        out = _rmul(out, _e_rational(part))
    return SymSeries.from_rational(out, N=sum(mu) if N is None else N)


# -- monomial basis -------------------------------------------------------

def _count_distributions(rho: Tuple[int, ...], mu: Tuple[int, ...]) -> int:
    """Number of maps from the parts of rho to the rows of mu with row sums mu."""

    @lru_cache(maxsize=None)
    def rec(i: int, remaining: Tuple[int, ...]) -> int:
        if i == len(rho):
            return 1 if not any(remaining) else 0
        total = 0
        for j, r in enumerate(remaining):
            if r >= rho[i]:
                total += rec(i + 1, remaining[:j] + (r - rho[i],) + remaining[j + 1:])
        return total

    return rec(0, tuple(mu))


@lru_cache(maxsize=None)
def p_to_m_matrix(n: int) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int]:
    """Coefficient of m_μ in p_ρ, as a sparse table {(ρ, μ): count}."""
    basis = [tuple(p) for p in partitions_of(n)]
    table = {}
    for rho in basis:
        for mu in basis:
            c = _count_distributions(rho, mu)
            if c:
                table[(rho, mu)] = c
    return table


@lru_cache(maxsize=None)
def _m_rational(mu: Tuple[int, ...]) -> Dict[Tuple[int, ...], Fraction]:
    """p-expansion of m_μ, from back-substitution in the triangular p→m table."""
    n = sum(mu)
    basis = [tuple(p) for p in partitions_of(n)]   # (n) first: p_(n) = m_(n)
    table = p_to_m_matrix(n)
    # p_ρ = m_ρ·L_ρρ + Σ_{ν > ρ} L_ρν m_ν ; solve for m_ρ going from (n) downwards
    solved: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Fraction]] = {}
    for rho in basis:
        acc = {rho: Fraction(1)}
        for nu in basis:
            if nu == rho:
                continue
            c = table.get((rho, nu), 0)
            if c:
                acc = _radd(acc, solved[nu], -c)
        diag = table[(rho, rho)]
        solved[rho] = {k: v / diag for k, v in acc.items()}
        if rho == mu:
            break
    return solved[mu]


def m_in_p(mu: Sequence[int], N: Optional[int] = None) -> SymSeries:
    mu = tuple(Partition(mu))
    return SymSeries.from_rational(_m_rational(mu) if mu else {(): Fraction(1)},
                                   N=sum(mu) if N is None else N)


def m_coefficients(a: SymSeries, n: int) -> Dict[Partition, RatFunc]:
    """Monomial-basis coefficients of the degree-n part of a single-alphabet series."""
    if a.k != 1:
        raise ValueError("m_coefficients needs a single alphabet")
    table = p_to_m_matrix(n)
    out: Dict[Partition, RatFunc] = {}
    for (rho,), c in a.terms.items():
        if sum(rho) != n:
            continue
        for mu in partitions_of(n):
            L = table.get((rho, tuple(mu)), 0)
            if L:
                out[mu] = out[mu] + c * L if mu in out else c * L
    return {mu: c for mu, c in out.items() if c}


def from_m_coefficients(coeffs: Mapping[Sequence[int], object], N: Optional[int] = None) -> SymSeries:
    """Single-alphabet series Σ c_μ m_μ in the power-sum basis."""
    if N is None:
        N = max((sum(mu) for mu in coeffs), default=0)
    out: Dict[Key, RatFunc] = {}
    for mu, c in coeffs.items():
        c = RatFunc.coerce(c)
        for rho, v in (_m_rational(tuple(mu)) if tuple(mu) else {(): Fraction(1)}).items():
            key = (rho,)
            term = c * v
            out[key] = out[key] + term if key in out else term
    return SymSeries(1, N, out)


def s_coefficients(a: SymSeries, n: int) -> Dict[Partition, RatFunc]:
    """Schur coefficients of the degree-n part (Schur functions are orthonormal)."""
    if a.k != 1:
        raise ValueError("s_coefficients needs a single alphabet")
    out = {}
    for lam in partitions_of(n):
        c = hall_pair(a.degree_part((n,)), schur_in_p(lam, N=a.N))
        if c:
            out[lam] = c
    return out


def from_s_coefficients(coeffs: Mapping[Sequence[int], object], N: Optional[int] = None) -> SymSeries:
    if N is None:
        N = max((sum(mu) for mu in coeffs), default=0)
    out: Dict[Key, RatFunc] = {}
    for lam, c in coeffs.items():
        c = RatFunc.coerce(c)
        for rho, v in _s_rational(tuple(lam)).items():
            key = (rho,)
            term = c * v
            out[key] = out[key] + term if key in out else term
    return SymSeries(1, N, out)


# -- pairings ---------------------------------------------------------------

def hall_pair(a: SymSeries, b: SymSeries) -> RatFunc:
    """⟨p_λ, p_μ⟩ = z_λ δ_λμ, multiplied over alphabets."""
    if a.k != b.k:
        raise ValueError("pairing needs matching alphabet counts")
    small, big = (a, b) if len(a.terms) <= len(b.terms) else (b, a)
    total = RatFunc(0)
    for key, c in small.terms.items():
        other = big.terms.get(key)
        if other is None:
            continue
        z = 1
        for p in key:
            z *= z_lambda(p)
        total = total + c * other * z
    return total


def hall_pair_qt(a: SymSeries, b: SymSeries) -> RatFunc:
    """⟨p_λ, p_μ⟩_{q,t} = z_λ(q,t) δ_λμ, multiplied over alphabets."""
    if a.k != b.k:
        raise ValueError("pairing needs matching alphabet counts")
    total = RatFunc(0)
    for key, c in a.terms.items():
        other = b.terms.get(key)
        if other is None:
            continue
        z = RatFunc(1)
        for p in key:
            z = z * _zqt(p)
        total = total + c * other * z
    return total


@lru_cache(maxsize=None)
def _zqt(p: Tuple[int, ...]) -> RatFunc:
    return z_lambda_qt(p)


def adams(a: SymSeries, d: int) -> SymSeries:
    return a.adams(d)


# -- Möbius function --------------------------------------------------------

def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("Möbius function is defined for n >= 1")
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# -- graded series and Exp/Log ---------------------------------------------

class DiagonalSeries:
    """Σ_m V_m T^m, where V_m has degree m in every alphabet; V_0 is a scalar."""

    __slots__ = ("k", "N", "comps")

    def __init__(self, comps: Sequence[SymSeries]):
        if not comps:
            raise ValueError("need at least the constant component")
        k, N = comps[0].k, comps[0].N
        if len(comps) != N + 1:
            raise ValueError(f"expected {N + 1} components for truncation {N}")
        for m, c in enumerate(comps):
            if (c.k, c.N) != (k, N):
                raise ValueError("components must share alphabet count and truncation")
            for key in c.terms:
                if any(sum(p) != m for p in key):
                    raise ValueError(f"component {m} is not diagonally homogeneous: {key}")
        self.k, self.N, self.comps = k, N, list(comps)

    @classmethod
    def from_series(cls, s: SymSeries) -> DiagonalSeries:
        comps = [SymSeries.zero(s.k, s.N) for _ in range(s.N + 1)]
        buckets: List[Dict[Key, RatFunc]] = [dict() for _ in range(s.N + 1)]
        for key, c in s.terms.items():
            degs = {sum(p) for p in key}
            if len(degs) != 1:
                raise ValueError(f"term {key} is not diagonally homogeneous")
            buckets[degs.pop()][key] = c
        comps = [SymSeries._raw(s.k, s.N, b) for b in buckets]
        return cls(comps)

    @classmethod
    def zero(cls, k: int, N: int) -> DiagonalSeries:
        return cls([SymSeries.zero(k, N) for _ in range(N + 1)])

    @classmethod
    def one(cls, k: int, N: int) -> DiagonalSeries:
        return cls([SymSeries.one(k, N)] + [SymSeries.zero(k, N) for _ in range(N)])

    def to_series(self) -> SymSeries:
        out = SymSeries.zero(self.k, self.N)
        for c in self.comps:
            out = out + c
        return out

    def constant(self) -> RatFunc:
        return self.comps[0].coeff(((),) * self.k)

    def __eq__(self, other) -> bool:
        return isinstance(other, DiagonalSeries) and self.comps == other.comps

    def __getitem__(self, m: int) -> SymSeries:
        return self.comps[m]

    def __repr__(self) -> str:
        return f"DiagonalSeries(k={self.k}, N={self.N}, sizes={[len(c) for c in self.comps]})"


def exp_pleth(v: DiagonalSeries) -> DiagonalSeries:
    """Exp(V) = exp(Σ_{r≥1} p_r[V]/r), graded by the diagonal degree."""
    if v.comps[0]:
        raise ValueError("plethystic exponential needs zero constant term")
    k, N = v.k, v.N
    S = [SymSeries.zero(k, N) for _ in range(N + 1)]
    for m in range(1, N + 1):
        for r in divisors(m):
            term = v.comps[m // r].adams(r)
            if term:
                S[m] = S[m] + term.scale(Fraction(1, r))
    E = [SymSeries.one(k, N)] + [SymSeries.zero(k, N) for _ in range(N)]
    for m in range(1, N + 1):
        acc = SymSeries.zero(k, N)
        for j in range(1, m + 1):
            if S[j] and E[m - j]:
                acc = acc + (S[j] * E[m - j]).scale(j)
        E[m] = acc.scale(Fraction(1, m))
    return DiagonalSeries(E)


def log_pleth(f: DiagonalSeries) -> DiagonalSeries:
    """Inverse of :func:`exp_pleth` via the ordinary log and Möbius inversion."""
    if f.constant() != RatFunc(1) or len(f.comps[0].terms) != 1:
        raise ValueError("plethystic logarithm needs constant term 1")
    k, N = f.k, f.N
    L = [SymSeries.zero(k, N) for _ in range(N + 1)]
    for m in range(1, N + 1):
        acc = f.comps[m].scale(m)
        for j in range(1, m):
            if L[j] and f.comps[m - j]:
                acc = acc - (L[j] * f.comps[m - j]).scale(j)
        L[m] = acc.scale(Fraction(1, m))
    U = [L[m].scale(m) for m in range(N + 1)]
    V = [SymSeries.zero(k, N) for _ in range(N + 1)]
    for n in range(1, N + 1):
        acc = SymSeries.zero(k, N)
        for d in divisors(n):
            mu = mobius(d)
            if mu and U[n // d]:
                acc = acc + U[n // d].adams(d).scale(mu)
        V[n] = acc.scale(Fraction(1, n))
    return DiagonalSeries(V)
