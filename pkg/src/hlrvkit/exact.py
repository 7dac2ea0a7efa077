"""Exact arithmetic: sparse integer polynomials and normalized rational functions.

Polynomials are stored as a tuple of variable names plus a dictionary mapping
exponent vectors to Python integers.  Variables are kept in a fixed global
order (``q < t``, ``z < w``, then anything else alphabetically) and unused
variables are dropped, so two equal polynomials are always structurally equal.

Rational functions keep ``gcd(num, den) = 1`` with a positive leading
coefficient on the denominator (graded lexicographic order).  The polynomial
gcd itself is delegated to sympy's sparse ``PolyElement`` (heuristic gcd over
``ZZ``), everything else is implemented here.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd as igcd
from typing import Dict, Iterable, Mapping, Tuple, Union

from sympy import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring as sympy_ring

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]

_PREFERRED = ("q", "t", "z", "w")


class PoleError(ArithmeticError):
    """Raised when evaluating a rational function at a zero of its denominator."""


class NotPolynomialError(ValueError):
    """Raised when a rational function is asked for as a polynomial but is not one."""


def var_key(name: str):
    if name in _PREFERRED:
        return (0, _PREFERRED.index(name), name)
    return (1, 0, name)


def _grlex_key(e: Exponent):
    # variables are stored in increasing order, so the largest variable is last
    return (sum(e), e[::-1])


class MPoly:
    """Sparse multivariate polynomial with integer coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Iterable[str] = (), terms: Mapping[Exponent, int] | None = None):
        vars = tuple(vars)
        terms = {} if terms is None else terms
        if list(vars) != sorted(vars, key=var_key) or len(set(vars)) != len(vars):
            order = sorted(set(vars), key=var_key)
            merged: Dict[Exponent, int] = {}
            for e, c in terms.items():
                ne = tuple(sum(e[j] for j, v in enumerate(vars) if v == name) for name in order)
                merged[ne] = merged.get(ne, 0) + c
            vars, terms = tuple(order), merged
        # prune zeros and unused variables
        clean = {e: int(c) for e, c in terms.items() if c}
        used = [i for i in range(len(vars)) if any(e[i] for e in clean)]
        if len(used) != len(vars):
            vars = tuple(vars[i] for i in used)
            clean = {tuple(e[i] for i in used): c for e, c in clean.items()}
        self.vars: Tuple[str, ...] = vars
        self.terms: Dict[Exponent, int] = clean
        self._hash = None

    # -- construction -------------------------------------------------------
    @classmethod
    def const(cls, c: int) -> MPoly:
        return cls((), {(): int(c)} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> MPoly:
        return cls((name,), {(power,): 1})

    @classmethod
    def _raw(cls, vars: Tuple[str, ...], terms: Dict[Exponent, int]) -> MPoly:
        # caller guarantees ordered vars and no zero coefficients; unused vars are trimmed
        obj = object.__new__(cls)
        if vars and terms:
            used = [i for i in range(len(vars)) if any(e[i] for e in terms)]
            if len(used) != len(vars):
                vars = tuple(vars[i] for i in used)
                terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
        elif not terms:
            vars = ()
        obj.vars, obj.terms, obj._hash = vars, terms, None
        return obj

    # -- basic predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.vars

    def const_value(self) -> int:
        if self.vars:
            raise ValueError("polynomial is not constant")
        return self.terms.get((), 0)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- alignment ----------------------------------------------------------
    def embed(self, vars: Tuple[str, ...]) -> Dict[Exponent, int]:
        """Term dictionary re-indexed over a superset of variables."""
        if vars == self.vars:
            return self.terms
        pos = [vars.index(v) for v in self.vars]
        n = len(vars)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, p in enumerate(pos):
                ne[p] = e[i]
            out[tuple(ne)] = c
        return out

    @staticmethod
    def common_vars(*polys: MPoly) -> Tuple[str, ...]:
        first = polys[0].vars
        if all(p.vars == first for p in polys[1:]):
            return first
        names = set()
        for p in polys:
            names.update(p.vars)
        return tuple(sorted(names, key=var_key))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> MPoly:
        if isinstance(other, int):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        vars = MPoly.common_vars(self, other)
        out = dict(self.embed(vars))
        for e, c in other.embed(vars).items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly._raw(vars, out)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        return MPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> MPoly:
        if isinstance(other, int):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> MPoly:
        return (-self) + other

    def __mul__(self, other) -> MPoly:
        if isinstance(other, int):
            if other == 0:
                return MPoly.const(0)
            return MPoly._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return MPoly.const(0)
        vars = MPoly.common_vars(self, other)
        a, b = self.embed(vars), other.embed(vars)
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exponent, int] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return MPoly._raw(vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MPoly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = MPoly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure ----------------------------------------------------------
    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def sorted_terms(self):
        """Terms in decreasing graded lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def leading_coeff(self) -> int:
        if not self.terms:
            return 0
        return max(self.terms.items(), key=lambda kv: _grlex_key(kv[0]))[1]

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = igcd(g, c)
        return g

    def exact_div_int(self, c: int) -> MPoly:
        return MPoly._raw(self.vars, {e: v // c for e, v in self.terms.items()})

    def scale_exponents(self, d: int) -> MPoly:
        """Substitute v -> v^d for every variable."""
        return MPoly._raw(self.vars, {tuple(x * d for x in e): c for e, c in self.terms.items()})

    def monomial_subs(self, table: Mapping[str, Tuple[str, int]]) -> MPoly:
        """Substitute v -> new_name^power for the variables listed in ``table``."""
        names, powers = [], []
        for v in self.vars:
            nv, k = table.get(v, (v, 1))
            names.append(nv)
            powers.append(k)
        target = tuple(sorted(set(names), key=var_key))
        pos = [target.index(n) for n in names]
        out: Dict[Exponent, int] = {}
        for e, c in self.terms.items():
            ne = [0] * len(target)
            for i, x in enumerate(e):
                ne[pos[i]] += x * powers[i]
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c
        return MPoly._raw(target, {e: c for e, c in out.items() if c})

    def reverse_in(self, var: str) -> Tuple[MPoly, int]:
        """Return (t^deg * f(1/t), deg) where deg is the degree of f in ``var``."""
        if var not in self.vars:
            return self, 0
        i = self.vars.index(var)
        deg = self.degree(var)
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] = deg - e[i]
            out[tuple(ne)] = c
        return MPoly._raw(self.vars, out), deg

    def eval(self, point: Mapping[str, Scalar]) -> Fraction:
        total = Fraction(0)
        vals = [Fraction(point[v]) for v in self.vars]
        for e, c in self.terms.items():
            term = Fraction(c)
            for v, x in zip(vals, e):
                if x:
                    term *= v ** x
            total += term
        return total

    def partial_eval(self, point: Mapping[str, Scalar]) -> RatFunc:
        """Substitute rational values for some variables; the result is a RatFunc."""
        keep = tuple(v for v in self.vars if v not in point)
        keep_pos = [self.vars.index(v) for v in keep]
        sub_pos = [(i, Fraction(point[v])) for i, v in enumerate(self.vars) if v in point]
        out: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            coef = Fraction(c)
            for i, val in sub_pos:
                if e[i]:
                    coef *= val ** e[i]
            ne = tuple(e[i] for i in keep_pos)
            out[ne] = out.get(ne, 0) + coef
        denom = 1
        for c in out.values():
            denom = denom * c.denominator // igcd(denom, c.denominator)
        num = MPoly._raw(keep, {e: int(c * denom) for e, c in out.items() if c})
        return RatFunc(num, MPoly.const(denom))

    def __repr__(self) -> str:
        return f"MPoly({self})"

    def __str__(self) -> str:
        return format_terms(self.vars, self.sorted_terms())


def format_terms(vars: Tuple[str, ...], terms) -> str:
    if not terms:
        return "0"
    pieces = []
    for e, c in terms:
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in zip(vars, e) if k
        )
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)


@lru_cache(maxsize=64)
def _sympy_ring(vars: Tuple[str, ...]):
    return sympy_ring(",".join(vars), ZZ, grlex)[0]


def poly_cofactors(a: MPoly, b: MPoly) -> Tuple[MPoly, MPoly, MPoly]:
    """(g, a/g, b/g) with g = gcd(a, b) over the integers."""
    vars = MPoly.common_vars(a, b)
    if not vars:
        g = igcd(a.const_value(), b.const_value()) or 1
        return MPoly.const(g), MPoly.const(a.const_value() // g), MPoly.const(b.const_value() // g)
    R = _sympy_ring(vars)
    fa = R.from_dict(a.embed(vars))
    fb = R.from_dict(b.embed(vars))
    g, ca, cb = fa.cofactors(fb)
    conv = lambda f: MPoly._raw(vars, {tuple(e): int(c) for e, c in f.items()})
    return conv(g), conv(ca), conv(cb)


class RatFunc:
    """Quotient of integer polynomials in canonical form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MPoly | int = 0, den: MPoly | int = 1, normalize: bool = True):
        if isinstance(num, int):
            num = MPoly.const(num)
        if isinstance(den, int):
            den = MPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if normalize:
            num, den = _normalize(num, den)
        self.num, self.den, self._hash = num, den, None

    @classmethod
    def coerce(cls, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, MPoly):
            return cls(x, MPoly.const(1), normalize=False)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return cls(MPoly.const(x), MPoly.const(1), normalize=False)
        if isinstance(x, Fraction):
            return cls(MPoly.const(x.numerator), MPoly.const(x.denominator), normalize=False)
        if isinstance(x, str):
            return parse(x)
        raise TypeError(f"cannot convert {type(x).__name__} to RatFunc")

    @classmethod
    def var(cls, name: str, power: int = 1) -> RatFunc:
        return cls(MPoly.var(name, power), MPoly.const(1), normalize=False)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def is_poly(self) -> bool:
        return self.den == _ONE_POLY

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, MPoly)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    @property
    def vars(self) -> Tuple[str, ...]:
        return MPoly.common_vars(self.num, self.den)

    # -- field operations ---------------------------------------------------
    def __add__(self, other) -> RatFunc:
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            if self.den == _ONE_POLY:
                return RatFunc(self.num + other.num, _ONE_POLY, normalize=False)
            return RatFunc(self.num + other.num, self.den)
        if self.den.is_const() and other.den.is_const():
            a, b = self.den.const_value(), other.den.const_value()
            l = a * b // igcd(a, b)
            return RatFunc(self.num * (l // a) + other.num * (l // b), MPoly.const(l))
        g, da, db = poly_cofactors(self.den, other.den)
        num = self.num * db + other.num * da
        return RatFunc(num, self.den * db)

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den, normalize=False)

    def __sub__(self, other) -> RatFunc:
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> RatFunc:
        return (-self) + other

    def __mul__(self, other) -> RatFunc:
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc(0)
        if self.is_poly() and other.is_poly():
            return RatFunc(self.num * other.num, _ONE_POLY, normalize=False)
        # cross-cancel so that the product is already reduced
        _, n1, d2 = _cancel(self.num, other.den)
        _, n2, d1 = _cancel(other.num, self.den)
        num, den = n1 * n2, d1 * d2
        if den.leading_coeff() < 0:
            num, den = -num, -den
        return RatFunc(num, den, normalize=False)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        num, den = self.den, self.num
        if den.leading_coeff() < 0:
            num, den = -num, -den
        return RatFunc(num, den, normalize=False)

    def __truediv__(self, other) -> RatFunc:
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> RatFunc:
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> RatFunc:
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, normalize=False)

    # -- substitutions ------------------------------------------------------
    def adams(self, d: int) -> RatFunc:
        """Replace every variable v by v^d (coprimality and sign are preserved)."""
        if d < 1:
            raise ValueError("Adams operation needs d >= 1")
        if d == 1:
            return self
        return RatFunc(self.num.scale_exponents(d), self.den.scale_exponents(d), normalize=False)

    def monomial_subs(self, table: Mapping[str, Tuple[str, int]]) -> RatFunc:
        return RatFunc(self.num.monomial_subs(table), self.den.monomial_subs(table))

    def invert_var(self, var: str) -> RatFunc:
        """f(..., 1/var, ...) in canonical form."""
        n, a = self.num.reverse_in(var)
        d, b = self.den.reverse_in(var)
        shift = b - a
        if shift > 0:
            n = n * MPoly.var(var, shift)
        elif shift < 0:
            d = d * MPoly.var(var, -shift)
        return RatFunc(n, d)

    def subs(self, mapping: Mapping[str, object]) -> RatFunc:
        """Substitute arbitrary rational functions (or numbers) for variables."""
        vals = {v: RatFunc.coerce(x) for v, x in mapping.items()}
        return _poly_subs(self.num, vals) / _poly_subs(self.den, vals)

    def partial_eval(self, point: Mapping[str, Scalar]) -> RatFunc:
        den = self.den.partial_eval(point)
        if den.is_zero():
            raise PoleError(f"denominator vanishes at {dict(point)}")
        return self.num.partial_eval(point) / den

    def eval(self, point: Mapping[str, Scalar]) -> Fraction:
        d = self.den.eval(point)
        if d == 0:
            raise PoleError(f"denominator vanishes at {dict(point)}")
        return self.num.eval(point) / d

    def to_poly(self) -> MPoly:
        if self.den != _ONE_POLY:
            raise NotPolynomialError(f"not a polynomial: {self}")
        return self.num

    def to_fraction(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"not a constant: {self}")
        return Fraction(self.num.const_value(), self.den.const_value())

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        if self.den == _ONE_POLY:
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if self.den.is_const():
            return f"{num}/{self.den}"
        return f"{num}/({self.den})"


_ONE_POLY = MPoly.const(1)


def _cancel(a: MPoly, b: MPoly) -> Tuple[MPoly, MPoly, MPoly]:
    if b == _ONE_POLY or a == _ONE_POLY:
        return _ONE_POLY, a, b
    if a.is_const() or b.is_const():
        g = igcd(a.content(), b.content())
        if g == 1:
            return _ONE_POLY, a, b
        return MPoly.const(g), a.exact_div_int(g), b.exact_div_int(g)
    return poly_cofactors(a, b)


def _normalize(num: MPoly, den: MPoly) -> Tuple[MPoly, MPoly]:
    if num.is_zero():
        return num, _ONE_POLY
    if den.is_const():
        c = den.const_value()
        g = igcd(num.content(), c)
        if c < 0:
            g = -g
        if g != 1:
            num, den = num.exact_div_int(g), MPoly.const(c // g)
        return num, den
    _, num, den = poly_cofactors(num, den)
    if den.leading_coeff() < 0:
        num, den = -num, -den
    return num, den


def _poly_subs(p: MPoly, vals: Mapping[str, RatFunc]) -> RatFunc:
    total = RatFunc(0)
    powers: Dict[Tuple[str, int], RatFunc] = {}
    for e, c in p.terms.items():
        term = RatFunc(c)
        for v, k in zip(p.vars, e):
            if not k:
                continue
            if v in vals:
                key = (v, k)
                if key not in powers:
                    powers[key] = vals[v] ** k
                term = term * powers[key]
            else:
                term = term * RatFunc.var(v, k)
        total = total + term
    return total


# -- functional interface ---------------------------------------------------

def rf_arith(a, b, op: str) -> RatFunc:
    a, b = RatFunc.coerce(a), RatFunc.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_adams(a, d: int) -> RatFunc:
    return RatFunc.coerce(a).adams(d)


def rf_to_poly(a) -> MPoly:
    return RatFunc.coerce(a).to_poly()


def rf_eval(a, point: Mapping[str, Scalar]) -> Fraction:
    return RatFunc.coerce(a).eval(point)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens, self.i = tokens, 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if value is not None and tok != ("op", value):
            raise ValueError(f"expected {value!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self) -> RatFunc:
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> RatFunc:
        acc = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            acc = acc * rhs if op == "*" else acc / rhs
        return acc

    def factor(self) -> RatFunc:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.factor()
        if self.peek() == ("op", "+"):
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, k = self.take()
            if kind != "num":
                raise ValueError("exponent must be an integer")
            base = base ** (sign * k)
        return base

    def atom(self) -> RatFunc:
        kind, val = self.take()
        if kind == "num":
            return RatFunc(val)
        if kind == "name":
            return RatFunc.var(val)
        if val == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ValueError(f"unexpected token {val!r}")


def parse(text: str) -> RatFunc:
    """Parse the canonical string form (or any arithmetic expression) into a RatFunc."""
    p = _Parser(_tokenize(text))
    out = p.expr()
    if p.i != len(p.tokens):
        raise ValueError(f"trailing input in {text!r}")
    return out


def parse_poly(text: str) -> MPoly:
    return parse(text).to_poly()


def rf(x) -> RatFunc:
    """Shorthand coercion used throughout the package."""
    return RatFunc.coerce(x)
