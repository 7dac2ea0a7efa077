"""Positive braid words, walks, and exact braid-matrix computations.

Conventions
-----------
* Permutations are one-line tuples on ``1..n``; ``a * b`` is the composition
  ``x ↦ a(b(x))``.  The permutation matrix of ``w`` sends ``e_j`` to ``e_{w(j)}``.
* A :class:`BraidWord` stores letters in *walk order*: ``letters[m-1] = i_m``
  for ``β = σ_{i_ℓ} ⋯ σ_{i_1}``, i.e. the rightmost factor is position 1.
* ``B_k(ε) = s_k · (I + ε e_{k,k+1})`` and ``B_β(ε⃗) = B_{i_ℓ}(ε_ℓ) ⋯ B_{i_1}(ε_1)``.
* Walk states are ``p_0, …, p_ℓ`` with ``p_m ∈ {p_{m-1}, s_{i_m} p_{m-1}}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


class NotInBraidVarietyError(ValueError):
    """The braid matrix product of a point is not upper triangular."""


# -- permutations -----------------------------------------------------------

class Perm(tuple):
    """One-line notation (w(1), …, w(n))."""

    def __new__(cls, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(range(1, n + 1))

    @classmethod
    def simple(cls, i: int, n: int) -> Perm:
        if not 1 <= i < n:
            raise ValueError(f"s_{i} is not a simple reflection of S_{n}")
        w = list(range(1, n + 1))
        w[i - 1], w[i] = w[i], w[i - 1]
        return cls(w)

    @classmethod
    def from_word(cls, word: Iterable[int], n: int) -> Perm:
        """s_{j_1} ∘ s_{j_2} ∘ ⋯ for the given list of indices."""
        w = cls.identity(n)
        for j in word:
            w = w * cls.simple(j, n)
        return w

    @property
    def n(self) -> int:
        return len(self)

    def __call__(self, x: int) -> int:
        return self[x - 1]

    def __mul__(self, other: Perm) -> Perm:
        return Perm(self[other[i] - 1] for i in range(len(other)))

    def inverse(self) -> Perm:
        inv = [0] * len(self)
        for i, v in enumerate(self, start=1):
            inv[v - 1] = i
        return Perm(inv)

    def length(self) -> int:
        n = len(self)
        return sum(1 for a in range(n) for b in range(a + 1, n) if self[a] > self[b])

    def left_mul_simple(self, i: int) -> Perm:
        """s_i ∘ self: swap the values i and i+1."""
        return Perm(i + 1 if v == i else i if v == i + 1 else v for v in self)

    def raises_length(self, i: int) -> bool:
        """ℓ(s_i ∘ self) > ℓ(self), i.e. value i occurs before value i+1."""
        return self.index(i) < self.index(i + 1)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self, start=1))

    def matrix(self) -> Matrix:
        n = len(self)
        M = [[Fraction(0)] * n for _ in range(n)]
        for j, v in enumerate(self):
            M[v - 1][j] = Fraction(1)
        return M

    def label(self) -> str:
        word = reduced_word(self)
        return "".join(f"s{j}" for j in word) if word else "id"

    def __repr__(self) -> str:
        return f"Perm({list(self)})"


def all_perms(n: int) -> List[Perm]:
    return [Perm(p) for p in permutations(range(1, n + 1))]


def reduced_word(w: Perm) -> List[int]:
    """Lexicographically least reduced word: w = s_{j_1} ∘ ⋯ ∘ s_{j_r}."""
    w = Perm(w)
    word = []
    while not w.is_identity():
        j = next(i for i in range(1, w.n) if not w.raises_length(i))
        word.append(j)
        w = w.left_mul_simple(j)
    return word


def coset_min_reps(n: int, mu: Sequence[int]) -> List[Perm]:
    """Minimal-length representatives of W/W_μ: increasing on each block of positions."""
    if sum(mu) != n:
        raise ValueError("μ must be a partition of n")
    blocks, start = [], 0
    for part in mu:
        blocks.append(range(start, start + part))
        start += part
    out = []
    for p in permutations(range(1, n + 1)):
        if all(p[i] < p[i + 1] for b in blocks for i in list(b)[:-1]):
            out.append(Perm(p))
    return out


# -- braid words ------------------------------------------------------------

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: Tuple[int, ...]   # walk order: letters[m-1] = i_m

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(i) for i in self.letters))
        if any(not 1 <= i < self.n for i in self.letters):
            raise ValueError(f"letters must lie in 1..{self.n - 1}: {self.letters}")

    @classmethod
    def from_product(cls, n: int, product: Sequence[int]) -> BraidWord:
        """From the left-to-right product σ_{a_1} σ_{a_2} ⋯ (so i_1 is the last factor)."""
        return cls(n, tuple(reversed(tuple(product))))

    def __len__(self) -> int:
        return len(self.letters)

    def product_letters(self) -> Tuple[int, ...]:
        return tuple(reversed(self.letters))

    def product_string(self) -> str:
        return "".join(f"σ{str(i).translate(_SUB)}" for i in self.product_letters())

    def underlying_perm(self) -> Perm:
        """s(β) = s_{i_ℓ} ∘ ⋯ ∘ s_{i_1}."""
        return Perm.from_word(self.product_letters(), self.n)


def lift(w: Perm) -> List[int]:
    """Product letters of the positive lift [w]."""
    return reduced_word(w)


def shape_braid(g: int, n: int, taus: Sequence[Perm], ws: Sequence[Perm]) -> BraidWord:
    """β(w⃗) = Π_j [τ_{2j-1}][τ_{2j}][τ_{2j-1}⁻¹][τ_{2j}⁻¹] · Π_i [ẇ_i][ẇ_i⁻¹] (left-to-right product)."""
    if len(taus) != 2 * g:
        raise ValueError(f"genus {g} needs {2 * g} permutations τ")
    product: List[int] = []
    for j in range(g):
        a, b = Perm(taus[2 * j]), Perm(taus[2 * j + 1])
        for x in (a, b, a.inverse(), b.inverse()):
            product += lift(x)
    for w in ws:
        w = Perm(w)
        product += lift(w) + lift(w.inverse())
    return BraidWord.from_product(n, product)


# -- walks ------------------------------------------------------------------

@dataclass(frozen=True)
class Walk:
    braid: BraidWord
    states: Tuple[Perm, ...]
    up: FrozenSet[int]
    down: FrozenSet[int]
    stay: FrozenSet[int]

    @classmethod
    def from_states(cls, braid: BraidWord, states: Sequence[Perm]) -> Walk:
        states = tuple(Perm(p) for p in states)
        if len(states) != len(braid) + 1:
            raise ValueError("a walk of β has ℓ(β)+1 states")
        up, down, stay = set(), set(), set()
        for m, i in enumerate(braid.letters, start=1):
            prev, cur = states[m - 1], states[m]
            moved = prev.left_mul_simple(i)
            if prev.raises_length(i):
                if cur != moved:
                    raise ValueError(f"position {m} must go up")
                up.add(m)
            elif cur == moved:
                down.add(m)
            elif cur == prev:
                stay.add(m)
            else:
                raise ValueError(f"illegal step at position {m}")
        return cls(braid, states, frozenset(up), frozenset(down), frozenset(stay))

    def is_valid(self) -> bool:
        try:
            again = Walk.from_states(self.braid, self.states)
        except ValueError:
            return False
        return (again == self and self.states[0].is_identity() and self.states[-1].is_identity()
                and len(self.up) == len(self.down))

    def labels(self) -> Tuple[str, ...]:
        return tuple(p.label() for p in self.states)

    def to_json(self) -> dict:
        return {"states": [list(p) for p in self.states], "U": sorted(self.up),
                "D": sorted(self.down), "S": sorted(self.stay)}


def enumerate_walks(beta: BraidWord) -> List[Walk]:
    """All walks from id to id, in depth-first order (down before stay)."""
    n, letters, ell = beta.n, beta.letters, len(beta)
    ident = Perm.identity(n)
    out: List[Walk] = []
    path = [ident]
    lengths = [0]

    def dfs(m: int):
        if m == ell:
            if path[-1].is_identity():
                out.append(Walk.from_states(beta, path))
            return
        prev = path[-1]
        i = letters[m]
        moves = []
        if prev.raises_length(i):
            moves.append((prev.left_mul_simple(i), lengths[-1] + 1))
        else:
            moves.append((prev.left_mul_simple(i), lengths[-1] - 1))
            moves.append((prev, lengths[-1]))
        for state, l in moves:
            if l > ell - (m + 1):   # cannot get back to the identity in time
                continue
            path.append(state)
            lengths.append(l)
            dfs(m + 1)
            path.pop()
            lengths.pop()

    dfs(0)
    return out


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def blocks(self) -> List[FrozenSet]:
        groups: Dict[object, set] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), set()).add(x)
        return sorted((frozenset(v) for v in groups.values()), key=min)


def stay_reflections(walk: Walk) -> List[Perm]:
    """s̲_{i_m} = p_{m-1}⁻¹ s_{i_m} p_{m-1} for m ∈ S_p."""
    out = []
    n = walk.braid.n
    for m in sorted(walk.stay):
        prev = walk.states[m - 1]
        out.append(prev.inverse() * Perm.simple(walk.braid.letters[m - 1], n) * prev)
    return out


def orbits(gens: Iterable[Perm], n: int) -> List[FrozenSet[int]]:
    uf = _UnionFind(range(1, n + 1))
    for s in gens:
        for x in range(1, n + 1):
            uf.union(x, s(x))
    return uf.blocks()


def admissible(walk: Walk, g: int = 0, n: Optional[int] = None, taus: Sequence[Perm] = ()) -> bool:
    """⟨τ_1, …, τ_{2g}, s̲_{i_m} (m ∈ S_p)⟩ acts transitively on [n]."""
    n = walk.braid.n if n is None else n
    if len(taus) != 2 * g:
        raise ValueError(f"genus {g} needs {2 * g} permutations τ")
    return len(orbits(list(taus) + stay_reflections(walk), n)) == 1


# -- exact matrices ---------------------------------------------------------

def identity_matrix(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def braid_matrix(k: int, eps, n: int) -> Matrix:
    """B_k(ε) = s_k (I + ε e_{k,k+1})."""
    M = identity_matrix(n)
    M[k - 1][k] = Fraction(eps)
    M[k - 1], M[k] = M[k], M[k - 1]
    return M


def _apply_braid_letter(M: Matrix, k: int, eps: Fraction) -> None:
    """In place M ← B_k(ε) M: add ε·row(k+1) to row k, then swap the two rows."""
    a, b = M[k - 1], M[k]
    if eps:
        a = [x + eps * y for x, y in zip(a, b)]
    M[k - 1], M[k] = b, a


def braid_matrix_product(beta: BraidWord, eps: Sequence) -> Matrix:
    if len(eps) != len(beta):
        raise ValueError("need one coordinate per letter")
    M = identity_matrix(beta.n)
    for k, e in zip(beta.letters, eps):
        _apply_braid_letter(M, k, Fraction(e))
    return M


def partial_products(beta: BraidWord, eps: Sequence) -> List[Matrix]:
    M = identity_matrix(beta.n)
    out = [[row[:] for row in M]]
    for k, e in zip(beta.letters, eps):
        _apply_braid_letter(M, k, Fraction(e))
        out.append([row[:] for row in M])
    return out


def rank(M: Matrix) -> int:
    rows = [list(r) for r in M]
    if not rows or not rows[0]:
        return 0
    r, ncols = 0, len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def is_upper_triangular(M: Matrix) -> bool:
    return all(M[i][j] == 0 for i in range(len(M)) for j in range(i))


def bruhat_perm(M: Matrix) -> Perm:
    """The w with M ∈ B w B (B upper triangular), from ranks of lower-left blocks."""
    n = len(M)
    r = [[0] * (n + 1) for _ in range(n + 2)]   # r[i][j] = rank M[i..n, 1..j]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            r[i][j] = rank([row[:j] for row in M[i - 1:]])
    if r[1][n] != n:
        raise ValueError("matrix is singular")
    w = [0] * n
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if r[i][j] - r[i][j - 1] - r[i + 1][j] + r[i + 1][j - 1] == 1:
                w[j - 1] = i
    return Perm(w)


def bruhat_factor(M: Matrix) -> Tuple[Matrix, Perm, Matrix]:
    """M = b · p · L with b upper triangular and L unipotent upper triangular,
    L_{jk} ≠ 0 (j<k) only when p(j) > p(k).

    Row-reduce using only upward row operations and scalings; the accumulated
    operations E satisfy E·M = p·L, so b = E⁻¹.
    """
    n = len(M)
    A = [list(map(Fraction, row)) for row in M]
    E = identity_matrix(n)
    pivot_col: Dict[int, int] = {}   # row -> pivot column
    for r in range(n - 1, -1, -1):
        for c in sorted(pivot_col[rr] for rr in pivot_col):
            rr = next(x for x, y in pivot_col.items() if y == c)
            f = A[r][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[rr])]
                E[r] = [x - f * y for x, y in zip(E[r], E[rr])]
        c = next((j for j in range(n) if A[r][j] != 0 and j not in pivot_col.values()), None)
        if c is None:
            raise ValueError("matrix is singular")
        s = A[r][c]
        A[r] = [x / s for x in A[r]]
        E[r] = [x / s for x in E[r]]
        pivot_col[r] = c
    p = [0] * n
    for r, c in pivot_col.items():
        p[c] = r + 1
    perm = Perm(p)
    L = [A[perm[j] - 1][:] for j in range(n)]   # row j of L is row p(j) of p·L
    b = _upper_inverse(E)
    return b, perm, L


def _upper_inverse(E: Matrix) -> Matrix:
    n = len(E)
    inv = identity_matrix(n)
    for col in range(n):
        for i in range(col, -1, -1):
            s = inv[i][col] - sum((E[i][k] * inv[k][col] for k in range(i + 1, col + 1)), Fraction(0))
            inv[i][col] = s / E[i][i]
    for i in range(n):
        for j in range(i):
            inv[i][j] = Fraction(0)
    return inv


# -- points, cells and μmon -------------------------------------------------

def walk_of_point(beta: BraidWord, eps: Sequence) -> Walk:
    states = [bruhat_perm(M) for M in partial_products(beta, eps)]
    if not states[-1].is_identity():
        raise NotInBraidVarietyError(f"final product lies in B{states[-1].label()}B, not in B")
    return Walk.from_states(beta, states)


def cell_coordinates(beta: BraidWord, eps: Sequence) -> List[Fraction]:
    """ε'_m = (b_{i+1,i+1} ε_m + b_{i,i+1}) / b_{ii}, with b from the factorization of M_{m-1}."""
    out = []
    for M, k, e in zip(partial_products(beta, eps), beta.letters, eps):
        b, _, _ = bruhat_factor(M)
        out.append((b[k][k] * Fraction(e) + b[k - 1][k]) / b[k - 1][k - 1])
    return out


def cell_sample(beta: BraidWord, walk: Walk, coords: Mapping[int, object]) -> List[Fraction]:
    """A point ε⃗ of the cell of ``walk`` with the prescribed cell coordinates.

    ``coords`` maps positions in U_p ∪ S_p to values (nonzero on S_p, missing
    up-coordinates default to 0); positions in D_p are forced to ε' = 0.
    """
    for m in walk.stay:
        if Fraction(coords.get(m, 0)) == 0:
            raise ValueError(f"stay position {m} needs a nonzero coordinate")
    for m in coords:
        if m in walk.down and Fraction(coords[m]) != 0:
            raise ValueError(f"down position {m} has its coordinate forced to 0")
    M = identity_matrix(beta.n)
    eps: List[Fraction] = []
    for m, k in enumerate(beta.letters, start=1):
        b, _, _ = bruhat_factor(M)
        target = Fraction(coords.get(m, 0)) if m not in walk.down else Fraction(0)
        e = (target * b[k - 1][k - 1] - b[k - 1][k]) / b[k][k]
        eps.append(e)
        _apply_braid_letter(M, k, e)
    return eps


def suffix_perm(beta: BraidWord, m: int) -> Perm:
    """s_{>m}(β) = s_{i_ℓ} ∘ ⋯ ∘ s_{i_{m+1}}."""
    n = beta.n
    w = Perm.identity(n)
    for i in beta.letters[m:]:
        w = w.left_mul_simple(i)
    return w


def mumon_symbolic(beta: BraidWord, walk: Walk) -> List[Tuple[int, int, int]]:
    """For each stay m: (m, slot receiving −1/ε'_m, slot receiving ε'_m)."""
    out = []
    for m in sorted(walk.stay):
        i = beta.letters[m - 1]
        w = suffix_perm(beta, m)
        out.append((m, w(i), w(i + 1)))
    return out


def mumon_value(beta: BraidWord, walk: Walk, coords: Mapping[int, object]) -> List[Fraction]:
    diag = [Fraction(1)] * beta.n
    for m, a, b in mumon_symbolic(beta, walk):
        e = Fraction(coords[m])
        diag[a - 1] *= -1 / e
        diag[b - 1] *= e
    return diag


def mumon_check(beta: BraidWord, walk: Walk, coords: Mapping[int, object]) -> bool:
    """Sample the cell, and compare the torus part of the product with μmon."""
    eps = cell_sample(beta, walk, coords)
    M = braid_matrix_product(beta, eps)
    if not is_upper_triangular(M):
        return False
    diag = [M[i][i] for i in range(beta.n)]
    expected = mumon_value(beta, walk, coords)
    det = Fraction(1)
    for x in expected:
        det *= x
    return diag == expected and det == (-1) ** len(walk.stay)
