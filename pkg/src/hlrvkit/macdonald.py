"""Macdonald symmetric functions P_λ, Q_λ, J_λ, modified H̃_λ and (q,t)-Kostka polynomials.

P_λ is computed from the tableau formula P_λ = Σ_T ψ_T x^T; an independent
Gram–Schmidt construction under the (q,t)-pairing serves as an oracle.
Everything is exact; coefficients live in ℚ(q,t).
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import MPoly, RatFunc, parse
from .partitions import (Partition, arm_leg_hook, as_partition, dominance_leq, n_stat,
                         partitions_of, ssyt_chains)
from .symfunc import (SymSeries, from_m_coefficients, from_s_coefficients, hall_pair_qt,
                      m_in_p, s_coefficients)

log = logging.getLogger(__name__)

CACHE_VERSION = 1
CACHE_ENV = "HLRVKIT_CACHE_DIR"

Q = RatFunc.var("q")
T = RatFunc.var("t")


def _mono(a: int, b: int) -> RatFunc:
    return RatFunc(MPoly(("q", "t"), {(a, b): 1}), 1, normalize=False)


def b_cell(lam: Sequence[int], s: Tuple[int, int]) -> RatFunc:
    i, j = s
    if not (1 <= i <= len(lam) and 1 <= j <= lam[i - 1]):
        return RatFunc(1)
    a, l, _ = arm_leg_hook(lam, s)
    return (1 - _mono(a, l + 1)) / (1 - _mono(a + 1, l))


@lru_cache(maxsize=None)
def b_c_factors(lam: Tuple[int, ...]) -> Tuple[RatFunc, RatFunc, RatFunc]:
    """(b_λ, c_λ, c'_λ) with c_λ = Π(1 - q^a t^{l+1}) and c'_λ = Π(1 - q^{a+1} t^l)."""
    lam = as_partition(lam)
    c = c_prime = RatFunc(1)
    for s in lam.cells():
        a, l, _ = arm_leg_hook(lam, s)
        c = c * (1 - _mono(a, l + 1))
        c_prime = c_prime * (1 - _mono(a + 1, l))
    return c / c_prime, c, c_prime


@lru_cache(maxsize=None)
def psi_strip(lam: Tuple[int, ...], mu: Tuple[int, ...]) -> RatFunc:
    """ψ_{λ/μ} = Π_{s ∈ R−C} b_μ(s)/b_λ(s) for a horizontal strip λ/μ."""
    strip = [(i + 1, j + 1) for i, r in enumerate(lam)
             for j in range(mu[i] if i < len(mu) else 0, r)]
    rows = {i for i, _ in strip}
    cols = {j for _, j in strip}
    out = RatFunc(1)
    for i in rows:
        for j in range(1, lam[i - 1] + 1):
            if j in cols:
                continue
            out = out * b_cell(mu, (i, j)) / b_cell(lam, (i, j))
    return out


@lru_cache(maxsize=None)
def _P_in_m(lam: Tuple[int, ...]) -> Tuple[Tuple[Partition, RatFunc], ...]:
    n = sum(lam)
    out = []
    for mu in partitions_of(n):
        if not dominance_leq(mu, lam):
            continue
        total = RatFunc(0)
        for chain in ssyt_chains(lam, mu):
            w = RatFunc(1)
            for k in range(1, len(chain)):
                w = w * psi_strip(tuple(chain[k]), tuple(chain[k - 1]))
            total = total + w
        if total:
            out.append((mu, total))
    return tuple(out)


def macdonald_P(lam: Sequence[int]) -> Dict[Partition, RatFunc]:
    """m-expansion of P_λ(x;q,t) from the semistandard tableau formula."""
    return dict(_P_in_m(tuple(as_partition(lam))))


def macdonald_P_oracle(lam: Sequence[int]) -> Dict[Partition, RatFunc]:
    """m-expansion of P_λ by Gram–Schmidt on the m-basis under ⟨,⟩_{q,t}.

    The basis is processed from (1ⁿ) upwards in reverse lexicographic order,
    which is a linear extension of dominance order.
    """
    lam = as_partition(lam)
    n = lam.weight
    basis = list(reversed(partitions_of(n)))
    done: List[Tuple[Partition, SymSeries, Dict[Partition, RatFunc], RatFunc]] = []
    for mu in basis:
        vec = m_in_p(mu)
        coeffs: Dict[Partition, RatFunc] = {mu: RatFunc(1)}
        for nu, pnu, cnu, norm in done:
            proj = hall_pair_qt(m_in_p(mu), pnu) / norm
            if proj:
                vec = vec - pnu.scale(proj)
                for key, c in cnu.items():
                    coeffs[key] = coeffs.get(key, RatFunc(0)) - proj * c
        coeffs = {k: v for k, v in coeffs.items() if v}
        if mu == lam:
            return coeffs
        done.append((mu, vec, coeffs, hall_pair_qt(vec, vec)))
    raise AssertionError("unreachable")


def P_in_p(lam: Sequence[int]) -> SymSeries:
    lam = as_partition(lam)
    return from_m_coefficients(macdonald_P(lam), N=lam.weight)


def Q_in_p(lam: Sequence[int]) -> SymSeries:
    b, _, _ = b_c_factors(tuple(as_partition(lam)))
    return P_in_p(lam).scale(b)


def J_in_p(lam: Sequence[int]) -> SymSeries:
    _, c, _ = b_c_factors(tuple(as_partition(lam)))
    return P_in_p(lam).scale(c)


def plethysm_x_over_1_minus_t(f: SymSeries) -> SymSeries:
    """f ↦ f[X/(1−t)] in the power-sum basis: p_ρ ↦ p_ρ / Π(1 − t^{ρ_i})."""
    out = {}
    for key, c in f.terms.items():
        d = RatFunc(1)
        for p in key:
            for r in p:
                d = d * (1 - T ** r)
        out[key] = c / d
    return SymSeries(f.k, f.N, out)


def modified_macdonald_from_P(lam: Sequence[int]) -> SymSeries:
    """H̃_λ(x;q,t) = t^{n(λ)} H_λ(x;q,1/t) with H_λ = J_λ[X/(1−t)], in the p-basis."""
    lam = as_partition(lam)
    H = plethysm_x_over_1_minus_t(J_in_p(lam))
    shift = T ** n_stat(lam)
    return H.map_coeffs(lambda c: c.invert_var("t") * shift)


# -- cache ------------------------------------------------------------------

@dataclass
class MacdonaldCacheEntry:
    lam: Partition
    P_in_m: Dict[Partition, RatFunc]
    Htilde_in_s: Dict[Partition, MPoly]
    Htilde_in_p: SymSeries = field(repr=False, default=None)

    def __post_init__(self):
        if self.Htilde_in_p is None:
            self.Htilde_in_p = from_s_coefficients(
                {mu: RatFunc.coerce(c) for mu, c in self.Htilde_in_s.items()}, N=self.lam.weight)

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam),
            "P_in_m": [[list(mu), str(c)] for mu, c in sorted(self.P_in_m.items(), reverse=True)],
            "Htilde_in_s": [[list(mu), str(c)] for mu, c in sorted(self.Htilde_in_s.items(), reverse=True)],
        }

    @classmethod
    def from_json(cls, data: dict) -> MacdonaldCacheEntry:
        return cls(
            lam=Partition(data["lambda"]),
            P_in_m={Partition(mu): parse(c) for mu, c in data["P_in_m"]},
            Htilde_in_s={Partition(mu): parse(c).to_poly() for mu, c in data["Htilde_in_s"]},
        )


def compute_entry(lam: Sequence[int]) -> MacdonaldCacheEntry:
    lam = as_partition(lam)
    Ht = modified_macdonald_from_P(lam)
    kostka = {}
    for mu, c in s_coefficients(Ht, lam.weight).items():
        kostka[mu] = c.to_poly()   # raises NotPolynomialError on an integrality failure
    return MacdonaldCacheEntry(lam, macdonald_P(lam), kostka, Ht)


_MEMORY: Dict[Partition, MacdonaldCacheEntry] = {}


def default_cache_dir() -> Optional[Path]:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return None


def _cache_file(cache_dir: Path, n: int) -> Path:
    return Path(cache_dir) / f"macdonald_n{n}.json"


def _read_cache(cache_dir: Path, n: int) -> Optional[Dict[Partition, MacdonaldCacheEntry]]:
    path = _cache_file(cache_dir, n)
    if not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
        if data.get("version") != CACHE_VERSION:
            log.warning("Macdonald cache %s has version %s, expected %s; rebuilding",
                        path, data.get("version"), CACHE_VERSION)
            return None
        entries = {e.lam: e for e in map(MacdonaldCacheEntry.from_json, data["entries"])}
        if set(entries) != set(partitions_of(n)):
            raise ValueError("incomplete entry list")
        return entries
    except Exception as exc:  # corrupt file: recompute rather than fail
        log.warning("ignoring unreadable Macdonald cache %s (%s)", path, exc)
        return None


def _write_cache(cache_dir: Path, n: int, entries: Dict[Partition, MacdonaldCacheEntry]) -> None:
    path = _cache_file(cache_dir, n)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"version": CACHE_VERSION,
               "entries": [entries[lam].to_json() for lam in partitions_of(n)]}
    tmp = path.with_suffix(f".tmp{os.getpid()}")
    tmp.write_text(json.dumps(payload, indent=1))
    os.replace(tmp, path)   # atomic rename keeps readers safe from partial writes


def macdonald_table(n: int, cache_dir: Optional[os.PathLike] = None, jobs: int = 1) -> Dict[Partition, MacdonaldCacheEntry]:
    """Entries for every λ ⊢ n, using memory, then the disk cache, then computation."""
    lams = partitions_of(n)
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    if all(lam in _MEMORY for lam in lams):
        entries = {lam: _MEMORY[lam] for lam in lams}
        if cache_dir is not None and not _cache_file(cache_dir, n).exists():
            _write_cache(cache_dir, n, entries)
        return entries
    entries = _read_cache(cache_dir, n) if cache_dir is not None else None
    if entries is None:
        missing = [lam for lam in lams if lam not in _MEMORY]
        if jobs > 1 and len(missing) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                computed = list(pool.map(compute_entry, missing))
        else:
            computed = [compute_entry(lam) for lam in missing]
        for e in computed:
            _MEMORY[e.lam] = e
        entries = {lam: _MEMORY[lam] for lam in lams}
        if cache_dir is not None:
            _write_cache(cache_dir, n, entries)
    else:
        _MEMORY.update(entries)
    return entries


def modified_macdonald(lam: Sequence[int], cache_dir: Optional[os.PathLike] = None) -> SymSeries:
    lam = as_partition(lam)
    if lam in _MEMORY:
        return _MEMORY[lam].Htilde_in_p
    return macdonald_table(lam.weight, cache_dir)[lam].Htilde_in_p


def kostka_qt(mu: Sequence[int], cache_dir: Optional[os.PathLike] = None) -> Dict[Partition, MPoly]:
    """K̃_{λμ}(q,t): Schur coefficients of H̃_μ, as integer polynomials."""
    mu = as_partition(mu)
    if mu in _MEMORY:
        return dict(_MEMORY[mu].Htilde_in_s)
    return dict(macdonald_table(mu.weight, cache_dir)[mu].Htilde_in_s)


def clear_memory_cache() -> None:
    _MEMORY.clear()
