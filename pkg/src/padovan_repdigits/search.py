"""Brute-force scan of small Padovan numbers and the closing comparison."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .bounds import SEARCH_LIMIT
from .errors import ClosureGapError
from .repdigits import RepdigitConcat, parse_concat
from .sequences import _CACHE, padovan


@dataclass(frozen=True, order=True)
class SolutionRecord:
    n: int
    concat: RepdigitConcat
    value: int

    def __post_init__(self):
        if padovan(self.n) != self.value or self.concat.value != self.value:
            raise ValueError(f"P_{self.n} is not {self.concat}")

    def as_dict(self) -> dict:
        c = self.concat
        return {"n": self.n, "d1": c.d1, "d2": c.d2, "l1": c.l1, "l2": c.l2,
                "value": str(self.value)}

    @classmethod
    def from_dict(cls, d: dict) -> "SolutionRecord":
        return cls(int(d["n"]), RepdigitConcat(d["d1"], d["d2"], d["l1"], d["l2"]),
                   int(d["value"]))


def _scan(indices: range) -> list[SolutionRecord]:
    out = []
    for n in indices:
        rc = parse_concat(padovan(n))
        if rc is not None:
            out.append(SolutionRecord(n, rc, rc.value))
    return out


def brute_force(n_max: int = SEARCH_LIMIT, threads: int = 1) -> list[SolutionRecord]:
    """Every n in 0..n_max whose P_n is a two-block concatenation, ascending in n."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    _CACHE.extend_to(n_max)
    if threads <= 1:
        return _scan(range(n_max + 1))
    step = -(-(n_max + 1) // threads)
    chunks = [range(i, min(i + step, n_max + 1)) for i in range(0, n_max + 1, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return [rec for part in pool.map(_scan, chunks) for rec in part]


def verify_solution(n: int, rc: RepdigitConcat) -> bool:
    return padovan(n) == rc.value


@dataclass(frozen=True)
class Closure:
    n_reduced: int
    n_search: int
    solutions: tuple[SolutionRecord, ...]

    @property
    def values(self) -> list[int]:
        return sorted({s.value for s in self.solutions})


def closure_check(n_reduced: int, n_search: int = SEARCH_LIMIT,
                  solutions: list[SolutionRecord] | None = None,
                  assumed: int = SEARCH_LIMIT) -> Closure:
    """Close the argument: a solution missed by the search has n > n_search yet n <= n_reduced.

    The reduction bounds were derived assuming n > ``assumed``, so the search
    must reach at least that far as well.
    """
    if n_search < assumed:
        raise ClosureGapError(n_reduced, n_search,
                              f"search cutoff {n_search} is below the bound hypothesis n > {assumed}")
    if n_reduced >= n_search:
        raise ClosureGapError(n_reduced, n_search)
    if solutions is None:
        solutions = brute_force(n_search)
    return Closure(n_reduced, n_search, tuple(solutions))
