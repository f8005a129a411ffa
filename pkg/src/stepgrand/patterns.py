"""Test-error-pattern streams and reliability bookkeeping.

A pattern is a set of 1-based reliability ranks (rank 1 = least reliable
position). Streams are lazy generators in a fixed, documented order:

- weight-ordered: all weight-1 patterns over positions, then weight-2, ...,
  each weight in lexicographic order of ascending tuples (hard-input search);
- stepped subsets: a schedule of (subset size, weight) entries, weight
  ascending while the subset of least-reliable ranks shrinks;
- logistic-weight ordered: ascending sum of ranks, one level at a time, each
  level emitting partitions into distinct parts, fewer parts first.

Lexicographic order on ascending tuples fixes the lowest rank first, which is
also the order the composite-syndrome hardware sweep visits patterns, so the
first stream hit and the first hardware hit coincide.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .channel import SoftVector
from .gf2 import BitWord, word_from_indices


@dataclass(frozen=True)
class Tep:
    """A test error pattern: strictly increasing 1-based reliability ranks."""

    ranks: tuple[int, ...]

    def __post_init__(self) -> None:
        prev = 0
        for r in self.ranks:
            if r <= prev:
                raise ValueError(f"ranks must be strictly increasing, got {self.ranks}")
            prev = r

    @property
    def weight(self) -> int:
        return len(self.ranks)

    @property
    def logistic_weight(self) -> int:
        return sum(self.ranks)


@dataclass(frozen=True)
class StepSchedule:
    """Shrinking-subset weight schedule: entries[i] = (gamma, hw) with hw = i+1.

    Weight hw is searched over the gamma least-reliable ranks; gamma strictly
    decreases as hw grows.
    """

    alpha: int
    beta: int
    p_max: int
    entries: tuple[tuple[int, int], ...]


def build_step_schedule(
    alpha: int, beta: int, p_max: int, n: int | None = None
) -> StepSchedule:
    """Build the (gamma, hw) schedule for the stepped-subset decoder.

    The p_max weights are split into alpha segments of p_max/alpha weights.
    Segment i (1-based) starts at gamma = T(alpha-i+1) * (p_max/alpha) * beta,
    where T(j) = j(j+1)/2, and shrinks by (alpha-i+1)*beta per weight.

    If n is given, the largest subset must fit the block length (gamma_1 <= n).
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    if p_max < 1:
        raise ValueError(f"p_max must be >= 1, got {p_max}")
    if p_max % alpha != 0:
        raise ValueError(f"alpha={alpha} does not divide p_max={p_max}")
    per_segment = p_max // alpha
    entries: list[tuple[int, int]] = []
    hw = 1
    for i in range(1, alpha + 1):
        seg = alpha - i + 1
        gamma = (seg * (seg + 1) // 2) * per_segment * beta
        for _ in range(per_segment):
            entries.append((gamma, hw))
            hw += 1
            gamma -= seg * beta
    for gamma, hw in entries:
        if gamma < hw:
            raise ValueError(
                f"subset size {gamma} is smaller than weight {hw}; "
                f"increase beta (beta >= p_max keeps every entry feasible)"
            )
    for (g_prev, _), (g_next, _) in zip(entries, entries[1:]):
        if g_next >= g_prev:
            raise ValueError("subset sizes must strictly decrease")
    if n is not None and entries[0][0] > n:
        raise ValueError(
            f"largest subset {entries[0][0]} exceeds block length n={n}"
        )
    return StepSchedule(alpha, beta, p_max, tuple(entries))


def step_grand_teps(schedule: StepSchedule) -> Iterator[Tep]:
    """All patterns of the schedule: per entry, weight-hw subsets of the gamma
    least-reliable ranks in lexicographic order."""
    for gamma, hw in schedule.entries:
        for combo in itertools.combinations(range(1, gamma + 1), hw):
            yield Tep(combo)


def grandab_teps(n: int, max_weight: int) -> Iterator[Tep]:
    """Weight-ordered patterns over all n positions, weights 1..max_weight.

    Hard-input search: ranks are plain 1-based channel positions. max_weight=0
    yields the empty stream (only the unmodified word is ever tested).
    """
    if not 0 <= max_weight <= n:
        raise ValueError(f"max_weight must be in [0, {n}], got {max_weight}")
    for w in range(1, max_weight + 1):
        for combo in itertools.combinations(range(1, n + 1), w):
            yield Tep(combo)


def max_logistic_weight(n: int) -> int:
    """Largest possible rank sum: the all-positions pattern, n(n+1)/2."""
    return n * (n + 1) // 2


def distinct_partitions(total: int, n_parts: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """Partitions of total into exactly n_parts distinct parts in [1, max_part],
    as ascending tuples in colexicographic order (smallest largest-part first)."""
    if n_parts == 0:
        if total == 0:
            yield ()
        return
    if n_parts == 1:
        if 1 <= total <= max_part:
            yield (total,)
        return
    for big in range(n_parts, max_part + 1):
        rest = total - big
        if rest < (n_parts - 1) * n_parts // 2:
            break
        if rest > (n_parts - 1) * (2 * big - n_parts) // 2:
            continue
        for sub in distinct_partitions(rest, n_parts - 1, big - 1):
            yield sub + (big,)


def orbgrand_teps(n: int, lw_max: int, p_max: int) -> Iterator[Tep]:
    """Logistic-weight-ordered patterns: rank sums 1..lw_max ascending; within
    a level, fewer parts first, then colex; at most p_max ranks per pattern."""
    if not 0 <= lw_max <= max_logistic_weight(n):
        raise ValueError(
            f"lw_max must be in [0, {max_logistic_weight(n)}], got {lw_max}"
        )
    if p_max < 1:
        raise ValueError(f"p_max must be >= 1, got {p_max}")
    for lw in range(1, lw_max + 1):
        for parts in range(1, p_max + 1):
            for combo in distinct_partitions(lw, parts, n):
                yield Tep(combo)


@dataclass(frozen=True)
class SortedReliability:
    """Rank-to-position map for one frame.

    perm[i] is the 0-based channel position holding reliability rank i+1;
    abs_llr[i] is that position's |llr|, so abs_llr is nondecreasing.
    """

    perm: np.ndarray
    abs_llr: np.ndarray


def sort_reliability(v: SoftVector) -> SortedReliability:
    """Stable sort of positions by |llr| ascending (ties keep channel order)."""
    mags = np.abs(v.llr)
    perm = np.argsort(mags, kind="stable")
    return SortedReliability(perm=perm, abs_llr=mags[perm])


def map_ranks(tep: Tep, n: int, sorted_rel: SortedReliability | None = None) -> BitWord:
    """Noise word with ones at the channel positions of the pattern's ranks.

    Without a reliability sort, rank r means channel position r-1.
    """
    if tep.ranks and tep.ranks[-1] > n:
        raise ValueError(f"rank {tep.ranks[-1]} out of range for n={n}")
    if sorted_rel is None:
        positions = [r - 1 for r in tep.ranks]
    else:
        positions = [int(sorted_rel.perm[r - 1]) for r in tep.ranks]
    return BitWord(n, word_from_indices(n, positions))
