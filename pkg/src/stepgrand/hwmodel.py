"""Clock-cycle model of a pipelined guess-and-test decoder.

Models the decoder hardware at the scheduling level: a log2(n)-stage
reliability sorter, one time step that covers every single-flip test, one
that covers every two-flip test, and for each higher flip count a sweep of
composite-syndrome steps, one per anchor (the pattern's lowest ranks, all
but the final two). Within one step a bank of precomputed two-flip syndromes
tests every completion of that anchor at once.

Two counters are exposed per frame. frame_cycles is start-to-finish latency
including the sorter. pipeline_cycles drops the sorter stages for frames
that need pattern tests: back-to-back frames overlap those stages, so the
sustained-throughput cost of a frame excludes them. Averages quoted per
frame use pipeline_cycles; worst-case figures use frame_cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .decoder import ABANDONED, CLEAN, HIT, DecodeTrace
from .patterns import StepSchedule


def combination_rank(values: Sequence[int], n_total: int) -> int:
    """1-based position of an ascending tuple from [1..n_total] in the
    lexicographic enumeration of same-size tuples."""
    p = len(values)
    rank = 1
    prev = 0
    for i, a in enumerate(values):
        if not prev < a <= n_total:
            raise ValueError(f"values must ascend within [1..{n_total}]")
        for v in range(prev + 1, a):
            rank += math.comb(n_total - v, p - i - 1)
        prev = a
    return rank


@dataclass(frozen=True)
class LatencyModel:
    """Cycle counts for a schedule on a power-of-two block length."""

    n: int
    schedule: StepSchedule

    def __post_init__(self) -> None:
        if self.n < 2 or self.n & (self.n - 1):
            raise ValueError(
                f"the sorter pipeline needs a power-of-two n, got {self.n}"
            )
        for gamma, _ in self.schedule.entries:
            if gamma > self.n:
                raise ValueError(f"schedule subset {gamma} exceeds n={self.n}")

    @property
    def sorter_cycles(self) -> int:
        return self.n.bit_length() - 1

    # initial hard-word check + the single-flip step + the two-flip step
    fixed_overhead = 3

    def _subset_size(self, weight: int) -> int:
        for gamma, hw in self.schedule.entries:
            if hw == weight:
                return gamma
        raise ValueError(f"schedule has no weight-{weight} entry")

    def composite_steps(self, weight: int) -> int:
        """Time steps a full sweep of the given flip count takes."""
        if weight < 3:
            raise ValueError("composite syndromes start at three flips")
        gamma = self._subset_size(weight)
        return math.comb(gamma - 2, weight - 2)

    @cached_property
    def worst_case(self) -> int:
        total = self.fixed_overhead + self.sorter_cycles
        for _, hw in self.schedule.entries:
            if hw >= 3:
                total += self.composite_steps(hw)
        return total

    def frame_cycles(self, trace: DecodeTrace) -> int:
        """Latency of one frame, sorter included."""
        if trace.outcome == CLEAN:
            return 1
        if trace.outcome == ABANDONED:
            return self.worst_case
        if trace.outcome != HIT:
            raise ValueError(f"unknown trace outcome {trace.outcome!r}")
        if trace.weight is None or trace.ranks is None:
            raise ValueError("hit trace must carry weight and ranks")
        if len(trace.ranks) != trace.weight:
            raise ValueError("trace weight disagrees with its ranks")
        cycles = 1 + self.sorter_cycles + 1
        if trace.weight == 1:
            return cycles
        cycles += 1
        if trace.weight == 2:
            return cycles
        for _, hw in self.schedule.entries:
            if 3 <= hw < trace.weight:
                cycles += self.composite_steps(hw)
        gamma = self._subset_size(trace.weight)
        anchor = trace.ranks[: trace.weight - 2]
        return cycles + combination_rank(anchor, gamma - 2)

    def pipeline_cycles(self, trace: DecodeTrace) -> int:
        """Per-frame cost with the sorter stages overlapped away."""
        if trace.outcome == CLEAN:
            return 1
        return self.frame_cycles(trace) - self.sorter_cycles


def worst_case_cycles(model: LatencyModel) -> int:
    return model.worst_case


def frame_cycles(trace: DecodeTrace, model: LatencyModel) -> int:
    return model.frame_cycles(trace)


def average_cycles(counts: Sequence[float]) -> float:
    if not counts:
        raise ValueError("need at least one frame")
    return sum(counts) / len(counts)


def latency_seconds(cycles: float, clock_hz: float) -> float:
    return cycles / clock_hz


def info_throughput_bps(k: int, clock_hz: float, cycles_per_frame: float) -> float:
    """Information throughput when every frame takes the given cycle count."""
    return k * clock_hz / cycles_per_frame
