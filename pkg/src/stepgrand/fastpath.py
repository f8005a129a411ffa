"""Vectorized decode engines for the simulation harness.

The reference loop in `decoder` tests one pattern at a time; these engines
reproduce its decisions bit for bit (same streams, same first-match rule,
same query accounting) using precomputed numpy tables, which is what makes
million-frame sweeps practical. Differential tests pin the equivalence.

Syndromes are packed into int32 scalars (block lengths here leave n - k well
under 31 bits), so a membership test is an integer compare.

Hard-input engine: pattern syndromes are frame-independent, so each weight
class is precomputed and sorted once; a decode is one binary search per
weight class. Soft-input engines depend on the per-frame reliability
permutation, so they gather per-pattern column syndromes and XOR-reduce
them in growing blocks, stopping at the first block with a match.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .codes import LinearCode
from .decoder import DecoderSpec, GrandabSpec


def packed_parity_columns(code: LinearCode) -> np.ndarray:
    """Single-flip syndromes as int32, one per position."""
    if code.n - code.k > 31:
        raise ValueError("packed engine supports at most 31 parity bits")
    return np.array(code.parity_columns, dtype=np.int32)


@dataclass(frozen=True)
class HitReport:
    """One frame's outcome from an engine.

    stream_position is the 0-based index of the matching pattern (-1 when
    the stream ran out), positions the flipped bit indexes, ascending.
    """

    stream_position: int
    positions: tuple[int, ...]


class HardEngine:
    """Weight-ordered hard-input sweep with per-weight syndrome tables."""

    def __init__(self, code: LinearCode, spec: GrandabSpec):
        self.code = code
        self.spec = spec
        cols = packed_parity_columns(code)
        self.weight_tables = []
        offset = 0
        for w in range(1, spec.max_weight + 1):
            idx = np.array(
                list(itertools.combinations(range(code.n), w)), dtype=np.int32
            )
            syn = cols[idx[:, 0]].copy()
            for j in range(1, w):
                syn ^= cols[idx[:, j]]
            order = np.argsort(syn, kind="stable")
            self.weight_tables.append(
                {
                    "positions": idx,
                    "sorted_syn": syn[order],
                    "order": order.astype(np.int64),
                    "offset": offset,
                }
            )
            offset += len(idx)
        self.pattern_count = offset

    def decode_frames(self, syndromes: np.ndarray) -> list[HitReport]:
        """Resolve a batch of nonzero frame syndromes in stream order."""
        m = len(syndromes)
        best_pos = np.full(m, -1, dtype=np.int64)
        best_row = np.zeros(m, dtype=np.int64)
        best_weight = np.zeros(m, dtype=np.int64)
        unresolved = np.arange(m)
        for w, table in enumerate(self.weight_tables, start=1):
            if unresolved.size == 0:
                break
            s = syndromes[unresolved]
            at = np.searchsorted(table["sorted_syn"], s, side="left")
            at_clipped = np.minimum(at, len(table["sorted_syn"]) - 1)
            hit = table["sorted_syn"][at_clipped] == s
            hit &= at < len(table["sorted_syn"])
            frames = unresolved[hit]
            rows = table["order"][at_clipped[hit]]
            best_row[frames] = rows
            best_weight[frames] = w
            best_pos[frames] = table["offset"] + rows
            unresolved = unresolved[~hit]
        reports = []
        for f in range(m):
            if best_pos[f] < 0:
                reports.append(HitReport(-1, ()))
            else:
                table = self.weight_tables[best_weight[f] - 1]
                positions = tuple(int(p) for p in table["positions"][best_row[f]])
                reports.append(HitReport(int(best_pos[f]), positions))
        return reports


class SoftEngine:
    """Rank-pattern sweep against a per-frame reliability permutation."""

    # block boundaries grow geometrically so early hits stay cheap while a
    # full scan costs only a few large vector passes
    first_block = 1024
    growth = 4

    def __init__(self, code: LinearCode, spec: DecoderSpec, n: int | None = None):
        self.code = code
        self.spec = spec
        n = code.n if n is None else n
        teps = list(spec.teps(n))
        width = max((t.weight for t in teps), default=1)
        idx = np.full((len(teps), width), n, dtype=np.int32)
        weights = np.zeros(len(teps), dtype=np.int8)
        for row, tep in enumerate(teps):
            weights[row] = tep.weight
            for j, r in enumerate(tep.ranks):
                idx[row, j] = r - 1
        self.rank_index = idx
        self.weights = weights
        self.pattern_count = len(teps)
        edges = [0]
        b = self.first_block
        while edges[-1] < len(teps):
            edges.append(min(edges[-1] + b, len(teps)))
            b *= self.growth
        self.block_edges = edges

    def scan(self, rank_syndromes: np.ndarray, target: int) -> int:
        """First stream position whose pattern syndrome equals target, else -1.

        rank_syndromes holds the frame's single-flip syndrome per reliability
        rank (0-based), with one extra 0 entry at index n for the pad slots.
        """
        for lo, hi in zip(self.block_edges, self.block_edges[1:]):
            gathered = rank_syndromes[self.rank_index[lo:hi]]
            syn = np.bitwise_xor.reduce(gathered, axis=1)
            eq = syn == target
            j = int(np.argmax(eq))
            if eq[j]:
                return lo + j
        return -1

    def decode_frame(self, perm: np.ndarray, columns: np.ndarray, target: int
                     ) -> HitReport:
        """perm maps rank-1 (index 0) to the bit position holding that rank."""
        sigma = np.append(columns[perm], np.int32(0))
        row = self.scan(sigma, target)
        if row < 0:
            return HitReport(-1, ())
        w = int(self.weights[row])
        ranks = self.rank_index[row, :w]
        positions = tuple(sorted(int(perm[r]) for r in ranks))
        return HitReport(row, positions)

    def hit_ranks(self, stream_position: int) -> tuple[int, ...]:
        """1-based reliability ranks of the pattern at a stream position."""
        w = int(self.weights[stream_position])
        return tuple(int(r) + 1 for r in self.rank_index[stream_position, :w])


def build_engine(code: LinearCode, spec: DecoderSpec):
    if isinstance(spec, GrandabSpec):
        return HardEngine(code, spec)
    return SoftEngine(code, spec)
