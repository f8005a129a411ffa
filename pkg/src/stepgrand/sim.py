"""Monte-Carlo AWGN sweep harness.

Frames are generated and decoded in fixed-size chunks of 1024. Each chunk's
randomness comes from a counter-keyed Philox stream derived from (seed, point
index, chunk index), and chunk results are committed in chunk order, so the
output is byte-identical for any worker count: workers only change how many
chunks are in flight, never which frames exist or how they are totaled. The
stop rule (enough frame errors, or the frame cap) is evaluated after each
committed chunk.

Per-frame statistics follow the decoder conventions: query counts include
the initial hard-word membership test; a frame error is a wrong message or
an abandonment; bit errors on failed frames come from the recovered message
(falling back to the hard-decision word when no codeword was found). Cycle
statistics exist only for the stepped-schedule variant on power-of-two block
lengths: the average uses the pipelined per-frame counter, worst-case
figures use full frame latency.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .channel import SoftVector, noise_sigma, quantize
from .codes import LinearCode
from .decoder import HIT, DecodeTrace, DecoderSpec, StepGrandSpec
from .fastpath import HardEngine, SoftEngine, build_engine, packed_parity_columns
from .gf2 import BitWord
from .hwmodel import LatencyModel

CHUNK_FRAMES = 1024
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SweepConfig:
    """Everything one sweep needs; workers never affect the numbers."""

    code: LinearCode
    variants: tuple[DecoderSpec, ...]
    ebn0_db: tuple[float, ...]
    min_frame_errors: int = 100
    max_frames: int = 100_000_000
    seed: int = 0
    quantize: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.variants:
            raise ValueError("need at least one decoder variant")
        if not self.ebn0_db:
            raise ValueError("ebn0_db list must not be empty")
        if self.min_frame_errors < 1:
            raise ValueError("min_frame_errors must be >= 1")
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class PointStats:
    """Aggregates for one decoder variant at one Eb/N0 point."""

    ebn0_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    avg_queries: float
    avg_cycles: float | None
    wc_queries_obs: int
    wc_cycles_obs: int | None
    capped: bool

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self._k) if self._k else 0.0

    # message length is stashed by the harness so ber needs no code handle
    _k: int = 0


@dataclass(frozen=True)
class ComparePoint:
    """Per-variant stats at one point under common random numbers, with the
    discordant-frame matrix: discordant[i][j] counts frames where variant i
    erred and variant j did not."""

    ebn0_db: float
    frames: int
    capped: bool
    stats: tuple[PointStats, ...]
    discordant: tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# Statistics helpers


def wilson_interval(successes: int, trials: int, z: float = 1.96
                    ) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes out of range")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


def sign_test_pvalue(worse: int, total: int) -> float:
    """Exact one-sided sign test: probability that a fair coin over the
    discordant frames lands on the 'worse' side at least this often."""
    if total < 0 or not 0 <= worse <= total:
        raise ValueError("need 0 <= worse <= total")
    if total == 0:
        return 1.0
    tail = sum(math.comb(total, i) for i in range(worse, total + 1))
    return float(Fraction(tail, 1 << total))


# ---------------------------------------------------------------------------
# Chunk worker

# Module-level state so process pools can build the heavy tables once per
# worker instead of pickling them with every chunk.
_STATE: dict = {}


def _init_worker(code: LinearCode, variants: tuple[DecoderSpec, ...],
                 quantize_flag: bool) -> None:
    n, k = code.n, code.k
    g32 = code.generator.to_array().astype(np.float32)
    h_t32 = code.parity_check.to_array().T.astype(np.float32)
    cols = packed_parity_columns(code)
    engines = [build_engine(code, spec) for spec in variants]
    models = []
    power_of_two = n >= 2 and n & (n - 1) == 0
    for spec in variants:
        if isinstance(spec, StepGrandSpec) and power_of_two:
            models.append(LatencyModel(n, spec.schedule(n)))
        else:
            models.append(None)
    _STATE.clear()
    _STATE.update(
        code=code, variants=variants, engines=engines, models=models,
        g32=g32, h_t32=h_t32, cols=cols, n=n, k=k,
        bit_place=(1 << np.arange(n - k, dtype=np.int64)),
        quantize=quantize_flag,
    )


def _bit_errors(code: LinearCode, hard_row: np.ndarray, guess_positions,
                msg_row: np.ndarray) -> int:
    word = BitWord.from_array(hard_row)
    if guess_positions:
        word = word.flip(guess_positions)
    recovered = code.recover_message(word)
    return (recovered ^ BitWord.from_array(msg_row)).weight()


def _run_chunk(point_index: int, chunk_index: int, ebn0_db: float,
               frames_used: int, seed: int):
    code: LinearCode = _STATE["code"]
    n, k = _STATE["n"], _STATE["k"]
    key = [seed & _MASK64, ((point_index << 32) | chunk_index) & _MASK64]
    rng = np.random.Generator(np.random.Philox(key=key))
    msgs = rng.integers(0, 2, size=(CHUNK_FRAMES, k), dtype=np.uint8)
    noise = rng.standard_normal((CHUNK_FRAMES, n))
    msgs = msgs[:frames_used]
    noise = noise[:frames_used]

    sigma = noise_sigma(ebn0_db, k / n)
    cw = (msgs.astype(np.float32) @ _STATE["g32"]) % 2
    y = (1.0 - 2.0 * cw) + sigma * noise
    llr = 2.0 * y / (sigma * sigma)
    if _STATE["quantize"]:
        llr = quantize(SoftVector(llr=llr)).llr
    hard = (llr < 0).astype(np.uint8)
    cw8 = cw.astype(np.uint8)
    e_true = hard ^ cw8

    syn_bits = ((hard.astype(np.float32) @ _STATE["h_t32"]) % 2).astype(np.int64)
    s_int = (syn_bits @ _STATE["bit_place"]).astype(np.int32)
    nonclean = np.flatnonzero(s_int != 0)
    e_any = e_true.any(axis=1)

    soft_needed = any(isinstance(e, SoftEngine) for e in _STATE["engines"])
    perms = None
    if soft_needed and nonclean.size:
        perms = np.argsort(np.abs(llr[nonclean]), axis=1, kind="stable")

    true_positions = {
        int(f): tuple(int(p) for p in np.flatnonzero(e_true[f])) for f in nonclean
    }

    out = []
    error_flags = []
    for engine, model in zip(_STATE["engines"], _STATE["models"]):
        queries = np.ones(frames_used, dtype=np.int64)
        errors = np.zeros(frames_used, dtype=bool)
        errors |= (s_int == 0) & e_any  # wrong codeword accepted at query 1
        frame_lat = np.ones(frames_used, dtype=np.int64) if model else None
        pipe = np.ones(frames_used, dtype=np.int64) if model else None

        if isinstance(engine, HardEngine):
            reports = engine.decode_frames(s_int[nonclean])
        else:
            reports = [
                engine.decode_frame(perms[i], _STATE["cols"], int(s_int[f]))
                for i, f in enumerate(nonclean)
            ]
        for i, f in enumerate(nonclean):
            report = reports[i]
            if report.stream_position < 0:
                errors[f] = True
                queries[f] = 1 + engine.pattern_count
                if model:
                    frame_lat[f] = model.worst_case
                    pipe[f] = model.worst_case - model.sorter_cycles
            else:
                queries[f] = report.stream_position + 2
                errors[f] = report.positions != true_positions[int(f)]
                if model:
                    ranks = engine.hit_ranks(report.stream_position)
                    trace = DecodeTrace(
                        outcome=HIT, weight=len(ranks), ranks=ranks,
                        stream_position=report.stream_position,
                    )
                    frame_lat[f] = model.frame_cycles(trace)
                    pipe[f] = model.pipeline_cycles(trace)

        bit_errors = 0
        report_by_frame = dict(zip(nonclean.tolist(), reports))
        for f in np.flatnonzero(errors):
            report = report_by_frame.get(int(f))
            guess = report.positions if report and report.stream_position >= 0 else ()
            bit_errors += _bit_errors(code, hard[f], guess, msgs[f])

        out.append(
            (
                int(errors.sum()),
                bit_errors,
                int(queries.sum()),
                int(pipe.sum()) if model else None,
                int(queries.max()),
                int(frame_lat.max()) if model else None,
            )
        )
        error_flags.append(errors)

    v = len(error_flags)
    discord = [[0] * v for _ in range(v)]
    for i in range(v):
        for j in range(v):
            if i != j:
                discord[i][j] = int((error_flags[i] & ~error_flags[j]).sum())
    return frames_used, out, discord


# ---------------------------------------------------------------------------
# Point and sweep drivers


class _Accumulator:
    def __init__(self) -> None:
        self.frames = 0
        self.errors = 0
        self.bit_errors = 0
        self.queries = 0
        self.cycles: int | None = 0
        self.wc_q = 0
        self.wc_c: int | None = 0

    def add(self, frames: int, row) -> None:
        errors, bit_errors, queries, cycles, wc_q, wc_c = row
        self.frames += frames
        self.errors += errors
        self.bit_errors += bit_errors
        self.queries += queries
        if cycles is None:
            self.cycles = None
            self.wc_c = None
        else:
            self.cycles += cycles
            self.wc_c = max(self.wc_c, wc_c)
        self.wc_q = max(self.wc_q, wc_q)

    def stats(self, ebn0_db: float, k: int, capped: bool) -> PointStats:
        return PointStats(
            ebn0_db=ebn0_db,
            frames=self.frames,
            frame_errors=self.errors,
            bit_errors=self.bit_errors,
            avg_queries=self.queries / self.frames,
            avg_cycles=None if self.cycles is None else self.cycles / self.frames,
            wc_queries_obs=self.wc_q,
            wc_cycles_obs=self.wc_c,
            capped=capped,
            _k=k,
        )


def _chunk_plan(max_frames: int) -> list[int]:
    """Frame count of each chunk, honoring the cap exactly."""
    chunks = []
    remaining = max_frames
    while remaining > 0:
        take = min(CHUNK_FRAMES, remaining)
        chunks.append(take)
        remaining -= take
    return chunks


def _results_in_order(cfg: SweepConfig, point_index: int, ebn0: float,
                      plan: Sequence[int], executor) -> Iterator[tuple]:
    if executor is None:
        for ci, frames_used in enumerate(plan):
            yield _run_chunk(point_index, ci, ebn0, frames_used, cfg.seed)
        return
    window = cfg.workers * 2
    futures: dict[int, object] = {}
    submitted = 0
    for ci in range(len(plan)):
        while submitted < min(len(plan), ci + window):
            futures[submitted] = executor.submit(
                _run_chunk, point_index, submitted, ebn0, plan[submitted], cfg.seed
            )
            submitted += 1
        yield futures.pop(ci).result()


def _simulate_point(cfg: SweepConfig, point_index: int, ebn0: float,
                    executor) -> ComparePoint:
    accs = [_Accumulator() for _ in cfg.variants]
    v = len(cfg.variants)
    discord = [[0] * v for _ in range(v)]
    plan = _chunk_plan(cfg.max_frames)
    frames = 0
    for frames_used, rows, chunk_discord in _results_in_order(
        cfg, point_index, ebn0, plan, executor
    ):
        frames += frames_used
        for acc, row in zip(accs, rows):
            acc.add(frames_used, row)
        for i in range(v):
            for j in range(v):
                discord[i][j] += chunk_discord[i][j]
        if all(acc.errors >= cfg.min_frame_errors for acc in accs):
            break
    capped = not all(acc.errors >= cfg.min_frame_errors for acc in accs)
    stats = tuple(acc.stats(ebn0, cfg.code.k, capped) for acc in accs)
    return ComparePoint(
        ebn0_db=ebn0,
        frames=frames,
        capped=capped,
        stats=stats,
        discordant=tuple(tuple(r) for r in discord),
    )


def _simulate(cfg: SweepConfig) -> list[ComparePoint]:
    if cfg.workers == 1:
        _init_worker(cfg.code, cfg.variants, cfg.quantize)
        return [
            _simulate_point(cfg, pi, ebn0, None)
            for pi, ebn0 in enumerate(cfg.ebn0_db)
        ]
    with ProcessPoolExecutor(
        max_workers=cfg.workers,
        initializer=_init_worker,
        initargs=(cfg.code, cfg.variants, cfg.quantize),
    ) as executor:
        return [
            _simulate_point(cfg, pi, ebn0, executor)
            for pi, ebn0 in enumerate(cfg.ebn0_db)
        ]


def run_point(cfg: SweepConfig, ebn0_db: float) -> PointStats:
    """Simulate a single point for a single-variant config."""
    if len(cfg.variants) != 1:
        raise ValueError("run_point expects exactly one variant")
    single = SweepConfig(
        code=cfg.code, variants=cfg.variants, ebn0_db=(ebn0_db,),
        min_frame_errors=cfg.min_frame_errors, max_frames=cfg.max_frames,
        seed=cfg.seed, quantize=cfg.quantize, workers=cfg.workers,
    )
    return _simulate(single)[0].stats[0]


# ---------------------------------------------------------------------------
# CSV emission


def _fmt_float(x: float | None, spec: str) -> str:
    return "" if x is None else format(x, spec)


def _metadata_lines(cfg: SweepConfig) -> list[str]:
    lines = [
        "# stepgrand sweep",
        f"# code={cfg.code.name} n={cfg.code.n} k={cfg.code.k}",
    ]
    if len(cfg.variants) == 1:
        lines.append(f"# variant={cfg.variants[0].label}")
    else:
        lines.append("# variants=" + ";".join(s.label for s in cfg.variants))
        for i, spec in enumerate(cfg.variants, start=1):
            lines.append(f"# v{i}={spec.label}")
    lines += [
        "# ebn0_db=" + ",".join(format(e, "g") for e in cfg.ebn0_db),
        f"# seed={cfg.seed} min_frame_errors={cfg.min_frame_errors}"
        f" max_frames={cfg.max_frames} quantize={int(cfg.quantize)}"
        f" chunk_frames={CHUNK_FRAMES}",
        "# queries include the initial hard-decision membership test",
        "# avg_cycles: pipelined per-frame counter (sorter stages overlapped);"
        " wc_cycles_obs: full frame latency; cycles are modeled only for the"
        " stepped-schedule variant on power-of-two block lengths",
    ]
    return lines


_STAT_COLUMNS = (
    "frame_errors,bit_errors,fer,ber,avg_queries,avg_cycles,"
    "wc_queries_obs,wc_cycles_obs"
)


def _stat_cells(s: PointStats) -> list[str]:
    return [
        str(s.frame_errors),
        str(s.bit_errors),
        format(s.fer, ".6e"),
        format(s.ber, ".6e"),
        format(s.avg_queries, ".6f"),
        _fmt_float(s.avg_cycles, ".6f"),
        str(s.wc_queries_obs),
        "" if s.wc_cycles_obs is None else str(s.wc_cycles_obs),
    ]


def _open_out(out):
    if out == "-":
        return sys.stdout, False
    return open(Path(out), "w"), True


def write_sweep_csv(cfg: SweepConfig, points: Sequence[ComparePoint], out) -> None:
    fh, close = _open_out(out)
    try:
        for line in _metadata_lines(cfg):
            print(line, file=fh)
        if len(cfg.variants) == 1:
            print(f"ebn0_db,frames,{_STAT_COLUMNS},capped", file=fh)
            for point in points:
                s = point.stats[0]
                cells = [format(point.ebn0_db, "g"), str(point.frames)]
                cells += _stat_cells(s)
                cells.append(str(int(point.capped)))
                print(",".join(cells), file=fh)
        else:
            per_variant = [
                ",".join(f"v{i}_{c}" for c in _STAT_COLUMNS.split(","))
                for i in range(1, len(cfg.variants) + 1)
            ]
            print("ebn0_db,frames," + ",".join(per_variant) + ",capped", file=fh)
            for point in points:
                cells = [format(point.ebn0_db, "g"), str(point.frames)]
                for s in point.stats:
                    cells += _stat_cells(s)
                cells.append(str(int(point.capped)))
                print(",".join(cells), file=fh)
    finally:
        if close:
            fh.close()


def run_sweep(cfg: SweepConfig, out=None) -> list[PointStats]:
    """Simulate every configured point for a single variant; optionally write
    the CSV to a path or '-' for stdout."""
    if len(cfg.variants) != 1:
        raise ValueError("run_sweep expects exactly one variant; use"
                         " compare_decoders for several")
    points = _simulate(cfg)
    if out is not None:
        write_sweep_csv(cfg, points, out)
    return [p.stats[0] for p in points]


def compare_decoders(cfg: SweepConfig, out=None) -> list[ComparePoint]:
    """Simulate all variants under common random numbers per frame."""
    if len(cfg.variants) < 2:
        raise ValueError("compare_decoders needs at least two variants")
    points = _simulate(cfg)
    if out is not None:
        write_sweep_csv(cfg, points, out)
    return points
