import numpy as np
import pytest

from stepgrand.channel import SoftVector, harden
from stepgrand.codes import build_bch, build_ca_polar
from stepgrand.decoder import (
    GrandabSpec,
    OrbgrandSpec,
    StepGrandSpec,
    decode,
)
from stepgrand.fastpath import (
    HardEngine,
    HitReport,
    SoftEngine,
    build_engine,
    packed_parity_columns,
)
from stepgrand.gf2 import BitWord


def literal_outcome(v, code, spec):
    result = decode(v, code, spec.teps(code.n), spec.uses_sorting)
    if result.abandoned:
        return (-1, ())
    if result.trace.outcome == "clean":
        return ("clean", ())
    positions = tuple(int(p) for p in np.flatnonzero(result.noise_guess.to_array()))
    return (result.trace.stream_position, positions)


class TestHardEngine:
    @pytest.mark.parametrize("ab", [1, 2, 3])
    def test_matches_literal_decoder(self, ab):
        code = build_bch(4, 2)
        spec = GrandabSpec(max_weight=ab)
        engine = HardEngine(code, spec)
        rng = np.random.default_rng(61)
        frames = []
        expected = []
        for _ in range(120):
            llr = rng.normal(1.0, 1.3, size=code.n)
            v = SoftVector(llr=llr)
            y = BitWord.from_array(harden(v))
            s = code.syndrome(y)
            if s.is_zero():
                continue
            frames.append(s.value)
            expected.append(literal_outcome(v, code, spec))
        reports = engine.decode_frames(np.array(frames, dtype=np.int32))
        got = [(r.stream_position, r.positions) for r in reports]
        assert got == expected
        assert engine.pattern_count == spec.pattern_count(code.n)

    def test_first_match_in_stream_order_wins(self):
        # craft two patterns with identical syndromes and check the earlier
        # stream index is reported
        code = build_bch(4, 2)
        engine = HardEngine(code, GrandabSpec(max_weight=3))
        cols = packed_parity_columns(code)
        target = int(cols[0] ^ cols[1] ^ cols[2])
        reports = engine.decode_frames(np.array([target], dtype=np.int32))
        report = reports[0]
        assert report.stream_position >= 0
        # walk the stream up to the reported position: no earlier pattern may
        # share the syndrome
        for i, tep in enumerate(GrandabSpec(3).teps(code.n)):
            syn = 0
            for r in tep.ranks:
                syn ^= int(cols[r - 1])
            if i < report.stream_position:
                assert syn != target
            elif i == report.stream_position:
                assert syn == target
                break


class TestSoftEngine:
    @pytest.mark.parametrize(
        "spec",
        [
            StepGrandSpec(alpha=1, beta=6, p_max=3),
            OrbgrandSpec(lw_max=20, p_max=3),
        ],
        ids=["stepgrand", "orbgrand"],
    )
    def test_matches_literal_decoder(self, spec):
        code = build_ca_polar(32, 20, crc=None)
        engine = SoftEngine(code, spec)
        cols = packed_parity_columns(code)
        rng = np.random.default_rng(67)
        checked = 0
        abandoned = 0
        for _ in range(150):
            llr = rng.normal(1.0, 1.1, size=code.n)
            v = SoftVector(llr=llr)
            y = BitWord.from_array(harden(v))
            s = code.syndrome(y)
            if s.is_zero():
                continue
            perm = np.argsort(np.abs(llr), kind="stable")
            report = engine.decode_frame(perm, cols, s.value)
            expected = literal_outcome(v, code, spec)
            assert (report.stream_position, report.positions) == expected
            checked += 1
            if report.stream_position < 0:
                abandoned += 1
        assert checked > 50
        assert abandoned > 0

    def test_block_edges_partition_the_stream(self):
        code = build_ca_polar(128, 105)
        engine = SoftEngine(code, StepGrandSpec(2, 6, 6))
        edges = engine.block_edges
        assert edges[0] == 0
        assert edges[-1] == engine.pattern_count == 8828
        assert all(a < b for a, b in zip(edges, edges[1:]))

    def test_hit_ranks_match_stream(self):
        code = build_ca_polar(32, 20, crc=None)
        spec = StepGrandSpec(alpha=1, beta=6, p_max=3)
        engine = SoftEngine(code, spec)
        stream = list(spec.teps(code.n))
        for row in (0, 5, 17, len(stream) - 1):
            assert engine.hit_ranks(row) == stream[row].ranks

    def test_scan_finds_planted_pattern(self):
        code = build_ca_polar(32, 20, crc=None)
        spec = StepGrandSpec(alpha=1, beta=6, p_max=3)
        engine = SoftEngine(code, spec)
        cols = packed_parity_columns(code)
        perm = np.arange(code.n)
        sigma = np.append(cols[perm], np.int32(0))
        # syndrome of ranks (2, 5) = columns 1 and 4
        target = int(cols[1] ^ cols[4])
        row = engine.scan(sigma, target)
        assert row >= 0
        hit = engine.hit_ranks(row)
        syn = 0
        for r in hit:
            syn ^= int(cols[r - 1])
        assert syn == target


class TestBuildEngine:
    def test_dispatch(self):
        code = build_bch(4, 2)
        assert isinstance(build_engine(code, GrandabSpec(2)), HardEngine)
        assert isinstance(build_engine(code, StepGrandSpec(1, 6, 2)), SoftEngine)
        assert isinstance(
            build_engine(code, OrbgrandSpec(lw_max=10, p_max=2)), SoftEngine
        )

    def test_rejects_wide_parity_checks(self):
        code = build_ca_polar(64, 20, crc=None)
        assert code.n - code.k > 31
        with pytest.raises(ValueError, match="31"):
            packed_parity_columns(code)

    def test_empty_report_for_unmatchable_syndrome(self):
        code = build_bch(4, 2)
        engine = HardEngine(code, GrandabSpec(max_weight=1))
        # a three-flip syndrome no single flip can produce
        cols = packed_parity_columns(code)
        target = int(cols[0] ^ cols[5] ^ cols[9])
        report = engine.decode_frames(np.array([target], dtype=np.int32))[0]
        assert report == HitReport(-1, ())
