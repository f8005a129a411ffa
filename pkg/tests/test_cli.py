import pytest

from stepgrand.cli import main, parse_ebn0, parse_variant
from stepgrand.codes import build_bch, save_alist, save_dense_generator
from stepgrand.decoder import GrandabSpec, OrbgrandSpec, StepGrandSpec


class TestEbn0Parsing:
    def test_range_inclusive(self):
        assert parse_ebn0("0:1:8") == tuple(float(x) for x in range(9))

    def test_fractional_step_reaches_stop(self):
        assert parse_ebn0("2:0.5:4") == (2.0, 2.5, 3.0, 3.5, 4.0)
        assert parse_ebn0("0:0.1:1")[-1] == 1.0
        assert len(parse_ebn0("0:0.1:1")) == 11

    def test_comma_list(self):
        assert parse_ebn0("3,4,5") == (3.0, 4.0, 5.0)
        assert parse_ebn0(" 3.5 ") == (3.5,)

    @pytest.mark.parametrize("text", ["1:2", "1:2:3:4", "5:0:6", "4:1:2", ",", "abc"])
    def test_rejects_malformed(self, text):
        with pytest.raises(ValueError):
            parse_ebn0(text)


class TestVariantParsing:
    def test_defaults(self):
        assert parse_variant("grandab") == GrandabSpec(3)
        assert parse_variant("orbgrand") == OrbgrandSpec(64, 6)
        assert parse_variant("stepgrand") == StepGrandSpec(2, 6, 6)

    def test_explicit_parameters(self):
        assert parse_variant("grandab(ab=2)") == GrandabSpec(2)
        assert parse_variant("orbgrand(lw=96,p=4)") == OrbgrandSpec(96, 4)
        assert parse_variant(" stepgrand(a=1, b=8, p=4) ") == StepGrandSpec(1, 8, 4)
        assert parse_variant("orbgrand(p=3)") == OrbgrandSpec(64, 3)

    @pytest.mark.parametrize("text", [
        "huffman", "stepgrand(q=1)", "grandab(ab=x)", "grandab(ab)", "(a=1)",
    ])
    def test_rejects_malformed(self, text):
        with pytest.raises(ValueError):
            parse_variant(text)


@pytest.fixture(scope="module")
def dense_code_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("codes") / "bch15.txt"
    save_dense_generator(build_bch(4, 2), path)
    return str(path)


class TestMainCommand:
    def test_sweep_to_file(self, dense_code_path, tmp_path):
        out = tmp_path / "sweep.csv"
        rc = main([
            "--code", f"dense:{dense_code_path}", "--decoder", "grandab",
            "--ab", "2", "--ebn0", "5,7", "--min-frame-errors", "3",
            "--max-frames", "1024", "--seed", "4", "--out", str(out),
        ])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert "# variant=grandab(ab=2)" in lines
        data = [ln for ln in lines if not ln.startswith("#")]
        assert data[0].startswith("ebn0_db,frames,")
        assert len(data) == 3  # header + two points

    def test_sweep_to_stdout(self, dense_code_path, capsys):
        rc = main([
            "--code", f"dense:{dense_code_path}", "--ebn0", "6",
            "--decoder", "stepgrand", "--alpha", "1", "--beta", "4",
            "--pmax", "2", "--min-frame-errors", "2", "--max-frames", "1024",
        ])
        assert rc == 0
        captured = capsys.readouterr().out
        assert "# variant=stepgrand(a=1,b=4,p=2)" in captured

    def test_compare_to_file(self, dense_code_path, tmp_path):
        out = tmp_path / "cmp.csv"
        rc = main([
            "--code", f"dense:{dense_code_path}", "--ebn0", "5",
            "--compare", "grandab(ab=1);grandab(ab=2)",
            "--min-frame-errors", "3", "--max-frames", "1024",
            "--out", str(out),
        ])
        assert rc == 0
        header = [ln for ln in out.read_text().splitlines()
                  if ln.startswith("ebn0_db")][0]
        assert "v1_fer" in header and "v2_fer" in header

    def test_alist_code_source(self, tmp_path):
        path = tmp_path / "code.alist"
        save_alist(build_bch(4, 1), path)
        out = tmp_path / "out.csv"
        rc = main([
            "--code", f"alist:{path}", "--decoder", "grandab", "--ab", "1",
            "--ebn0", "8", "--min-frame-errors", "1", "--max-frames", "1024",
            "--out", str(out),
        ])
        assert rc == 0
        assert out.exists()

    @pytest.mark.parametrize("argv, fragment", [
        (["--code", "turbo9000", "--ebn0", "4"], "unknown code"),
        (["--code", "bch127", "--ebn0", "4:0:5"], "step must be positive"),
        (["--code", "bch127", "--ebn0", "4", "--compare", "grandab(ab=2)"],
         "at least two"),
        (["--code", "bch127", "--ebn0", "4", "--compare",
          "grandab(ab=2);nosuch"], "unknown decoder"),
        (["--code", "bch127", "--ebn0", "4", "--min-frame-errors", "0"],
         "min_frame_errors"),
    ])
    def test_config_errors_exit_nonzero(self, argv, fragment, capsys):
        rc = main(argv)
        assert rc == 1
        err = capsys.readouterr().err
        assert err.startswith("error:")
        assert fragment in err

    def test_unwritable_output_exits_nonzero(self, dense_code_path, capsys):
        rc = main([
            "--code", f"dense:{dense_code_path}", "--ebn0", "8",
            "--min-frame-errors", "1", "--max-frames", "1024",
            "--out", "/no/such/directory/out.csv",
        ])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_required_flags_use_argparse_exit(self):
        with pytest.raises(SystemExit) as exc_info:
            main(["--code", "bch127"])
        assert exc_info.value.code == 2
