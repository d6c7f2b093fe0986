import subprocess
import sys
from dataclasses import replace

import pytest

from btncodec.cli import main
from btncodec.netlist import format_manifest, parse_manifest


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def vectors(tmp_path, capsys):
    path = tmp_path / "x.txt"
    assert run(capsys, "gen", "--n", 64, "--D", 16, "--seed", 7, "--out", path)[0] == 0
    return path


class TestPipeline:
    def test_perfect_build_and_verify(self, tmp_path, capsys, vectors):
        codec = tmp_path / "codec.btn"
        assert run(capsys, "build", "--in", vectors, "--mode", "perfect", "--B", 4, "--out", codec)[0] == 0
        code, out, _ = run(capsys, "verify", "--in", codec, "--vectors", vectors)
        assert code == 0
        assert out.endswith("avg 0/1 bound 0/1 ok 1\n")
        assert out.count("dist 0") == 64

    @pytest.mark.parametrize("mode", ["approx", "approx-uncorrected"])
    def test_approx_build_and_verify(self, tmp_path, capsys, vectors, mode):
        codec = tmp_path / "codec.btn"
        assert run(capsys, "build", "--in", vectors, "--mode", mode, "--out", codec)[0] == 0
        assert parse_manifest(codec.read_text()).B >= 3
        code, out, _ = run(capsys, "verify", "--in", codec, "--vectors", vectors)
        assert code == 0 and "ok 1" in out

    def test_approx_rejects_B2(self, tmp_path, capsys, vectors):
        code, _, err = run(capsys, "build", "--in", vectors, "--mode", "approx", "--B", 2)
        assert code == 2
        assert err.startswith("error: --B:")

    def test_deterministic_bytes(self, tmp_path, capsys, vectors):
        a, b = tmp_path / "a.btn", tmp_path / "b.btn"
        run(capsys, "build", "--in", vectors, "--mode", "approx", "--B", 4, "--out", a)
        run(capsys, "build", "--in", vectors, "--mode", "approx", "--B", 4, "--out", b)
        assert a.read_bytes() == b.read_bytes()
        again = tmp_path / "x2.txt"
        run(capsys, "gen", "--n", 64, "--D", 16, "--seed", 7, "--out", again)
        assert again.read_bytes() == vectors.read_bytes()

    def test_export_round_trip_and_input_untouched(self, tmp_path, capsys, vectors):
        codec, copy = tmp_path / "c.btn", tmp_path / "copy.btn"
        run(capsys, "build", "--in", vectors, "--out", codec)
        before = codec.read_bytes()
        assert run(capsys, "export", "--in", codec, "--out", copy)[0] == 0
        assert copy.read_bytes() == before == codec.read_bytes()

    def test_verify_detects_corruption(self, tmp_path, capsys, vectors):
        codec = tmp_path / "c.btn"
        run(capsys, "build", "--in", vectors, "--B", 4, "--out", codec)
        bundle = parse_manifest(codec.read_text())
        # the y layer sits right after the single gamma layer for B = 4
        w = int(bundle.decoder.layers[1].weights[0, 0])
        broken = bundle.decoder.with_weight(1, 0, 0, 1 - w)
        codec.write_text(format_manifest(replace(bundle, decoder=broken)))
        code, out, _ = run(capsys, "verify", "--in", codec, "--vectors", vectors)
        assert code == 1 and "ok 0" in out

    def test_verify_reports_oracle_mismatch(self, tmp_path, capsys, vectors):
        codec = tmp_path / "c.btn"
        run(capsys, "build", "--in", vectors, "--mode", "approx", "--B", 4, "--out", codec)
        bundle = parse_manifest(codec.read_text())
        codec.write_text(format_manifest(replace(bundle, decoder=bundle.decoder.with_theta(1, 0, 1))))
        code, out, _ = run(capsys, "verify", "--in", codec, "--vectors", vectors)
        assert code == 1
        assert "oracle mismatch k " in out


class TestEval:
    def test_vector_trace(self, tmp_path, capsys):
        vec = tmp_path / "x.txt"
        vec.write_text("000\n100\n101\n111\n")
        codec = tmp_path / "c.btn"
        run(capsys, "build", "--in", vec, "--B", 2, "--out", codec)
        code, out, _ = run(capsys, "eval", "--in", codec, "--vector", "101", "--trace")
        lines = out.splitlines()
        assert code == 0
        assert lines[0].startswith("encoder.1 ")
        assert "encoder.2 10" in lines
        assert lines[-1] == "101"
        assert any(line.startswith("decoder.") for line in lines)

    def test_code_input(self, tmp_path, capsys):
        vec = tmp_path / "x.txt"
        vec.write_text("000\n100\n101\n111\n")
        codec = tmp_path / "c.btn"
        run(capsys, "build", "--in", vec, "--out", codec)
        assert run(capsys, "eval", "--in", codec, "--code", "11")[1] == "111\n"

    @pytest.mark.parametrize(
        "extra",
        [[], ["--code", "1"], ["--code", "11", "--vector", "000"], ["--vector", "0a0"]],
    )
    def test_usage_errors(self, tmp_path, capsys, extra):
        vec = tmp_path / "x.txt"
        vec.write_text("000\n100\n101\n111\n")
        codec = tmp_path / "c.btn"
        run(capsys, "build", "--in", vec, "--out", codec)
        code, _, err = run(capsys, "eval", "--in", codec, *extra)
        assert code == 2 and err.startswith("error: ")


class TestBounds:
    def test_small_instance(self, capsys):
        code, out, _ = run(capsys, "bounds", "--n", 16, "--D", 13, "--d", 4)
        assert code == 0
        assert "lower_bound=4" in out.splitlines()

    def test_bad_args(self, capsys):
        assert run(capsys, "bounds", "--n", 0, "--D", 13)[0] == 2


class TestUsage:
    def test_missing_input_file(self, tmp_path, capsys):
        code, _, err = run(capsys, "build", "--in", tmp_path / "nope.txt")
        assert code == 2 and "--in" in err

    def test_malformed_manifest(self, tmp_path, capsys):
        bad = tmp_path / "bad.btn"
        bad.write_text("CODEC mode=perfect\n")
        assert run(capsys, "export", "--in", bad)[0] == 2

    def test_gen_impossible(self, capsys):
        assert run(capsys, "gen", "--n", 9, "--D", 3)[0] == 2

    def test_vectors_mismatch(self, tmp_path, capsys, vectors):
        codec = tmp_path / "c.btn"
        run(capsys, "build", "--in", vectors, "--out", codec)
        other = tmp_path / "y.txt"
        run(capsys, "gen", "--n", 10, "--D", 16, "--out", other)
        assert run(capsys, "verify", "--in", codec, "--vectors", other)[0] == 2

    def test_adversarial_gen_builds_with_lookup(self, tmp_path, capsys):
        vec, codec = tmp_path / "adv.txt", tmp_path / "c.btn"
        run(capsys, "gen", "--n", 48, "--D", 16, "--pattern", "011", "--out", vec)
        assert run(capsys, "build", "--in", vec, "--mode", "approx", "--B", 3, "--out", codec)[0] == 0
        assert "LOOKUP" in codec.read_text()
        code, out, _ = run(capsys, "verify", "--in", codec, "--vectors", vec)
        assert code == 0 and "avg 0/1" in out

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "btncodec", "bounds", "--n", "16", "--D", "13", "--d", "4"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0 and "lower_bound=4" in proc.stdout
