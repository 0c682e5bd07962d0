import filecmp

import pytest

from seqlab import cli
from seqlab.bitseq import BitString, read_bits
from seqlab.experiments import ExperimentManifest, default_checkpoints, run_experiment
from seqlab.generators import fibonacci_word


def test_default_checkpoints():
    assert default_checkpoints(5000) == [1024, 2048, 4096, 5000]
    assert default_checkpoints(4096) == [1024, 2048, 4096]
    assert default_checkpoints(100) == [100]


def test_manifest_parsing_and_defaults():
    m = ExperimentManifest.from_text(
        "experiment = prop2-demo\nn = 4096\nout = /tmp/x\n"
    )
    assert m.experiment == "prop2-demo"
    assert m.n == 4096
    assert m.checkpoints[-1] == 4096
    assert m.groups["y"] == {"kind": "bernoulli", "p": "1/3", "seed": "1"}
    assert m.groups["measure"] == {"family": "bernoulli", "p": "1/3"}
    with pytest.raises(ValueError):
        ExperimentManifest.from_text("experiment = nope\nout = /tmp/x\n")
    with pytest.raises(ValueError):
        ExperimentManifest.from_text("experiment = rates\n")


def test_manifest_override_groups():
    m = ExperimentManifest.from_text(
        "experiment = prop1-demo\nout = o\nn = 2000\ny.kind = periodic\ny.pattern = 0110\n"
    )
    assert m.groups["y"] == {"kind": "periodic", "pattern": "0110"}


def test_prop1_experiment(tmp_path):
    m = ExperimentManifest.from_text(
        f"experiment = prop1-demo\nout = {tmp_path/'run'}\nn = 2048\n"
    )
    checks = run_experiment(m)
    assert all(c.passed for c in checks)
    out = tmp_path / "run"
    assert (out / "summary.txt").exists()
    assert (out / "code_length.csv").exists()
    assert (out / "manifest.txt").exists()
    summary = (out / "summary.txt").read_text()
    assert "CHECK prop1-computable-code-bound PASS" in summary
    assert "CHECK prop1-roundtrip PASS" in summary


def test_prop2_experiment_small(tmp_path):
    m = ExperimentManifest.from_text(
        f"experiment = prop2-demo\nout = {tmp_path/'run'}\nn = 16384\n"
    )
    checks = run_experiment(m)
    by_name = {c.name: c for c in checks}
    assert by_name["prop2-roundtrip"].passed
    assert by_name["prop2-bounded-gaps"].passed
    assert by_name["prop2-rate"].passed
    csv = (tmp_path / "run" / "code_length.csv").read_text()
    assert csv.splitlines()[0] == "n,L_n"


def test_kw_experiment_small(tmp_path):
    m = ExperimentManifest.from_text(
        f"experiment = kw-demo\nout = {tmp_path/'run'}\nn = 65536\n"
    )
    checks = run_experiment(m)
    by_name = {c.name: c for c in checks}
    assert by_name["kw-self-selection"].passed
    curves = (tmp_path / "run" / "curves.csv").read_text()
    assert curves.splitlines()[0] == "statistic,k,n,value"
    assert "discrepancy.selected" in curves


def test_experiment_determinism(tmp_path):
    text = "experiment = prop1-demo\nn = 2048\n"
    a = ExperimentManifest.from_text(text, out_dir=tmp_path / "a")
    b = ExperimentManifest.from_text(text, out_dir=tmp_path / "b")
    run_experiment(a)
    run_experiment(b)
    for name in ("summary.txt", "code_length.csv", "manifest.txt"):
        assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name, shallow=False)


def test_cli_generate_stdout(capsys):
    assert cli.main(["generate", "champernowne", "--n", "10"]) == 0
    assert capsys.readouterr().out.strip() == "1101110010"
    assert cli.main(["generate", "fibonacci_word", "--n", "5"]) == 0
    assert capsys.readouterr().out.strip() == "01001"
    assert cli.main(["generate", "periodic", "--pattern", "01", "--n", "4"]) == 0
    assert capsys.readouterr().out.strip() == "0101"


def test_cli_generate_requires_params(capsys):
    assert cli.main(["generate", "bernoulli", "--n", "4"]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_select_roundtrip(tmp_path):
    x = tmp_path / "x.txt"
    y = tmp_path / "y.txt"
    out = tmp_path / "sel.txt"
    x.write_text("0011")
    y.write_text("0101")
    assert cli.main(["select", "--in", str(x), "--in2", str(y), "--out", str(out)]) == 0
    assert read_bits(out) == BitString("01")
    sidecar = tmp_path / "sel.txt.positions"
    assert sidecar.read_text().split() == ["2", "4"]


def test_cli_stats(tmp_path, capsys):
    f = tmp_path / "s.txt"
    f.write_text("0100101001001")
    assert cli.main(["stats", "--in", str(f), "--k", "1,2"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "statistic,k,n,value"
    assert any(line.startswith("lz78_phrases,,13,6") for line in out.splitlines())


def test_cli_encode_decode(tmp_path):
    y = tmp_path / "y.txt"
    z = tmp_path / "z.txt"
    back = tmp_path / "back.txt"
    mfile = tmp_path / "measure.txt"
    y.write_text(fibonacci_word(200).to_text())
    mfile.write_text("family = bernoulli\np = 1/3\n")
    assert cli.main(["encode", "--in", str(y), "--measure", str(mfile), "--out", str(z)]) == 0
    assert (
        cli.main(
            ["decode", "--in", str(z), "--measure", str(mfile), "--n", "200", "--out", str(back)]
        )
        == 0
    )
    assert read_bits(back) == fibonacci_word(200)


def test_cli_encode_packed_format(tmp_path):
    y = tmp_path / "y.bin"
    z = tmp_path / "z.bin"
    back = tmp_path / "back.bin"
    mfile = tmp_path / "measure.txt"
    from seqlab.bitseq import write_bits

    write_bits(y, BitString("0110100110"), "packed")
    mfile.write_text("family = uniform\n")
    assert (
        cli.main(
            ["encode", "--in", str(y), "--measure", str(mfile), "--out", str(z), "--format", "packed"]
        )
        == 0
    )
    assert (
        cli.main(
            [
                "decode", "--in", str(z), "--measure", str(mfile),
                "--n", "10", "--out", str(back), "--format", "packed",
            ]
        )
        == 0
    )
    assert read_bits(back, "packed") == BitString("0110100110")


def test_cli_experiment(tmp_path):
    manifest = tmp_path / "m.txt"
    manifest.write_text(f"experiment = prop1-demo\nn = 2048\nout = {tmp_path/'run'}\n")
    assert cli.main(["experiment", "--manifest", str(manifest)]) == 0
    assert (tmp_path / "run" / "summary.txt").exists()
