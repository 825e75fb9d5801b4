import re

import numpy as np
import pytest

from ssmgm import cli
from ssmgm.pixelio import (
    DisparityMap,
    RemapTable,
    read_pgm,
    write_disparity,
    write_pgm,
    write_remap_table,
)


@pytest.fixture
def pair_files(tmp_path, rng):
    left, right = cli.synthetic_pair(30, 48, 4, seed=7)
    write_pgm(left, tmp_path / "l.pgm")
    write_pgm(right, tmp_path / "r.pgm")
    return tmp_path / "l.pgm", tmp_path / "r.pgm"


def test_rectify_identity(tmp_path, rng):
    img = rng.integers(0, 256, (20, 25), dtype=np.uint8)
    write_pgm(img, tmp_path / "raw.pgm")
    write_remap_table(RemapTable.identity(20, 25), tmp_path / "id.smap")
    out = tmp_path / "rect.pgm"
    assert cli.main(["rectify", "--raw", str(tmp_path / "raw.pgm"),
                     "--map", str(tmp_path / "id.smap"), "--out", str(out)]) == 0
    assert np.array_equal(read_pgm(out), img)


def test_rectify_missing_map(tmp_path, rng, capsys):
    write_pgm(rng.integers(0, 256, (8, 8), dtype=np.uint8), tmp_path / "raw.pgm")
    missing = tmp_path / "nowhere.smap"
    code = cli.main(["rectify", "--raw", str(tmp_path / "raw.pgm"),
                     "--map", str(missing), "--out", str(tmp_path / "o.pgm")])
    assert code != 0
    assert "nowhere.smap" in capsys.readouterr().err


def test_match_identical_views(tmp_path, pair_files):
    left, _ = pair_files
    out = tmp_path / "d.pgm"
    assert cli.main(["match", "--left", str(left), "--right", str(left), "--out", str(out),
                     "--dmax", "16", "--sections", "1"]) == 0
    assert not read_pgm(out).any()


def test_streaming_and_full_outputs_identical(tmp_path, pair_files):
    left, right = pair_files
    outs = []
    for algo in ("mgm", "mgm-full"):
        out = tmp_path / f"{algo}.pgm"
        assert cli.main(["match", "--left", str(left), "--right", str(right), "--out", str(out),
                         "--algo", algo, "--dmax", "12", "--sections", "1"]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_match_recovers_shift(tmp_path, pair_files):
    left, right = pair_files
    out = tmp_path / "d.pgm"
    assert cli.main(["match", "--left", str(left), "--right", str(right), "--out", str(out),
                     "--dmax", "8", "--scale", "4", "--sections", "2"]) == 0
    d = read_pgm(out)
    assert (d[3:-3, 3 + 7 : -3] == 16).all()


def test_config_file_and_flag_override(tmp_path, pair_files, monkeypatch):
    left, right = pair_files
    (tmp_path / "run.cfg").write_text("disparity_range=6\np1=4\np2=50\nsections=1\n")
    seen = {}
    orig = cli.run_algo

    def spy(algo, l, r, cfg, init_value=None):
        seen["cfg"] = cfg
        return orig(algo, l, r, cfg, init_value)

    monkeypatch.setattr(cli, "run_algo", spy)
    assert cli.main(["match", "--left", str(left), "--right", str(right),
                     "--out", str(tmp_path / "d.pgm"), "--config", str(tmp_path / "run.cfg"),
                     "--p2", "60"]) == 0
    cfg = seen["cfg"]
    assert (cfg.disparity_range, cfg.p1, cfg.p2, cfg.sections) == (6, 4, 60, 1)


def test_eval_same_file(tmp_path, capsys):
    d = DisparityMap(np.arange(1, 41).reshape(5, 8) % 30 + 1, np.ones((5, 8), bool))
    write_disparity(d, tmp_path / "gt.pgm", 4)
    assert cli.main(["eval", "--est", str(tmp_path / "gt.pgm"), "--gt", str(tmp_path / "gt.pgm"),
                     "--est-scale", "4"]) == 0
    assert capsys.readouterr().out.strip() == "rmse=0.00 pct=0.00"


def test_eval_report_and_figures(tmp_path, capsys):
    gt = DisparityMap(np.full((12, 16), 20), np.ones((12, 16), bool))
    est = DisparityMap(np.where(np.arange(16) < 4, 30, 20)[None].repeat(12, 0), np.ones((12, 16), bool))
    write_disparity(gt, tmp_path / "gt.pgm", 4)
    write_disparity(est, tmp_path / "est.pgm", 2)
    figs = tmp_path / "figs"
    assert cli.main(["eval", "--est", str(tmp_path / "est.pgm"), "--gt", str(tmp_path / "gt.pgm"),
                     "--report", str(tmp_path / "rep.txt"), "--figures", str(figs)]) == 0
    assert "pct=25.00" in capsys.readouterr().out
    assert "pct_erroneous=25" in (tmp_path / "rep.txt").read_text()
    pngs = sorted(p.name for p in figs.glob("*.png"))
    assert pngs == ["est_error_hist.png", "est_vs_gt.png"]


def test_eval_size_mismatch(tmp_path):
    write_pgm(np.ones((4, 4), np.uint8), tmp_path / "a.pgm")
    write_pgm(np.ones((4, 5), np.uint8), tmp_path / "b.pgm")
    assert cli.main(["eval", "--est", str(tmp_path / "a.pgm"), "--gt", str(tmp_path / "b.pgm")]) == 3


def test_malformed_pgm_exit_code(tmp_path, capsys):
    (tmp_path / "bad.pgm").write_bytes(b"P2\n2 2\n255\n0 0 0 0")
    code = cli.main(["eval", "--est", str(tmp_path / "bad.pgm"), "--gt", str(tmp_path / "bad.pgm")])
    assert code == 2 and "P2" in capsys.readouterr().err


def test_depth(tmp_path, capsys):
    d = DisparityMap(np.array([[0, 84], [42, 84]]), np.array([[False, True], [True, True]]))
    write_disparity(d, tmp_path / "d.pgm", 2)
    out = tmp_path / "z.npy"
    assert cli.main(["depth", "--disp", str(tmp_path / "d.pgm"), "--baseline", "0.12",
                     "--focal", "700", "--out", str(out)]) == 0
    z = np.load(out)
    assert np.isnan(z[0, 0]) and z[0, 1] == pytest.approx(1.0) and z[1, 0] == pytest.approx(2.0)
    assert "valid=3" in capsys.readouterr().out


def test_usage_errors(capsys):
    assert cli.main([]) == 1
    assert cli.main(["match", "--left", "x"]) == 1
    assert cli.main(["match", "--left", "a", "--right", "b", "--out", "c", "--algo", "bogus"]) == 1
    assert "invalid choice" in capsys.readouterr().err


@pytest.mark.slow
def test_bench_output(capsys):
    assert cli.main(["bench", "--repeat", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert sum(line.startswith("run ") for line in lines) == 3
    assert sum(line.startswith("summary:") for line in lines) == 1
    models = {int(m.group(1)): float(m.group(2))
              for m in (re.search(r"blocks=(\d+).*-> ([\d.]+) fps", line) for line in lines) if m}
    assert models[1] == pytest.approx(2.1, abs=0.1)
    assert models[5] == pytest.approx(10.5, abs=0.1)
