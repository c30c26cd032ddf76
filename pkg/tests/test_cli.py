import csv
import io
from contextlib import redirect_stderr

import numpy as np
import pytest

from splic.cli import main
from splic.image_io import read_image, write_image, write_mask
from splic.linalg import numerical_rank
from splic.metrics import psnr
from splic.sampling import generate_mask
from splic.testimages import add_uniform_noise, make_test_image


@pytest.fixture
def scene_file(tmp_path):
    path = tmp_path / "scene.pgm"
    write_image(make_test_image(0, 32), path)
    return path


def run_cli(*argv):
    err = io.StringIO()
    with redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, err.getvalue()


def test_complete_is_deterministic(tmp_path, scene_file):
    out1, out2 = tmp_path / "a.pgm", tmp_path / "b.pgm"
    code, _ = run_cli(
        "complete", "--input", scene_file, "--anchor-fraction", "0.5",
        "--seed", "7", "--output", out1,
    )
    assert code == 0
    code, _ = run_cli(
        "complete", "--input", scene_file, "--anchor-fraction", "0.5",
        "--seed", "7", "--output", out2,
    )
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_output_carries_provenance_comment(tmp_path, scene_file):
    out = tmp_path / "a.pgm"
    run_cli("complete", "--input", scene_file, "--seed", "9", "--output", out)
    header = out.read_bytes()[:80].decode("ascii", "replace")
    assert "# splic seed=9 cfg-hash=" in header


def test_missing_input_exits_2(tmp_path):
    code, err = run_cli(
        "complete", "--input", tmp_path / "nope.pgm", "--output", tmp_path / "o.pgm"
    )
    assert code == 2
    assert "not found" in err


def test_bad_rho_exits_2_naming_constraint(tmp_path, scene_file):
    code, err = run_cli(
        "complete", "--input", scene_file, "--output", tmp_path / "o.pgm",
        "--rho", "1.5",
    )
    assert code == 2
    assert "rho" in err


def test_explicit_mask_file(tmp_path, scene_file):
    mask = generate_mask(32, 32, 0.5, 3)
    mask_path = tmp_path / "m.pgm"
    write_mask(mask, mask_path)
    out = tmp_path / "o.pgm"
    code, _ = run_cli(
        "complete", "--input", scene_file, "--mask", mask_path, "--output", out
    )
    assert code == 0
    anchors = mask == 1.0
    clean = make_test_image(0, 32)
    produced = read_image(out)
    # anchors survive up to PGM quantization
    assert np.abs(produced[anchors] - clean[anchors]).max() <= 1 / 255


def test_strict_flag_exits_3_on_non_convergence(tmp_path, scene_file):
    code, err = run_cli(
        "complete", "--input", scene_file, "--output", tmp_path / "o.pgm",
        "--maxiter", "7", "--strict",
    )
    assert code == 3
    assert "converge" in err


def test_trace_csv_written(tmp_path, scene_file):
    trace = tmp_path / "t.csv"
    run_cli(
        "complete", "--input", scene_file, "--output", tmp_path / "o.pgm",
        "--trace", trace,
    )
    rows = trace.read_text().splitlines()
    assert rows[0] == "t,delta,rel_change,srf,tv"
    assert len(rows) > 7


def test_config_file_with_flag_override(tmp_path, scene_file):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text('{"maxiter": 7, "lambda": 0.01}')
    out1, out2 = tmp_path / "o1.pgm", tmp_path / "o2.pgm"
    code, _ = run_cli(
        "complete", "--input", scene_file, "--output", out1, "--config", cfg_path
    )
    assert code == 0
    code, _ = run_cli(
        "complete", "--input", scene_file, "--output", out2, "--config", cfg_path,
        "--maxiter", "14",
    )
    assert code == 0
    assert out1.read_bytes() != out2.read_bytes()  # override took effect


def test_defend_trace_contains_two_passes(tmp_path, scene_file):
    trace = tmp_path / "t.csv"
    code, _ = run_cli(
        "defend", "--input", scene_file, "--output", tmp_path / "d.pgm",
        "--seed", "5", "--trace", trace,
    )
    assert code == 0
    rows = list(csv.DictReader(trace.open()))
    ts = [int(r["t"]) for r in rows]
    deltas = [float(r["delta"]) for r in rows]
    restarts = [i for i in range(1, len(ts)) if ts[i] == 1]
    assert len(restarts) == 1
    assert deltas[restarts[0]] > deltas[restarts[0] - 1]


@pytest.mark.xfail(
    strict=True,
    reason="the default stopping rule halts the constant-image run at a "
    "deviation of a few grey levels, above the quantization width",
)
def test_defend_constant_image_within_quantization(tmp_path):
    src = tmp_path / "c.pgm"
    write_image(np.full((32, 32), 0.5), src)
    out = tmp_path / "c_out.pgm"
    code, _ = run_cli("defend", "--input", src, "--output", out)
    assert code == 0
    assert np.abs(read_image(out) - read_image(src)).max() <= 1 / 510


def test_defend_batch_with_summary(tmp_path):
    in_dir, ref_dir, out_dir = tmp_path / "in", tmp_path / "ref", tmp_path / "out"
    in_dir.mkdir()
    ref_dir.mkdir()
    for i in range(3):
        clean = make_test_image(i, 24)
        write_image(clean, ref_dir / f"img{i}.pgm")
        write_image(add_uniform_noise(clean, 8 / 255, i), in_dir / f"img{i}.pgm")
    code, _ = run_cli(
        "defend", "--input", in_dir, "--output", out_dir, "--batch",
        "--reference-dir", ref_dir, "--jobs", "2", "--seed", "1",
    )
    assert code == 0
    outputs = sorted(p.name for p in out_dir.glob("img*.pgm"))
    assert outputs == ["img0.pgm", "img1.pgm", "img2.pgm"]
    rows = list(csv.DictReader((out_dir / "summary.csv").open()))
    assert [r["file"] for r in rows] == outputs
    assert all(float(r["psnr_db"]) > 0 for r in rows)


def test_compare_sweep_csv_shape(tmp_path, scene_file):
    out = tmp_path / "cmp.csv"
    code, _ = run_cli(
        "compare", "--input", scene_file, "--output", out,
        "--anchor-fraction", "0.3,0.5,0.7", "--seed", "3",
    )
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 12
    for frac in ("0.3", "0.5", "0.7"):
        methods = {r["method"] for r in rows if r["fraction"] == frac}
        assert methods == {"splic", "srf", "soft-impute", "usvt"}


def test_compare_rejects_bad_fractions(tmp_path, scene_file):
    code, _ = run_cli(
        "compare", "--input", scene_file, "--output", tmp_path / "c.csv",
        "--anchor-fraction", "0.0,0.5",
    )
    assert code == 2


def test_rank_sweep_outputs_and_csv(tmp_path, scene_file):
    out_dir = tmp_path / "sweep"
    csv_path = tmp_path / "sweep.csv"
    code, _ = run_cli(
        "rank-sweep", "--input", scene_file, "--ranks", "8,16",
        "--output-dir", out_dir, "--csv", csv_path, "--seed", "5",
    )
    assert code == 0
    rows = list(csv.DictReader(csv_path.open()))
    assert [int(r["rank"]) for r in rows] == [8, 16]
    for row in rows:
        assert int(row["numerical_rank"]) <= int(row["rank"])
    for r in (8, 16):
        img = read_image(out_dir / f"scene_r{r}.pgm")
        # quantization inflates tiny singular values; check against a loose tol
        assert numerical_rank(img, 1e-2) <= r


def test_rank_sweep_rejects_rank_zero(tmp_path, scene_file):
    code, _ = run_cli(
        "rank-sweep", "--input", scene_file, "--ranks", "0",
        "--output-dir", tmp_path / "d", "--csv", tmp_path / "c.csv",
    )
    assert code == 2


def test_add_uniform_noise_flag_changes_input_deterministically(tmp_path, scene_file):
    outs = []
    for name in ("n1.pgm", "n2.pgm"):
        out = tmp_path / name
        code, _ = run_cli(
            "complete", "--input", scene_file, "--output", out,
            "--add-uniform-noise", "0.03", "--seed", "4", "--maxiter", "7",
        )
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_ppm_input_completes_per_channel(tmp_path):
    planes = np.stack([make_test_image(i, 24) for i in range(3)])
    src = tmp_path / "col.ppm"
    write_image(planes, src)
    out = tmp_path / "col_out.ppm"
    code, _ = run_cli("complete", "--input", src, "--output", out, "--seed", "2")
    assert code == 0
    result = read_image(out)
    assert result.shape == (3, 24, 24)
    assert psnr(result, planes) > 30.0
