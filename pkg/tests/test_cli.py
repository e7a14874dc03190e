import json
import math
import subprocess
import sys

import numpy as np
import pytest

from conftest import golden_system
from saddlecert import cli
from saddlecert.infsup import GammaBreakdown
from saddlecert.manifest import load_manifest, read_mtx, write_mtx, write_system
from saddlecert.saddle import LoadFunctional


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def golden_dir(tmp_path):
    write_system(tmp_path / "golden", golden_system(), LoadFunctional([1.0, 1.0], [1.0]))
    return tmp_path / "golden"


# ---------------------------------------------------------------- Matrix Market


def test_mtx_array_coordinate_symmetric(tmp_path):
    (tmp_path / "arr.mtx").write_text("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n")
    np.testing.assert_array_equal(read_mtx(tmp_path / "arr.mtx"), [[1, 3], [2, 4]])
    (tmp_path / "coo.mtx").write_text("%%MatrixMarket matrix coordinate real general\n2 3 2\n1 1 5\n2 3 -1\n")
    np.testing.assert_array_equal(read_mtx(tmp_path / "coo.mtx"), [[5, 0, 0], [0, 0, -1]])
    (tmp_path / "sym.mtx").write_text("%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 2\n2 1 1\n2 2 2\n")
    np.testing.assert_array_equal(read_mtx(tmp_path / "sym.mtx"), [[2, 1], [1, 2]])
    (tmp_path / "syma.mtx").write_text("%%MatrixMarket matrix array real symmetric\n2 2\n2\n1\n3\n")
    np.testing.assert_array_equal(read_mtx(tmp_path / "syma.mtx"), [[2, 1], [1, 3]])


def test_mtx_round_trip_exact(tmp_path):
    m = np.random.default_rng(0).standard_normal((4, 3)) / 7.0
    write_mtx(tmp_path / "m.mtx", m)
    assert np.array_equal(read_mtx(tmp_path / "m.mtx"), m)


# ---------------------------------------------------------------- certify


def test_certify_golden_json(golden_dir, capsys):
    code, out, _ = run(["certify", str(golden_dir / "manifest.json"), "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["gamma"] == pytest.approx(1 / math.sqrt(11 + 2 * math.sqrt(5)), abs=1e-12)
    assert rep["gamma_true"] == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-12)
    assert rep["certified"] is True and rep["reasons"] == []
    for key in ("alpha", "beta", "delta", "nu", "gamma", "gamma_true", "norm_a", "norm_b", "norm_d",
                "norm_c", "dim_R", "dim_S", "certified", "reasons"):
        assert key in rep


def test_certify_text_format(golden_dir, capsys):
    code, out, _ = run(["certify", str(golden_dir / "manifest.json")], capsys)
    assert code == 0
    assert "gamma_true" in out and "rank_tol" in out and "check_tol" in out


def test_certify_zero_b_exits_1(golden_dir, capsys):
    write_mtx(golden_dir / "b.mtx", np.zeros((2, 1)))
    code, out, _ = run(["certify", str(golden_dir / "manifest.json"), "--format", "json"], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["certified"] is False and "second inf-sup fails" in rep["reasons"]


def test_certify_missing_gram_exits_2(golden_dir, capsys):
    (golden_dir / "gram_U.mtx").unlink()
    code, out, err = run(["certify", str(golden_dir / "manifest.json")], capsys)
    assert code == 2
    assert "gram_U.mtx" in err and "Traceback" not in err
    assert len(err.strip().splitlines()) == 1


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("forms"),
        lambda d: d.__setitem__("version", 99),
        lambda d: d["spaces"]["P"].__setitem__("dim", 3),
        lambda d: d["forms"].__setitem__("a_path", "b.mtx"),
    ],
)
def test_corrupted_manifest_exits_2(golden_dir, capsys, mutate):
    path = golden_dir / "manifest.json"
    data = json.loads(path.read_text())
    mutate(data)
    path.write_text(json.dumps(data))
    code, _, err = run(["certify", str(path)], capsys)
    assert code == 2 and err.startswith("error:")


def test_invalid_json_and_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["certify", str(bad)], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2
    assert run([], capsys)[0] == 2
    assert run(["certify", str(bad), "--format", "xml"], capsys)[0] == 2


def test_non_spd_gram_exits_2(golden_dir, capsys):
    write_mtx(golden_dir / "gram_P.mtx", np.diag([1.0, -1.0]))
    assert run(["certify", str(golden_dir / "manifest.json")], capsys)[0] == 2


def test_tolerance_flags_reported(golden_dir, capsys):
    code, out, _ = run(["certify", str(golden_dir / "manifest.json"), "--format", "json",
                        "--rank-tol", "1e-8", "--check-tol", "1e-9"], capsys)
    rep = json.loads(out)
    assert (rep["rank_tol"], rep["check_tol"]) == (1e-8, 1e-9)


def test_json_round_trip_exact(golden_dir, capsys):
    from saddlecert.saddle import certify

    cert = certify(load_manifest(golden_dir / "manifest.json").system)
    _, out, _ = run(["certify", str(golden_dir / "manifest.json"), "--format", "json"], capsys)
    rep = json.loads(out)
    for key in ("alpha", "beta", "delta", "nu", "gamma", "gamma_true", "norm_a", "norm_c"):
        assert rep[key] == getattr(cert, key)
    assert json.loads(json.dumps(rep)) == rep


def test_vacuous_alpha_reported_as_null(tmp_path, capsys):
    from saddlecert.problems import GeneratorSpec, gen_random

    write_system(tmp_path / "v", gen_random(GeneratorSpec(seed=1, n_P=2, n_U=2)))
    code, out, _ = run(["certify", str(tmp_path / "v" / "manifest.json"), "--format", "json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["alpha"] is None and rep["alpha_vacuous"] is True
    assert "Infinity" not in out


# ---------------------------------------------------------------- generate + bound


def test_generate_poisson_then_certify_and_bound(tmp_path, capsys):
    out = tmp_path / "d"
    code, _, _ = run(["generate", "poisson1d", "--n", "8", "--refine", "16", "--eps", "0", "--out", str(out)], capsys)
    assert code == 0
    assert (out / "coarse" / "manifest.json").is_file() and (out / "fine" / "manifest.json").is_file()
    assert run(["certify", str(out / "coarse" / "manifest.json")], capsys)[0] == 0
    code, rep, _ = run(["bound", str(out / "coarse" / "manifest.json"), str(out / "fine" / "manifest.json"),
                        "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(rep)
    assert rep["all_pass"] and rep["angle_RRt"] <= 1e-10
    # fine manifest found through the pair section as well
    assert run(["bound", str(out / "coarse" / "manifest.json")], capsys)[0] == 0


def test_bound_identity_pair(tmp_path, capsys):
    d = tmp_path / "id"
    sys_ = golden_system()
    write_system(d / "fine", sys_, LoadFunctional([1.0, 2.0], [3.0]))
    write_system(d / "coarse", sys_, None, embeddings={n: np.eye(getattr(sys_, n).dim) for n in "PQUV"},
                 fine_manifest_path="../fine/manifest.json")
    code, out, _ = run(["bound", str(d / "coarse" / "manifest.json"), "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["err_global"] == pytest.approx(0.0, abs=1e-14)


def test_bound_flipped_embedding_exits_2(tmp_path, capsys):
    out = tmp_path / "d"
    run(["generate", "poisson1d", "--n", "4", "--refine", "4", "--out", str(out)], capsys)
    E = read_mtx(out / "coarse" / "E_P.mtx")
    E[:, 1] *= -1
    write_mtx(out / "coarse" / "E_P.mtx", E)
    code, _, err = run(["bound", str(out / "coarse" / "manifest.json")], capsys)
    assert code == 2 and "conformity check failed" in err


def test_bound_without_fine_load_exits_2(tmp_path, capsys):
    out = tmp_path / "d"
    run(["generate", "poisson1d", "--n", "4", "--refine", "4", "--out", str(out)], capsys)
    m = out / "fine" / "manifest.json"
    data = json.loads(m.read_text())
    del data["load"]
    m.write_text(json.dumps(data))
    assert run(["bound", str(out / "coarse" / "manifest.json")], capsys)[0] == 2


def test_bound_uncertified_coarse_exits_1(tmp_path, capsys):
    d = tmp_path / "z"
    from saddlecert.saddle import SaddleSystem

    s = SaddleSystem.from_matrices(np.eye(2), np.eye(2), np.eye(1), np.eye(1), np.eye(2), np.zeros((2, 1)),
                                   [[0.0, 1.0]])
    write_system(d / "fine", s, LoadFunctional([1.0, 0.0], [1.0]))
    write_system(d / "coarse", s, None, embeddings={n: np.eye(getattr(s, n).dim) for n in "PQUV"},
                 fine_manifest_path="../fine/manifest.json")
    assert run(["bound", str(d / "coarse" / "manifest.json")], capsys)[0] == 1


def test_generate_random_deterministic(tmp_path, capsys):
    for name in ("a", "b"):
        assert run(["generate", "random", "--seed", "7", "--nP", "5", "--nU", "2", "--out", str(tmp_path / name)],
                   capsys)[0] == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == sorted(p.name for p in (tmp_path / "b").iterdir())
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    assert run(["certify", str(tmp_path / "a" / "manifest.json")], capsys)[0] == 0


@pytest.mark.parametrize("argv", [
    ["generate", "poisson1d", "--eps", "0.6"],
    ["generate", "poisson1d", "--n", "1", "--refine", "1"],
    ["generate", "random", "--nP", "2", "--nU", "3"],
])
def test_generate_infeasible_exits_2(tmp_path, capsys, argv):
    assert run(argv + ["--out", str(tmp_path / "x")], capsys)[0] == 2


def test_generate_unwritable_exits_2(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(["generate", "random", "--out", str(blocker / "sub")], capsys)[0] == 2


# ---------------------------------------------------------------- selftest


def test_selftest_passes(capsys):
    code, out, _ = run(["selftest", "--count", "10", "--dupire-count", "200"], capsys)
    assert code == 0
    assert out.count("PASS") == 5


def test_selftest_deterministic(capsys):
    a = run(["selftest", "--count", "5", "--dupire-count", "50"], capsys)
    b = run(["selftest", "--count", "5", "--dupire-count", "50"], capsys)
    assert a == b


def test_selftest_wrong_gamma_fails(capsys):
    from saddlecert.infsup import gamma_asymmetric

    def wrong(alpha, beta, delta, norm_a):
        g = gamma_asymmetric(alpha, beta, delta, norm_a)
        return GammaBreakdown(g.alpha, g.beta, g.delta, g.norm_a, g.nu, 1.5 * g.gamma)

    args = cli.build_parser().parse_args(["selftest", "--count", "10", "--dupire-count", "10"])
    code = cli.cmd_selftest(args, gamma_fn=wrong)
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL  symmetric-consistency" in out and "reproducer seed" in out


def test_module_entry_point(golden_dir):
    proc = subprocess.run([sys.executable, "-m", "saddlecert", "certify", str(golden_dir / "manifest.json"),
                           "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["certified"] is True
