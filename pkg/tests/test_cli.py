"""End-to-end tests for the command-line front end.

Every test calls main(argv) directly and inspects the files a run leaves
behind. Usage and domain errors exit 1 with a message on stderr; only
argparse-level failures (unknown flags, bad choices) exit 2. Stochastic
bounds were calibrated over several seeds before being frozen.
"""

import json
import shutil
import subprocess

import numpy as np
import pytest

import rmtlab
from rmtlab import cli, fluctuations, models
from rmtlab.errors import BadParameters


def run(outdir, *argv):
    return cli.main(list(argv) + ["--outdir", str(outdir)])


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def read_rows(path):
    """CSV as (header cells, list of row cell lists)."""
    with open(path) as fh:
        header = fh.readline().rstrip("\n").split(",")
        rows = [line.rstrip("\n").split(",") for line in fh]
    return header, rows


def read_density(path):
    header, rows = read_rows(path)
    assert header == ["lambda", "rho", "pv", "converged", "residual"]
    lam = np.array([float(r[0]) for r in rows])
    rho = np.array([float(r[1]) for r in rows])
    flags = [r[3] for r in rows]
    return lam, rho, flags


def read_spectra(path):
    header, rows = read_rows(path)
    assert header == ["member", "index", "eigenvalue"]
    members = {}
    for m, _, v in rows:
        members.setdefault(int(m), []).append(float(v))
    return {m: np.array(v) for m, v in members.items()}


def write_prices(path, n, steps, seed, labels=None):
    rng = np.random.default_rng(seed)
    walk = np.cumsum(0.01 * rng.standard_normal((n, steps)), axis=1)
    prices = 100.0 * np.exp(walk)
    labels = labels or [f"v{j}" for j in range(n)]
    with open(path, "w") as fh:
        fh.write(",".join(labels) + "\n")
        for tau in range(steps):
            fh.write(",".join(repr(float(prices[j, tau]))
                              for j in range(n)) + "\n")
    return labels


class TestModelTokens:
    def test_default_and_identity(self):
        for token in (None, "identity"):
            model = cli.parse_model(token, 6)
            assert np.array_equal(model.spectrum, np.ones(6))

    def test_named_presets(self):
        one = cli.parse_model("fig1", 32)
        ref = models.exponential(32, 0.9)
        assert np.allclose(one.spectrum, ref.spectrum)
        two = cli.parse_model("fig2", 16, 48)
        ref2 = models.rank_one_partitioned(16, 48, 0.9, 0.9, 0.8)
        assert isinstance(two, models.PartitionedModel)
        assert np.allclose(two.zeta_spectrum, ref2.zeta_spectrum)
        three = cli.parse_model("fig3", 16, 48)
        ref3 = models.banded_partitioned(16, 48, 0.5, 0.5, 0.05)
        assert np.allclose(three.zeta_spectrum, ref3.zeta_spectrum)

    def test_keyword_forms(self):
        exp = cli.parse_model("exponential:c=0.5", 12)
        assert np.allclose(exp.spectrum, models.exponential(12, 0.5).spectrum)
        eq = cli.parse_model("equal-cross:c=0.3", 12)
        assert np.allclose(eq.spectrum, models.equal_cross(12, 0.3).spectrum)
        ro = cli.parse_model("rank-one:a=0.5,b=0.5,c=0.2", 8, 24)
        ref = models.rank_one_partitioned(8, 24, 0.5, 0.5, 0.2)
        assert np.allclose(ro.zeta_spectrum, ref.zeta_spectrum)
        bd = cli.parse_model("banded:a=0.4,b=0.6,c=0.05", 8, 24)
        ref = models.banded_partitioned(8, 24, 0.4, 0.6, 0.05)
        assert np.allclose(bd.zeta_spectrum, ref.zeta_spectrum)

    def test_unknown_token(self):
        with pytest.raises(BadParameters):
            cli.parse_model("gaussian:c=0.5", 8)

    def test_missing_key_value(self):
        with pytest.raises(BadParameters):
            cli.parse_model("exponential:0.5", 8)

    def test_partitioned_needs_both_dimensions(self):
        with pytest.raises(BadParameters):
            cli.parse_model("fig2", 16)
        with pytest.raises(BadParameters):
            cli.parse_model("banded:a=0.5,b=0.5,c=0.05", 16)


class TestUsageErrors:
    def test_missing_required_option(self, tmp_path, capsys):
        assert run(tmp_path, "simulate", "-n", "8", "-t", "16") == 1
        assert "requires --kind" in capsys.readouterr().err

    def test_bad_choice_is_argparse_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run(tmp_path, "simulate", "--kind", "goe", "-n", "8", "-t", "16")
        assert exc.value.code == 2

    def test_no_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code == 2

    def test_simulate_needs_horizon(self, tmp_path, capsys):
        assert run(tmp_path, "simulate", "--kind", "woe", "-n", "8") == 1
        assert "either -t or --kappa" in capsys.readouterr().err

    def test_white_ensemble_rejects_model(self, tmp_path):
        assert run(tmp_path, "simulate", "--kind", "woe", "-n", "8",
                   "-t", "16", "--model", "exponential:c=0.5") == 1

    def test_two_channel_needs_m(self, tmp_path):
        assert run(tmp_path, "simulate", "--kind", "two-channel", "-n", "8",
                   "-t", "32", "--model", "fig3") == 1

    def test_partitioned_model_needs_two_channel(self, tmp_path):
        assert run(tmp_path, "simulate", "--kind", "cwoe", "-n", "8",
                   "-m", "24", "-t", "32", "--model", "fig2") == 1

    def test_pastur_route_must_be_unique(self, tmp_path):
        assert run(tmp_path, "pastur", "--kappa", "2") == 1
        assert run(tmp_path, "pastur", "--mp", "--cwoe", "--kappa", "2") == 1

    def test_bad_grid_token(self, tmp_path):
        assert run(tmp_path, "pastur", "--mp", "--kappa", "2",
                   "--grid", "0:4") == 1


class TestSimulate:
    def test_white_ensemble_outputs(self, tmp_path, capsys):
        assert run(tmp_path, "simulate", "--kind", "woe", "-n", "32",
                   "-t", "64", "--members", "3", "--seed", "7") == 0
        spectra = read_spectra(tmp_path / "spectra.csv")
        assert sorted(spectra) == [0, 1, 2]
        assert all(v.size == 32 for v in spectra.values())
        meta = read_json(tmp_path / "spectra_meta.json")
        assert meta["kind"] == "woe"
        fp = meta["fingerprint"]
        assert fp["n"] == 32 and fp["t"] == 64 and fp["seed"] == 7
        manifest = read_json(tmp_path / "simulate_manifest.json")
        assert manifest["command"] == "simulate"
        assert manifest["version"] == rmtlab.__version__
        assert manifest["config"]["members"] == 3
        assert manifest["outputs"] == ["spectra.csv", "spectra_meta.json"]
        out = capsys.readouterr().out
        assert "members=3 n=32 t=64 kind=woe" in out
        assert "support=" in out

    def test_rank_deficit_spectra(self, tmp_path):
        assert run(tmp_path, "simulate", "--kind", "woe", "-n", "32",
                   "-t", "16", "--members", "2", "--seed", "0") == 0
        for values in read_spectra(tmp_path / "spectra.csv").values():
            assert np.sum(np.abs(values) < 1e-8) == 16

    def test_kappa_sets_horizon(self, tmp_path):
        assert run(tmp_path, "simulate", "--kind", "cwoe", "--model",
                   "exponential:c=0.9", "-n", "32", "--kappa", "2",
                   "--members", "2", "--seed", "0") == 0
        meta = read_json(tmp_path / "spectra_meta.json")
        assert meta["kind"] == "cwoe"
        assert meta["fingerprint"]["t"] == 64
        assert "model" in meta["fingerprint"]

    def test_two_channel_spectra(self, tmp_path):
        assert run(tmp_path, "simulate", "--kind", "two-channel", "-n", "8",
                   "-m", "20", "-t", "112", "--model", "fig3",
                   "--members", "2", "--seed", "4") == 0
        spectra = read_spectra(tmp_path / "spectra.csv")
        assert all(v.size == 8 for v in spectra.values())
        assert all(v.min() > 0 for v in spectra.values())
        fp = read_json(tmp_path / "spectra_meta.json")["fingerprint"]
        assert fp["m"] == 20
        assert fp["kappa_n"] == pytest.approx(8 / 112)
        assert fp["kappa_m"] == pytest.approx(20 / 112)

    def test_reruns_are_bit_identical(self, tmp_path):
        argv = ("simulate", "--kind", "woe", "-n", "16", "-t", "32",
                "--members", "2", "--seed", "5")
        a, b = tmp_path / "a", tmp_path / "b"
        assert run(a, *argv) == 0
        assert run(b, *argv) == 0
        assert (a / "spectra.csv").read_bytes() == \
            (b / "spectra.csv").read_bytes()

    def test_workers_do_not_change_output(self, tmp_path):
        argv = ("simulate", "--kind", "woe", "-n", "16", "-t", "32",
                "--members", "4", "--seed", "5")
        serial, pooled = tmp_path / "s", tmp_path / "p"
        assert run(serial, *argv, "--workers", "1") == 0
        assert run(pooled, *argv, "--workers", "3") == 0
        assert (serial / "spectra.csv").read_bytes() == \
            (pooled / "spectra.csv").read_bytes()


class TestPastur:
    def test_null_density_file(self, tmp_path, capsys):
        assert run(tmp_path, "pastur", "--mp", "--kappa", "2") == 0
        lam, rho, flags = read_density(tmp_path / "density.csv")
        assert set(flags) == {"true"}
        assert np.all(rho >= 0)
        assert np.trapezoid(rho, lam) == pytest.approx(1.0, abs=0.02)
        assert "flagged=0" in capsys.readouterr().out

    def test_null_route_needs_kappa(self, tmp_path):
        assert run(tmp_path, "pastur", "--mp") == 1

    def test_explicit_grid(self, tmp_path):
        assert run(tmp_path, "pastur", "--mp", "--kappa", "2",
                   "--grid", "0.05:4.0:200") == 0
        lam, _, _ = read_density(tmp_path / "density.csv")
        assert lam.size == 200
        assert lam[0] == 0.05 and lam[-1] == 4.0

    def test_one_channel_route(self, tmp_path):
        assert run(tmp_path, "pastur", "--cwoe", "--model",
                   "exponential:c=0.5", "--kappa", "2", "-n", "32") == 0
        lam, rho, _ = read_density(tmp_path / "density.csv")
        assert np.trapezoid(rho, lam) == pytest.approx(1.0, abs=0.02)

    def test_one_channel_needs_model_dimension(self, tmp_path):
        assert run(tmp_path, "pastur", "--cwoe", "--kappa", "2") == 1

    def test_one_channel_rejects_partitioned_model(self, tmp_path):
        assert run(tmp_path, "pastur", "--cwoe", "--model", "fig2",
                   "--kappa", "2", "-n", "16", "-m", "48") == 1

    def test_two_channel_writes_null_reference(self, tmp_path):
        assert run(tmp_path, "pastur", "--two-channel", "--kn", "0.375",
                   "--km", "0.625", "--grid", "0.01:4.0:301") == 0
        lam, rho, _ = read_density(tmp_path / "density.csv")
        lam0, rho0, _ = read_density(tmp_path / "density_zeta0.csv")
        assert np.array_equal(lam, lam0)
        # no cross-correlations: the solve must land on the closed form
        assert np.max(np.abs(rho - rho0)) < 1e-8
        manifest = read_json(tmp_path / "pastur_manifest.json")
        assert manifest["outputs"] == ["density.csv", "density_zeta0.csv"]

    def test_two_channel_needs_both_ratios(self, tmp_path):
        assert run(tmp_path, "pastur", "--two-channel", "--kn", "0.375") == 1

    def test_cross_correlations_move_the_density(self, tmp_path):
        assert run(tmp_path, "pastur", "--two-channel", "--zeta-from",
                   "fig3", "--kn", "0.25", "--km", "0.75", "-n", "48",
                   "-m", "80", "--grid", "0.05:3.0:201") == 0
        _, rho, _ = read_density(tmp_path / "density.csv")
        _, rho0, _ = read_density(tmp_path / "density_zeta0.csv")
        assert np.max(np.abs(rho - rho0)) > 0.05

    def test_zeta_from_needs_partitioned_token(self, tmp_path):
        assert run(tmp_path, "pastur", "--two-channel", "--zeta-from",
                   "exponential:c=0.5", "--kn", "0.25", "--km", "0.75") == 1

    def test_overlay_report(self, tmp_path, capsys):
        assert run(tmp_path, "simulate", "--kind", "woe", "-n", "64",
                   "-t", "128", "--members", "20", "--seed", "1") == 0
        assert run(tmp_path, "pastur", "--mp", "--kappa", "2", "--overlay",
                   str(tmp_path / "spectra.csv"), "--bins", "30") == 0
        report = read_json(tmp_path / "overlay_report.json")
        assert report["bins"] == 30
        assert report["members"] == 20
        assert report["eigenvalues"] == 20 * 64
        # calibrated: l1 = 0.059 at this seed, 0.06 to 0.08 across seeds
        assert 0.0 < report["l1"] < 0.15
        assert "overlay L1=" in capsys.readouterr().out

    def test_overlay_rejects_non_spectra_file(self, tmp_path):
        assert run(tmp_path, "pastur", "--mp", "--kappa", "2") == 0
        assert run(tmp_path, "pastur", "--mp", "--kappa", "2", "--overlay",
                   str(tmp_path / "density.csv")) == 1


class TestAnalyze:
    def test_price_pipeline(self, tmp_path):
        csv = tmp_path / "prices.csv"
        labels = write_prices(csv, 4, 121, seed=42,
                              labels=["aaa", "bbb", "ccc", "ddd"])
        assert run(tmp_path, "analyze", "--csv", str(csv)) == 0
        header, rows = read_rows(tmp_path / "correlation.csv")
        assert header == labels
        assert len(rows) == 4
        diag = [float(rows[j][j]) for j in range(4)]
        assert np.allclose(diag, 1.0, atol=1e-12)
        header, rows = read_rows(tmp_path / "spectrum.csv")
        assert header == ["index", "eigenvalue"]
        assert len(rows) == 4
        report = read_json(tmp_path / "analysis_report.json")
        assert report["n"] == 4 and report["t"] == 120
        assert report["lag"] == 0 and report["symmetric"] is True
        assert report["kappa"] == pytest.approx(30.0)
        null = report["mp_null"]
        assert null["l1"] >= 0
        assert null["edges_theory"][0] < null["edges_theory"][1]
        tops = null["top_eigenvalues"]
        assert tops == sorted(tops, reverse=True)

    def test_lagged_matrix_is_not_symmetric(self, tmp_path):
        csv = tmp_path / "prices.csv"
        write_prices(csv, 4, 61, seed=0)
        assert run(tmp_path, "analyze", "--csv", str(csv), "--lag", "2") == 0
        report = read_json(tmp_path / "analysis_report.json")
        assert report["lag"] == 2
        assert report["symmetric"] is False
        assert not (tmp_path / "spectrum.csv").exists()
        outputs = read_json(tmp_path / "analyze_manifest.json")["outputs"]
        assert "spectrum.csv" not in outputs

    def test_transposed_returns_with_index_column(self, tmp_path):
        csv = tmp_path / "returns.csv"
        rng = np.random.default_rng(3)
        vals = rng.standard_normal((3, 40))
        with open(csv, "w") as fh:
            fh.write("name," + ",".join(f"t{k}" for k in range(40)) + "\n")
            for j in range(3):
                fh.write(f"v{j}," + ",".join(repr(float(x))
                                             for x in vals[j]) + "\n")
        assert run(tmp_path, "analyze", "--csv", str(csv), "--returns",
                   "--transpose", "--index-column") == 0
        report = read_json(tmp_path / "analysis_report.json")
        assert report["n"] == 3 and report["t"] == 40

    def test_denoising_report(self, tmp_path):
        csv = tmp_path / "prices.csv"
        write_prices(csv, 8, 6, seed=7)
        assert run(tmp_path, "analyze", "--csv", str(csv),
                   "--powermap", "1.5") == 0
        report = read_json(tmp_path / "analysis_report.json")
        block = report["powermap"]
        assert block["q"] == 1.5
        assert block["alpha"] == pytest.approx(0.5)
        # 5 returns for 8 variables: 3 eigenvalues emerge from zero
        assert block["emerging"]["count"] == 3
        header, rows = read_rows(tmp_path / "denoised.csv")
        assert len(header) == 8 and len(rows) == 8
        entries = np.array([[float(x) for x in row] for row in rows])
        assert np.max(np.abs(entries)) <= 1.0 + 1e-12

    def test_missing_input_file(self, tmp_path, capsys):
        assert run(tmp_path, "analyze", "--csv",
                   str(tmp_path / "absent.csv")) == 1
        assert "error:" in capsys.readouterr().err


@pytest.fixture(scope="module")
def unfold_inputs(tmp_path_factory):
    """One simulated white ensemble plus its theoretical density."""
    d = tmp_path_factory.mktemp("unfold")
    assert run(d, "simulate", "--kind", "woe", "-n", "64", "-t", "128",
               "--members", "8", "--seed", "3") == 0
    assert run(d, "pastur", "--mp", "--kappa", "2") == 0
    return d


class TestFluct:
    def test_number_variance_file(self, unfold_inputs, tmp_path):
        assert run(tmp_path, "fluct",
                   "--spectra", str(unfold_inputs / "spectra.csv"),
                   "--density", str(unfold_inputs / "density.csv"),
                   "--window", "0.3:2.5", "--r-max", "5") == 0
        header, rows = read_rows(tmp_path / "number_variance.csv")
        assert header == ["r", "sigma2", "stderr", "goe_reference"]
        assert [float(r[0]) for r in rows] == [1.0, 2.0, 3.0, 4.0, 5.0]
        for r in rows:
            assert float(r[1]) > 0
            assert float(r[2]) > 0
            ref = fluctuations.goe_number_variance(float(r[0]))
            assert float(r[3]) == pytest.approx(ref, rel=1e-12)
        # calibrated: sigma2(1) = 0.433 against the 0.442 reference
        assert abs(float(rows[0][1])
                   - fluctuations.goe_number_variance(1.0)) < 0.2

    def test_bad_window_token(self, unfold_inputs, tmp_path):
        for token in ("0.3", "2.5:0.3"):
            assert run(tmp_path, "fluct",
                       "--spectra", str(unfold_inputs / "spectra.csv"),
                       "--density", str(unfold_inputs / "density.csv"),
                       "--window", token) == 1

    def test_rejects_swapped_inputs(self, unfold_inputs, tmp_path, capsys):
        assert run(tmp_path, "fluct",
                   "--spectra", str(unfold_inputs / "density.csv"),
                   "--density", str(unfold_inputs / "density.csv")) == 1
        assert "not a spectra CSV" in capsys.readouterr().err
        assert run(tmp_path, "fluct",
                   "--spectra", str(unfold_inputs / "spectra.csv"),
                   "--density", str(unfold_inputs / "spectra.csv")) == 1


class TestPowermap:
    def test_report_file(self, tmp_path):
        assert run(tmp_path, "powermap", "-n", "32", "-t", "64",
                   "--alpha", "1e-3", "--members", "4", "--seed", "2") == 0
        report = read_json(tmp_path / "powermap_report.json")
        assert sorted(report) == ["alpha", "c", "kappa", "measured",
                                  "members", "n", "r_shift", "s", "t",
                                  "theory", "trace_dm1", "warnings"]
        assert report["kappa"] == pytest.approx(2.0)
        # the white ensemble is the zero-coupling case
        assert report["c"] == 0.0
        assert report["s"] < 0
        assert report["warnings"] == []
        # full-rank geometry: nothing emerges from zero
        assert report["measured"]["dm1_0"] == 0.0
        assert report["theory"]["dm1"] == pytest.approx(1e-3 / 64,
                                                        rel=1e-12)
        assert report["r_shift"] == pytest.approx(
            report["theory"]["dm1"] - report["s"], rel=1e-12)

    def test_equal_cross_model(self, tmp_path):
        assert run(tmp_path, "powermap", "-n", "16", "-t", "32",
                   "--alpha", "1e-3", "--model", "equal-cross:c=0.5",
                   "--members", "3", "--seed", "0") == 0
        report = read_json(tmp_path / "powermap_report.json")
        assert report["c"] == 0.5

    def test_warning_lands_in_payload_and_stderr(self, tmp_path, capsys):
        assert run(tmp_path, "powermap", "-n", "32", "-t", "16",
                   "--alpha", "0.5", "--members", "3", "--seed", "1") == 0
        report = read_json(tmp_path / "powermap_report.json")
        assert any("alpha may be too large" in w for w in report["warnings"])
        assert "note:" in capsys.readouterr().err

    def test_rejects_other_model_tokens(self, tmp_path):
        assert run(tmp_path, "powermap", "-n", "16", "-t", "32",
                   "--model", "exponential:c=0.5") == 1


class TestPortfolio:
    def test_study_outputs(self, tmp_path, capsys):
        assert run(tmp_path, "portfolio", "-n", "8", "--block-size", "4",
                   "--t-sweep", "4:12:4", "--q", "1.0", "--members", "2",
                   "--seed", "0") == 0
        header, rows = read_rows(tmp_path / "portfolio_study.csv")
        assert header == ["t", "q", "member", "ratio", "estimator"]
        assert len(rows) == 9
        # horizons below the matrix dimension leave the ratio cell empty
        singular = [r for r in rows if r[0] == "4" and r[4] == "sample"]
        assert len(singular) == 2
        assert all(r[3] == "" for r in singular)
        solvable = [r for r in rows if r[0] == "12" and r[4] == "sample"]
        assert all(float(r[3]) >= 1.0 for r in solvable)
        summary = read_json(tmp_path / "portfolio_summary.json")
        assert len(summary) == 6
        gap = [c for c in summary
               if c["t"] == 4 and c["estimator"] == "sample"]
        assert gap[0]["count"] == 0 and gap[0]["median"] is None
        good = [c for c in summary
                if c["t"] == 12 and c["estimator"] == "sample"]
        assert good[0]["count"] == 2
        assert good[0]["q1"] <= good[0]["median"] <= good[0]["q3"]
        homogeneous = [c for c in summary if c["estimator"] == "homogeneous"]
        assert all(c["q"] is None for c in homogeneous)
        assert "missing=4" in capsys.readouterr().out

    def test_block_size_must_divide(self, tmp_path):
        assert run(tmp_path, "portfolio", "-n", "10",
                   "--block-size", "4") == 1

    def test_bad_sweep_token(self, tmp_path):
        assert run(tmp_path, "portfolio", "-n", "8", "--block-size", "4",
                   "--t-sweep", "50") == 1

    def test_exponent_below_one(self, tmp_path):
        assert run(tmp_path, "portfolio", "-n", "8", "--block-size", "4",
                   "--t-sweep", "12:12:1", "--q", "0.5",
                   "--members", "1") == 1


class TestConfigFile:
    def test_values_come_from_file(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[simulate]\nkind = woe\nn = 16\nt = 32\n"
                       "members = 2\nseed = 9\n")
        assert run(tmp_path, "simulate", "--config", str(ini)) == 0
        cfg = read_json(tmp_path / "simulate_manifest.json")["config"]
        assert cfg["kind"] == "woe" and cfg["n"] == 16
        assert cfg["members"] == 2 and cfg["seed"] == 9
        spectra = read_spectra(tmp_path / "spectra.csv")
        assert sorted(spectra) == [0, 1]

    def test_flags_override_file(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[simulate]\nkind = woe\nn = 16\nt = 32\n"
                       "members = 2\nseed = 9\n")
        assert run(tmp_path, "simulate", "--config", str(ini),
                   "--members", "3") == 0
        cfg = read_json(tmp_path / "simulate_manifest.json")["config"]
        assert cfg["members"] == 3
        assert len(read_spectra(tmp_path / "spectra.csv")) == 3

    def test_boolean_flags_from_file(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[pastur]\nmp = true\nkappa = 2.0\n")
        assert run(tmp_path, "pastur", "--config", str(ini)) == 0
        cfg = read_json(tmp_path / "pastur_manifest.json")["config"]
        assert cfg["mp"] is True
        assert (tmp_path / "density.csv").exists()

    def test_unreadable_config(self, tmp_path, capsys):
        assert run(tmp_path, "simulate", "--config",
                   str(tmp_path / "absent.ini"), "--kind", "woe",
                   "-n", "8", "-t", "16") == 1
        assert "cannot read config file" in capsys.readouterr().err


class TestReplay:
    def test_simulate_replay_is_bit_identical(self, tmp_path):
        first = tmp_path / "first"
        again = tmp_path / "again"
        assert run(first, "simulate", "--kind", "woe", "-n", "16",
                   "-t", "32", "--members", "2", "--seed", "5") == 0
        assert run(again, "replay",
                   str(first / "simulate_manifest.json")) == 0
        for name in ("spectra.csv", "spectra_meta.json",
                     "simulate_manifest.json"):
            assert (first / name).read_bytes() == (again / name).read_bytes()

    def test_density_replay_is_bit_identical(self, tmp_path):
        first = tmp_path / "first"
        again = tmp_path / "again"
        assert run(first, "pastur", "--mp", "--kappa", "0.5",
                   "--grid", "0.001:4.0:101") == 0
        assert run(again, "replay", str(first / "pastur_manifest.json")) == 0
        assert (first / "density.csv").read_bytes() == \
            (again / "density.csv").read_bytes()

    def test_unknown_command_in_manifest(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"command": "bogus", "config": {},
                                   "outputs": []}))
        assert run(tmp_path, "replay", str(bad)) == 1
        assert "unknown command" in capsys.readouterr().err

    def test_missing_manifest(self, tmp_path):
        assert run(tmp_path, "replay", str(tmp_path / "absent.json")) == 1


class TestOutputDirectory:
    def test_environment_default(self, tmp_path, monkeypatch):
        envdir = tmp_path / "fromenv"
        monkeypatch.setenv(cli.OUTDIR_ENV, str(envdir))
        assert cli.main(["pastur", "--mp", "--kappa", "2",
                         "--grid", "0.01:4.0:50"]) == 0
        assert (envdir / "density.csv").exists()

    def test_flag_overrides_environment(self, tmp_path, monkeypatch):
        envdir = tmp_path / "fromenv"
        flagdir = tmp_path / "fromflag"
        monkeypatch.setenv(cli.OUTDIR_ENV, str(envdir))
        assert run(flagdir, "pastur", "--mp", "--kappa", "2",
                   "--grid", "0.01:4.0:50") == 0
        assert (flagdir / "density.csv").exists()
        assert not envdir.exists()


class TestVersion:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--version"])
        assert exc.value.code == 0
        assert rmtlab.__version__ in capsys.readouterr().out

    def test_console_script(self):
        exe = shutil.which("rmtlab")
        assert exe is not None
        proc = subprocess.run([exe, "--version"], capture_output=True,
                              text=True)
        assert proc.returncode == 0
        assert rmtlab.__version__ in proc.stdout
