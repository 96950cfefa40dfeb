import csv
import json
import math

import numpy as np
import pytest
import yaml

from fracsparse import CaptureFormatError, ConfigError, SampleSet, sample_uniform
from fracsparse.harness.cli import main
from fracsparse.harness.config import load_config, parse_config
from fracsparse.harness.iqcsv import export_samples, ingest_capture
from fracsparse.harness.montecarlo import match_spikes, run_monte_carlo
from fracsparse.harness.report import write_report

HW = {
    "signal": {"amplitudes": [0.748, 0.891], "locations": [0.50, 0.83]},
    "kernel": {"weights": [1.0], "T": 0.062, "theta": math.pi / 4},
    "noise": {"psnr_db": [40]},
    "run": {"N": 16, "trials": 4, "seed": 0},
}


def with_changes(base, **sections):
    raw = json.loads(json.dumps(base))
    for name, changes in sections.items():
        raw.setdefault(name, {}).update(changes)
    return raw


@pytest.fixture
def hw_config_file(tmp_path):
    path = tmp_path / "hw.yaml"
    path.write_text(yaml.safe_dump(HW))
    return path


class TestConfig:
    def test_load(self, hw_config_file):
        cfg = load_config(hw_config_file)
        assert (cfg.K, cfg.M, cfg.N, cfg.trials) == (2, 1, 16, 4)
        assert cfg.theta.theta == pytest.approx(math.pi / 4)
        assert cfg.psnr_db == (40.0,)

    def test_undersampled_is_rejected_with_guidance(self):
        with pytest.raises(ConfigError, match=r"2\*K\*M=4"):
            parse_config(with_changes(HW, run={"N": 3}))

    def test_missing_sections(self):
        with pytest.raises(ConfigError, match="kernel"):
            parse_config({"signal": HW["signal"], "run": HW["run"]})
        with pytest.raises(ConfigError):
            parse_config(with_changes(HW, kernel={"T": "fast"}))

    def test_locations_outside_guaranteed_window_warn(self, caplog):
        parse_config(HW)
        assert not caplog.records
        parse_config(with_changes(HW, signal={"locations": [0.50, 0.95]}))
        assert "not guaranteed" in caplog.text

    def test_psnr_convention(self):
        cfg = parse_config(HW)
        sig = cfg.signal.fixed_signal()
        assert cfg.sigma2(sig, 20.0) == pytest.approx(0.891**2 / 100)
        assert cfg.sigma2(sig, math.inf) == 0.0

    def test_random_signal_draw(self):
        raw = with_changes(HW, signal={"K": 3, "location_range": [0.1, 0.8], "min_separation": 0.05})
        del raw["signal"]["locations"], raw["signal"]["amplitudes"]
        raw["run"]["N"] = 20
        cfg = parse_config(raw)
        sig = cfg.signal.draw(np.random.default_rng(0))
        assert sig.K == 3 and np.min(np.diff(sig.locations)) >= 0.05


class TestIqCsv:
    def test_round_trip_full_precision(self, tmp_path, hw_signal, hw_kernel):
        s = sample_uniform(hw_signal, hw_kernel, math.pi / 4, 16)
        path = export_samples(s, tmp_path / "cap.csv")
        back = ingest_capture(path, "iq-csv", math.pi / 4, 0.062)
        assert back.N == 16
        np.testing.assert_array_equal(back.values, s.values)

    def test_round_trip_awkward_doubles(self, tmp_path, rng):
        v = rng.standard_normal(50) * 10.0 ** rng.integers(-300, 300, 50)
        s = SampleSet(v + 1j * v[::-1], 1.0, 1.0)
        back = ingest_capture(export_samples(s, tmp_path / "x.csv"), theta=1.0, T=1.0)
        np.testing.assert_array_equal(back.values, s.values)

    @pytest.mark.parametrize(
        "text,line",
        [
            ("", 1),
            ("n,i,q\n", 2),
            ("a,b,c\n0,1,2\n", 1),
            ("n,i,q\n0,1.0,2.0\n1,oops,3\n", 3),
            ("n,i,q\n0,1.0,2.0\n1,1.0\n", 3),
            ("n,i,q\n0,1,1\n1,1,1\n1,1,1\n", 4),
            ("n,i,q\n0,1,1\n2,1,1\n", 3),
            ("n,i,q\n0,nan,1\n", 2),
        ],
    )
    def test_malformed_files_report_line(self, tmp_path, text, line):
        path = tmp_path / "bad.csv"
        path.write_text(text)
        with pytest.raises(CaptureFormatError) as exc:
            ingest_capture(path, "iq-csv", math.pi / 4, 0.062)
        assert exc.value.line == line
        assert str(exc.value).startswith(f"line {line}:")


class TestMonteCarlo:
    def test_noiseless_single_trial(self):
        cfg = parse_config(with_changes(HW, noise={"psnr_db": [math.inf]}, run={"trials": 1}))
        rep = run_monte_carlo(cfg)
        row = rep.summary[0]
        assert row.ok == 1 and row.sigma2 == 0
        assert np.max(row.mse_t) < 1e-18 and np.max(row.mse_c) < 1e-12

    def test_worker_count_does_not_change_report(self, tmp_path):
        raw = with_changes(HW, noise={"psnr_db": [20, 40], "quantizer": {"bits": 8}}, run={"trials": 12})
        cfg = parse_config(raw)
        a = write_report(run_monte_carlo(cfg, workers=1), tmp_path / "a")
        b = write_report(run_monte_carlo(cfg, workers=3), tmp_path / "b")
        for key in a:
            assert a[key].read_bytes() == b[key].read_bytes()

    def test_report_files(self, tmp_path):
        cfg = parse_config(HW)
        paths = write_report(run_monte_carlo(cfg), tmp_path / "out")
        rows = list(csv.reader(paths["trials"].open()))
        assert len(rows) == 1 + 4 and "sqerr_t_1" in rows[0]
        summary = list(csv.DictReader(paths["summary"].open()))
        assert summary[0]["trials"] == "4" and float(summary[0]["crb_t"]) > 0
        assert "CRB(t)" in paths["text"].read_text()

    def test_mse_not_below_bound_single_spike(self):
        raw = with_changes(
            HW,
            signal={"amplitudes": [0.748], "locations": [0.50]},
            noise={"psnr_db": [30]},
            run={"trials": 1000},
        )
        rep = run_monte_carlo(parse_config(raw))
        row = rep.summary[0]
        bound = 3 * 0.062**2 / (math.pi**2 * 10**3)
        assert row.crb_t_analytic == pytest.approx(bound, rel=1e-12)
        assert row.mse_t[0] >= 0.95 * bound
        assert not row.below_crb

    def test_matching_is_by_location(self):
        i_true, i_est = match_spikes([0.1, 0.5, 0.9], [0.88, 0.12, 0.52])
        assert list(i_est[np.argsort(i_true)]) == [1, 2, 0]


class TestCli:
    def test_synth_then_recover(self, tmp_path, hw_config_file, capsys):
        cap = tmp_path / "cap.csv"
        assert main(["synth", "--config", str(hw_config_file), "--out", str(cap)]) == 0
        assert main(["recover", str(cap), "--K", "2", "--theta", str(math.pi / 4), "--T", "0.062"]) == 0
        out = json.loads(capsys.readouterr().out)
        np.testing.assert_allclose([s["t"] for s in out["spikes"]], [0.50, 0.83], atol=1e-9)
        np.testing.assert_allclose([s["c_re"] for s in out["spikes"]], [0.748, 0.891], rtol=1e-9)

    def test_synth_noisy_and_quantized(self, tmp_path, hw_config_file):
        cap = tmp_path / "cap.csv"
        assert main(["synth", "--config", str(hw_config_file), "--out", str(cap), "--psnr-db", "30", "--quantize"]) == 0
        assert ingest_capture(cap, theta=math.pi / 4, T=0.062).N == 16

    def test_crb_table(self, tmp_path, hw_config_file):
        out = tmp_path / "crb.csv"
        assert main(["crb", "--config", str(hw_config_file), "--out", str(out)]) == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 2 and all(float(r["crb_t"]) > 0 for r in rows)

    def test_montecarlo(self, tmp_path, hw_config_file, capsys):
        assert main(["montecarlo", "--config", str(hw_config_file), "--out", str(tmp_path / "mc")]) == 0
        assert "PSNR dB" in capsys.readouterr().out
        assert (tmp_path / "mc" / "summary.csv").exists()

    def test_ingest(self, tmp_path, hw_signal, hw_kernel, capsys):
        cap = export_samples(sample_uniform(hw_signal, hw_kernel, math.pi / 4, 16), tmp_path / "c.csv")
        assert main(["ingest", str(cap), "--theta", "0.785", "--T", "0.062"]) == 0
        assert json.loads(capsys.readouterr().out)["N"] == 16

    def test_errors_exit_nonzero(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("n,i,q\n")
        assert main(["ingest", str(bad), "--theta", "0.785", "--T", "0.062"]) == 2
        assert "line 2" in capsys.readouterr().err
        cfg = tmp_path / "c.yaml"
        cfg.write_text(yaml.safe_dump(with_changes(HW, run={"N": 2})))
        assert main(["crb", "--config", str(cfg)]) == 2
