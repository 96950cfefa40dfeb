"""Tabular report output for Monte Carlo runs and bound tables."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .iqcsv import fmt
from .montecarlo import MonteCarloReport


def _nums(values, K):
    if values is None:
        return ["" for _ in range(K)]
    return [fmt(v) for v in np.atleast_1d(values)]


def trial_rows(report: MonteCarloReport):
    K = report.config.K
    header = ["psnr_db", "trial", "key", "status", "sigma2", "residual"]
    for k in range(K):
        header += [
            f"t_true_{k}",
            f"t_hat_{k}",
            f"c_true_{k}",
            f"c_hat_re_{k}",
            f"c_hat_im_{k}",
            f"sqerr_t_{k}",
            f"sqerr_c_{k}",
        ]
    yield header
    for r in report.trials:
        row = [fmt(r.psnr_db), r.trial, r.key, r.status, fmt(r.sigma2), fmt(r.residual)]
        t_hat = _nums(r.locations, K)
        c_re = _nums(None if r.amplitudes is None else r.amplitudes.real, K)
        c_im = _nums(None if r.amplitudes is None else r.amplitudes.imag, K)
        e_t = _nums(r.sqerr_t, K)
        e_c = _nums(r.sqerr_c, K)
        for k in range(K):
            row += [
                fmt(r.true_locations[k]),
                t_hat[k],
                fmt(r.true_amplitudes[k].real),
                c_re[k],
                c_im[k],
                e_t[k],
                e_c[k],
            ]
        yield row


SUMMARY_HEADER = [
    "psnr_db",
    "sigma2",
    "trials",
    "ok",
    "failed",
    "mse_t",
    "mse_c",
    "crb_t",
    "crb_c",
    "crb_t_analytic",
    "crb_c_analytic",
    "mse_t_over_crb_t",
    "below_crb",
]


def summary_rows(report: MonteCarloReport):
    yield SUMMARY_HEADER
    for s in report.summary:
        mse_t, mse_c = float(np.mean(s.mse_t)), float(np.mean(s.mse_c))
        crb_t, crb_c = float(np.mean(s.crb_t)), float(np.mean(s.crb_c))
        ratio = mse_t / crb_t if crb_t > 0 else math.nan
        yield [
            fmt(s.psnr_db),
            fmt(s.sigma2),
            s.trials,
            s.ok,
            s.failed,
            fmt(mse_t),
            fmt(mse_c),
            fmt(crb_t),
            fmt(crb_c),
            fmt(s.crb_t_analytic),
            fmt(s.crb_c_analytic),
            fmt(ratio),
            int(s.below_crb),
        ]


def summary_text(report: MonteCarloReport) -> str:
    cfg = report.config
    out = io.StringIO()
    out.write(
        f"K={cfg.K} M={cfg.M} N={cfg.N} T={cfg.kernel.T:g}s theta={cfg.theta.theta:.6g}rad "
        f"trials={cfg.trials} seed={cfg.seed}"
    )
    if cfg.quantizer:
        out.write(f" quantizer={cfg.quantizer.bits}bit x{cfg.quantizer.headroom:g}")
    out.write("\n\n")
    cols = f"{'PSNR dB':>8} {'ok/n':>10} {'MSE(t)':>11} {'CRB(t)':>11} {'MSE(c)':>11} {'CRB(c)':>11}  flag\n"
    out.write(cols)
    out.write("-" * (len(cols) - 1) + "\n")
    for s in report.summary:
        flag = "MSE<CRB" if s.below_crb else ""
        out.write(
            f"{s.psnr_db:>8.3g} {f'{s.ok}/{s.trials}':>10} {np.mean(s.mse_t):>11.4e} "
            f"{np.mean(s.crb_t):>11.4e} {np.mean(s.mse_c):>11.4e} {np.mean(s.crb_c):>11.4e}  {flag}\n"
        )
    failed = sum(s.failed for s in report.summary)
    if failed:
        out.write(f"\n{failed} failed trial(s) excluded from the MSE columns.\n")
    return out.getvalue()


def _write_csv(path, rows):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in rows:
            w.writerow(row)


def write_report(report: MonteCarloReport, outdir) -> dict:
    """Write ``trials.csv``, ``summary.csv`` and ``summary.txt`` into ``outdir``."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "trials": outdir / "trials.csv",
        "summary": outdir / "summary.csv",
        "text": outdir / "summary.txt",
    }
    _write_csv(paths["trials"], trial_rows(report))
    _write_csv(paths["summary"], summary_rows(report))
    paths["text"].write_text(summary_text(report))
    return paths
