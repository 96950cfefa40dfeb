"""Command line entry point: ``fracsparse {synth,recover,crb,montecarlo,ingest}``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import warnings

import numpy as np

from ..crb import crb_analytic_k1, crb_numeric
from ..errors import FracSparseError
from ..frft import Kernel
from ..recovery import AnnihilationConfig, recover
from ..synthesis import NoiseModel, QuantizerModel, add_noise, quantize, sample_uniform
from .config import load_config
from .iqcsv import export_samples, fmt, ingest_capture
from .montecarlo import NOISE_STREAM, run_monte_carlo, trial_signal
from .report import write_report

log = logging.getLogger("fracsparse")


def _weights(text):
    return [float(w) for w in text.split(",")]


def cmd_synth(args):
    cfg = load_config(args.config)
    signal = trial_signal(cfg, 0, args.trial)
    clean = sample_uniform(signal, cfg.kernel, cfg.theta, cfg.N)
    samples = clean
    if args.psnr_db is not None:
        sigma2 = cfg.sigma2(signal, args.psnr_db)
        samples = add_noise(clean, NoiseModel(sigma2, cfg.seed), 0, args.trial, NOISE_STREAM)
    if args.quantize:
        spec = cfg.quantizer
        bits, headroom = (spec.bits, spec.headroom) if spec else (8, 1.25)
        qm = QuantizerModel.for_samples(clean, bits, headroom)
        samples = quantize(samples, qm)
        log.info("quantized to %d bits, full scale %s", bits, fmt(qm.full_scale))
    export_samples(samples, args.out)
    log.info("wrote %d samples to %s", samples.N, args.out)
    return 0


def cmd_recover(args):
    samples = ingest_capture(args.capture, "iq-csv", args.theta, args.T)
    kernel = Kernel(args.weights, args.T)
    config = AnnihilationConfig(K=args.K, M=kernel.M, imag_tol=args.imag_tol)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = recover(samples, kernel, config)
    out = {
        "K": result.K,
        "M": kernel.M,
        "N": samples.N,
        "theta": args.theta,
        "T": args.T,
        "spikes": [
            {"t": float(t), "c_re": float(c.real), "c_im": float(c.imag)}
            for t, c in zip(result.locations, result.amplitudes)
        ],
        "q": [float(v) for v in result.q],
        "roots": [[float(r.real), float(r.imag)] for r in result.roots],
        "residual_norm": result.residual_norm,
        "imag_residue": result.imag_residue,
        "warnings": list(result.warnings),
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_crb(args):
    cfg = load_config(args.config)
    if not cfg.signal.is_fixed:
        raise FracSparseError("the crb command needs fixed signal.locations")
    signal = cfg.signal.fixed_signal()
    sinc_kernel = cfg.M == 1 and cfg.kernel.weights[0] == 1.0
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["psnr_db", "sigma2", "k", "t_k", "c_k", "crb_t", "crb_c", "crb_t_analytic", "crb_c_analytic"])
        for psnr_db in cfg.psnr_db:
            sigma2 = cfg.sigma2(signal, psnr_db)
            if sigma2 == 0:
                continue
            rep = crb_numeric(signal, cfg.kernel, cfg.theta, cfg.N, sigma2)
            ana = None
            if signal.K == 1 and sinc_kernel:
                ana = crb_analytic_k1(signal.amplitudes[0], signal.locations[0], cfg.kernel.T, cfg.theta, sigma2)
            for k in range(signal.K):
                w.writerow([
                    fmt(psnr_db),
                    fmt(sigma2),
                    k,
                    fmt(signal.locations[k]),
                    fmt(signal.amplitudes[k].real),
                    fmt(rep.var_t[k]),
                    fmt(rep.var_c[k]),
                    fmt(ana.var_t[0]) if ana else "",
                    fmt(ana.var_c[0]) if ana else "",
                ])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_montecarlo(args):
    cfg = load_config(args.config)
    report = run_monte_carlo(cfg, workers=args.workers)
    paths = write_report(report, args.out)
    sys.stdout.write(paths["text"].read_text())
    return 0


def cmd_ingest(args):
    samples = ingest_capture(args.capture, "iq-csv", args.theta, args.T)
    y = samples.values
    info = {
        "N": samples.N,
        "T": samples.T,
        "theta": samples.theta.theta,
        "peak_i": float(np.max(np.abs(y.real))),
        "peak_q": float(np.max(np.abs(y.imag))),
    }
    if args.out:
        export_samples(samples, args.out)
        info["normalized"] = str(args.out)
    json.dump(info, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="fracsparse",
        description="Sparse sampling and recovery in the fractional Fourier domain.",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize samples from a config and write iq-csv")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--psnr-db", type=float, default=None, help="add complex noise at this PSNR")
    s.add_argument("--quantize", action="store_true", help="apply the configured ADC model")
    s.add_argument("--trial", type=int, default=0, help="trial index selecting the noise stream")
    s.set_defaults(func=cmd_synth)

    r = sub.add_parser("recover", help="recover spikes from an iq-csv capture")
    r.add_argument("capture")
    r.add_argument("--K", type=int, required=True)
    r.add_argument("--theta", type=float, required=True, help="FrFT order in radians")
    r.add_argument("--T", type=float, required=True, help="sample period in seconds")
    r.add_argument("--weights", type=_weights, default=[1.0], help="kernel weights p_m, comma separated")
    r.add_argument("--imag-tol", type=float, default=1e-3)
    r.set_defaults(func=cmd_recover)

    c = sub.add_parser("crb", help="tabulate Cramér-Rao bounds for a config")
    c.add_argument("--config", required=True)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_crb)

    m = sub.add_parser("montecarlo", help="run the Monte Carlo benchmark")
    m.add_argument("--config", required=True)
    m.add_argument("--out", required=True, help="output directory")
    m.add_argument("--workers", type=int, default=None)
    m.set_defaults(func=cmd_montecarlo)

    i = sub.add_parser("ingest", help="validate and normalize an iq-csv capture")
    i.add_argument("capture")
    i.add_argument("--theta", type=float, required=True)
    i.add_argument("--T", type=float, required=True)
    i.add_argument("--out", default=None)
    i.set_defaults(func=cmd_ingest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (FracSparseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
