"""Experiment configuration (YAML) and its validation.

Example::

    signal:
      amplitudes: [0.748, 0.891]
      locations: [0.50, 0.83]      # seconds
    kernel:
      weights: [1.0]
      T: 0.062                     # seconds
      theta: 0.7853981633974483    # radians
    noise:
      psnr_db: [20, 30, 40]
      quantizer: {bits: 8, headroom: 1.25}
    run:
      N: 16
      trials: 200
      seed: 0
      workers: 1

Instead of fixed ``amplitudes``/``locations`` the signal section may ask for a
fresh draw per trial::

    signal:
      K: 2
      amplitude_range: [0.5, 1.5]
      location_range: [0.1, 0.8]   # seconds
      min_separation: 0.0124       # seconds
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from ..errors import ConfigError, FracSparseError
from ..frft import FrftOrder, Kernel, SparseSignal
from ..recovery import AnnihilationConfig

log = logging.getLogger("fracsparse")


@dataclass(frozen=True)
class QuantizerSpec:
    bits: int = 8
    headroom: float = 1.25


@dataclass(frozen=True)
class SignalSpec:
    K: int
    amplitudes: tuple | None = None
    locations: tuple | None = None
    amplitude_range: tuple = (0.5, 1.5)
    location_range: tuple | None = None
    min_separation: float = 0.0

    @property
    def is_fixed(self) -> bool:
        return self.locations is not None

    def fixed_signal(self) -> SparseSignal:
        return SparseSignal.from_unsorted(self.amplitudes, self.locations)

    def draw(self, rng: np.random.Generator, max_tries: int = 10_000) -> SparseSignal:
        lo, hi = self.location_range
        for _ in range(max_tries):
            t = np.sort(rng.uniform(lo, hi, self.K))
            if self.K == 1 or np.min(np.diff(t)) >= self.min_separation:
                break
        else:
            raise ConfigError("could not draw spike locations honoring min_separation")
        c = rng.uniform(*self.amplitude_range, self.K)
        return SparseSignal(c, t)


@dataclass(frozen=True)
class ExperimentConfig:
    signal: SignalSpec
    kernel: Kernel
    theta: FrftOrder
    N: int
    psnr_db: tuple = (math.inf,)
    trials: int = 1
    seed: int = 0
    workers: int = 1
    quantizer: QuantizerSpec | None = None
    source: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def K(self) -> int:
        return self.signal.K

    @property
    def M(self) -> int:
        return self.kernel.M

    def annihilation(self) -> AnnihilationConfig:
        return AnnihilationConfig(K=self.K, M=self.M)

    def sigma2(self, signal: SparseSignal, psnr_db: float) -> float:
        """Noise variance for a PSNR, taking the peak as ``max_k |c_k|^2``."""
        if math.isinf(psnr_db) and psnr_db > 0:
            return 0.0
        peak = float(np.max(np.abs(signal.amplitudes)) ** 2)
        return peak / 10 ** (psnr_db / 10)


def _section(raw, name, required=True):
    sec = raw.get(name)
    if sec is None:
        if required:
            raise ConfigError(f"missing [{name}] section")
        return {}
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a mapping")
    return sec


def _floats(values, what):
    if isinstance(values, (int, float)):
        values = [values]
    try:
        return tuple(float(v) for v in values)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a list of numbers") from None


def parse_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a mapping")
    sig = _section(raw, "signal")
    ker = _section(raw, "kernel")
    noise = _section(raw, "noise", required=False)
    run = _section(raw, "run")

    try:
        if "theta" not in ker or "T" not in ker:
            raise ConfigError("[kernel] needs 'T' (seconds) and 'theta' (radians)")
        kernel = Kernel(_floats(ker.get("weights", [1.0]), "kernel.weights"), float(ker["T"]))
        theta = FrftOrder(float(ker["theta"]))

        if "locations" in sig:
            locations = _floats(sig["locations"], "signal.locations")
            amplitudes = _floats(sig.get("amplitudes", [1.0] * len(locations)), "signal.amplitudes")
            if len(amplitudes) != len(locations):
                raise ConfigError("signal.amplitudes and signal.locations differ in length")
            spec = SignalSpec(len(locations), amplitudes, locations)
            spec.fixed_signal()
        else:
            if "K" not in sig or "location_range" not in sig:
                raise ConfigError("[signal] needs 'locations' or both 'K' and 'location_range'")
            spec = SignalSpec(
                K=int(sig["K"]),
                amplitude_range=_floats(sig.get("amplitude_range", (0.5, 1.5)), "amplitude_range"),
                location_range=_floats(sig["location_range"], "location_range"),
                min_separation=float(sig.get("min_separation", 0.0)),
            )
            if spec.K < 1 or len(spec.location_range) != 2:
                raise ConfigError("signal.K must be >= 1 and location_range a [lo, hi] pair")

        if "N" not in run:
            raise ConfigError("[run] needs 'N' (number of samples)")
        N = int(run["N"])
        trials = int(run.get("trials", 1))
        workers = int(run.get("workers", 1))
        seed = int(run.get("seed", 0))
        psnr = _floats(noise.get("psnr_db", [math.inf]), "noise.psnr_db")
        q = noise.get("quantizer")
        quantizer = None
        if q:
            quantizer = QuantizerSpec(int(q.get("bits", 8)), float(q.get("headroom", 1.25)))
    except FracSparseError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid configuration value: {exc}") from None

    KM = spec.K * kernel.M
    if N < 2 * KM:
        raise ConfigError(
            f"run.N={N} is below the 2*K*M={2 * KM} samples needed for recovery; "
            f"increase N or reduce K (={spec.K}) / kernel taps (={kernel.M})"
        )
    if trials < 1 or workers < 1:
        raise ConfigError("run.trials and run.workers must be >= 1")
    lo, hi = (min(spec.locations), max(spec.locations)) if spec.is_fixed else spec.location_range
    if lo <= 0 or hi >= (N - KM) * kernel.T:
        # recovery is still attempted, but exactness is only guaranteed inside the window
        log.warning(
            "spike locations span [%g, %g] s, outside (0, (N-K*M)*T) = (0, %g) s; "
            "recovery is not guaranteed there",
            lo,
            hi,
            (N - KM) * kernel.T,
        )
    return ExperimentConfig(
        signal=spec,
        kernel=kernel,
        theta=theta,
        N=N,
        psnr_db=psnr,
        trials=trials,
        seed=seed,
        workers=workers,
        quantizer=quantizer,
        source=raw,
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})") from None
    return parse_config(raw)
