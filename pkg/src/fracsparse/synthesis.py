"""Measurement synthesis: closed-form low-pass samples, complex noise, ADC model."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .frft import Kernel, SampleSet, SparseSignal, as_order, chirp_factor


@dataclass(frozen=True)
class NoiseModel:
    """Circular complex Gaussian noise with total variance ``sigma2`` per sample."""

    sigma2: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma2 >= 0:
            raise InvalidArgumentError(f"sigma2 must be >= 0, got {self.sigma2!r}")


@dataclass(frozen=True)
class QuantizerModel:
    bits: int = 8
    full_scale: float = 1.0

    def __post_init__(self):
        if int(self.bits) != self.bits or self.bits < 1:
            raise InvalidArgumentError(f"bits must be a positive integer, got {self.bits!r}")
        if not self.full_scale > 0:
            raise InvalidArgumentError("full_scale must be positive")

    @property
    def step(self) -> float:
        return 2.0 * self.full_scale / (2**self.bits - 1)

    @classmethod
    def for_samples(cls, samples: SampleSet, bits: int = 8, headroom: float = 1.25):
        """Full scale set to ``headroom`` times the largest per-channel magnitude."""
        y = samples.values
        peak = float(max(np.max(np.abs(y.real)), np.max(np.abs(y.imag))))
        if peak == 0:
            peak = 1.0
        return cls(bits, headroom * peak)


def synthesize_measurement(signal: SparseSignal, kernel: Kernel, theta, t):
    """Noiseless low-pass measurement ``y(t)`` of a Dirac stream.

    ``y(t) = conj(xi(t)) * sum_k c_k xi(t_k) psi_M(t - t_k)``, evaluated in
    closed form (no quadrature). Accepts scalar or array ``t``.
    """
    theta = as_order(theta)
    t = np.asarray(t, dtype=float)
    x = (t[..., None] - signal.locations) / kernel.T
    terms = signal.amplitudes * chirp_factor(theta, signal.locations) * kernel.psi(x)
    out = np.conj(chirp_factor(theta, t)) * terms.sum(axis=-1)
    return complex(out) if out.ndim == 0 else out


def sample_uniform(signal: SparseSignal, kernel: Kernel, theta, N: int) -> SampleSet:
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {N!r}")
    theta = as_order(theta)
    t = np.arange(int(N)) * kernel.T
    return SampleSet(synthesize_measurement(signal, kernel, theta, t), kernel.T, theta)


def noise_generator(seed: int, *stream) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, *stream)``.

    Philox keyed through a SeedSequence: the i-th draw depends only on the key
    and i, so trials can be scheduled in any order or process.
    """
    ss = np.random.SeedSequence([int(seed) & (2**64 - 1), *map(int, stream)])
    return np.random.Generator(np.random.Philox(ss))


def complex_noise(rng: np.random.Generator, sigma2: float, n: int) -> np.ndarray:
    # re and im each carry sigma2/2 so that E|eps|^2 = sigma2
    scale = np.sqrt(sigma2 / 2.0)
    draws = rng.standard_normal((n, 2))
    return scale * (draws[:, 0] + 1j * draws[:, 1])


def add_noise(samples: SampleSet, noise: NoiseModel, *stream: int) -> SampleSet:
    """Return ``z[n] = y[n] + eps[n]``.

    ``eps[n]`` is the n-th complex draw of the stream keyed by
    ``(noise.seed, *stream)``; pass e.g. a trial index as ``stream`` to get
    independent, reproducible realizations.
    """
    if noise.sigma2 == 0:
        return samples
    rng = noise_generator(noise.seed, *stream)
    eps = complex_noise(rng, noise.sigma2, samples.N)
    return samples.replace(samples.values + eps, sigma2=noise.sigma2)


def _quantize_channel(x, q: QuantizerModel):
    step = q.step
    lo = -(2 ** (q.bits - 1))
    hi = 2 ** (q.bits - 1) - 1
    clipped = int(np.count_nonzero(np.abs(x) > q.full_scale))
    codes = np.clip(np.rint(x / step), lo, hi)
    return codes * step, clipped


def quantize(samples: SampleSet, q: QuantizerModel) -> SampleSet:
    """Uniform mid-tread quantization of the I and Q channels separately.

    The ``2**bits`` levels are ``k * step`` for two's-complement codes ``k``,
    with ``step = 2 * full_scale / (2**bits - 1)``. Inputs beyond
    ``+-full_scale`` saturate; the count lands in ``metadata["clipped"]``.
    """
    re, n_re = _quantize_channel(samples.values.real, q)
    im, n_im = _quantize_channel(samples.values.imag, q)
    return samples.replace(
        re + 1j * im,
        clipped=samples.metadata.get("clipped", 0) + n_re + n_im,
        quantizer_bits=q.bits,
        full_scale=q.full_scale,
    )
