"""Domain types and fractional-Fourier primitives.

All chirp conventions follow ``xi(t) = exp(1j * cot(theta) / 2 * t**2)``.
Up-chirping multiplies by ``xi``; down-chirping multiplies by ``conj(xi)``.
The sinc convention is the normalized one, ``sinc(x) = sin(pi x) / (pi x)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, UnsupportedBranchError

_SIN_EPS = 1e-12


def _frozen(a, dtype):
    arr = np.array(a, dtype=dtype, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FrftOrder:
    """Rotation angle ``theta`` (radians) of the fractional Fourier transform.

    Only the generic branch ``theta != n*pi`` is representable, since every
    chirp factor needs a finite ``cot(theta)``.
    """

    theta: float

    def __post_init__(self):
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise InvalidArgumentError(f"theta must be finite, got {self.theta!r}")
        if abs(math.sin(theta)) < _SIN_EPS:
            raise UnsupportedBranchError(
                f"theta={theta!r} lies on a delta branch (theta = n*pi)"
            )
        object.__setattr__(self, "theta", theta)

    @property
    def cot(self) -> float:
        # cos(pi/2) evaluates to 6e-17; snap so theta=pi/2 is exactly Fourier
        c = math.cos(self.theta) / math.sin(self.theta)
        return 0.0 if abs(c) < 1e-15 else c

    @property
    def csc(self) -> float:
        return 1.0 / math.sin(self.theta)

    @property
    def normalization(self) -> complex:
        """``sqrt((1 - j cot theta) / (2 pi))``, the fractional-convolution constant."""
        return complex(np.sqrt((1 - 1j * self.cot) / (2 * np.pi)))


def as_order(theta) -> FrftOrder:
    return theta if isinstance(theta, FrftOrder) else FrftOrder(theta)


@dataclass(frozen=True)
class SparseSignal:
    """A stream of K Diracs with complex amplitudes and strictly increasing locations."""

    amplitudes: np.ndarray
    locations: np.ndarray

    def __post_init__(self):
        c = _frozen(self.amplitudes, complex)
        t = _frozen(self.locations, float)
        if c.size != t.size:
            raise InvalidArgumentError("amplitudes and locations differ in length")
        if c.size == 0:
            raise InvalidArgumentError("a sparse signal needs at least one spike")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(c)):
            raise InvalidArgumentError("non-finite spike parameter")
        if np.any(np.diff(t) <= 0):
            raise InvalidArgumentError("spike locations must be strictly increasing")
        if np.any(np.abs(c) == 0):
            raise InvalidArgumentError("spike amplitudes must be nonzero")
        object.__setattr__(self, "amplitudes", c)
        object.__setattr__(self, "locations", t)

    @classmethod
    def from_unsorted(cls, amplitudes, locations) -> "SparseSignal":
        t = np.asarray(locations, dtype=float).reshape(-1)
        order = np.argsort(t, kind="stable")
        return cls(np.asarray(amplitudes, dtype=complex).reshape(-1)[order], t[order])

    @property
    def K(self) -> int:
        return int(self.locations.size)


@dataclass(frozen=True)
class Kernel:
    """Sampling kernel ``psi_M(t) = sum_m p_m sinc(t/T - m)`` with sample period ``T``."""

    weights: np.ndarray
    T: float

    def __post_init__(self):
        p = _frozen(self.weights, float)
        T = float(self.T)
        if p.size < 1 or not np.any(p != 0):
            raise InvalidArgumentError("kernel needs at least one nonzero weight")
        if not (T > 0 and math.isfinite(T)):
            raise InvalidArgumentError(f"sample period must be positive, got {self.T!r}")
        object.__setattr__(self, "weights", p)
        object.__setattr__(self, "T", T)

    @classmethod
    def sinc(cls, T: float) -> "Kernel":
        return cls([1.0], T)

    @property
    def M(self) -> int:
        return int(self.weights.size)

    def psi(self, x):
        """``psi_M`` evaluated at normalized time ``x = t/T``."""
        x = np.asarray(x, dtype=float)
        m = np.arange(self.M)
        return np.sum(self.weights * sinc(x[..., None] - m), axis=-1)

    def dpsi(self, x):
        """Derivative of :meth:`psi` with respect to its normalized argument."""
        x = np.asarray(x, dtype=float)
        m = np.arange(self.M)
        return np.sum(self.weights * sinc_derivative(x[..., None] - m), axis=-1)


@dataclass(frozen=True)
class SampleSet:
    """Uniform complex samples ``y[n] = y(nT)``, n = 0..N-1."""

    values: np.ndarray
    T: float
    theta: FrftOrder
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        y = _frozen(self.values, complex)
        T = float(self.T)
        if y.size < 1:
            raise InvalidArgumentError("a sample set needs at least one sample")
        if not (T > 0 and math.isfinite(T)):
            raise InvalidArgumentError(f"sample period must be positive, got {self.T!r}")
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "theta", as_order(self.theta))

    @property
    def N(self) -> int:
        return int(self.values.size)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.N) * self.T

    def replace(self, values, **metadata) -> "SampleSet":
        return SampleSet(values, self.T, self.theta, {**self.metadata, **metadata})


def sinc(x):
    """Normalized sinc; ``sinc(0) == 1`` and ``sinc(k) == 0`` for nonzero integers."""
    return np.sinc(x)


def sinc_derivative(x):
    """d/dx of ``sin(pi x) / (pi x)``."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    out = (np.cos(np.pi * xs) - np.sinc(xs)) / xs
    # Taylor: -pi^2 x / 3 + pi^4 x^3 / 30
    series = -(np.pi**2) * x / 3 + np.pi**4 * x**3 / 30
    return np.where(small, series, out)


def chirp_factor(theta, t):
    """``exp(1j * cot(theta) / 2 * t**2)``; scalar in, scalar out."""
    theta = as_order(theta)
    t = np.asarray(t, dtype=float)
    out = np.exp(0.5j * theta.cot * t**2)
    return complex(out) if out.ndim == 0 else out


def _check_aligned(f, times):
    f = np.asarray(f, dtype=complex)
    times = np.asarray(times, dtype=float)
    if f.shape != times.shape:
        raise InvalidArgumentError(
            f"values and times differ in shape: {f.shape} vs {times.shape}"
        )
    return f, times


def chirp_up(f, theta, times):
    f, times = _check_aligned(f, times)
    return f * chirp_factor(theta, times)


def chirp_down(f, theta, times):
    f, times = _check_aligned(f, times)
    return f * np.conj(chirp_factor(theta, times))


def kernel_eval(theta, t, omega):
    """FrFT transform kernel on the generic branch, including ``C_theta``.

    ``C_theta * exp(-j((t^2 + w^2)/2 cot(theta) - w t csc(theta)))``. The
    normalization constant is included here only; convolution and synthesis
    drop it.
    """
    if not isinstance(theta, FrftOrder):
        theta = FrftOrder(theta)
    t = np.asarray(t, dtype=float)
    omega = np.asarray(omega, dtype=float)
    phase = (t**2 + omega**2) / 2 * theta.cot - omega * t * theta.csc
    out = theta.normalization * np.exp(-1j * phase)
    return complex(out) if out.ndim == 0 else out


def frac_convolve_on_grid(f, g, theta, grid_step, f_start=0.0, g_start=0.0):
    """Fractional convolution of two functions sampled on a common grid step.

    ``f`` lives on ``f_start + i*grid_step`` and ``g`` on ``g_start + j*grid_step``.
    The result is the full discrete convolution (length ``len(f) + len(g) - 1``)
    on the grid starting at ``f_start + g_start``. The integral is replaced by a
    Riemann sum, so the output is scaled by ``grid_step``; ``C_theta`` is omitted.
    """
    f = np.asarray(f, dtype=complex).reshape(-1)
    g = np.asarray(g, dtype=complex).reshape(-1)
    if f.size == 0 or g.size == 0:
        raise InvalidArgumentError("cannot convolve an empty sequence")
    if not grid_step > 0:
        raise InvalidArgumentError("grid_step must be positive")
    theta = as_order(theta)
    tf = f_start + grid_step * np.arange(f.size)
    tg = g_start + grid_step * np.arange(g.size)
    th = f_start + g_start + grid_step * np.arange(f.size + g.size - 1)
    h = np.convolve(chirp_up(f, theta, tf), chirp_up(g, theta, tg)) * grid_step
    return chirp_down(h, theta, th)


def frft_interpolate(samples: SampleSet, t):
    """Reconstruct an FrFT-bandlimited function from its uniform samples.

    Truncated form of the chirp-modulated Shannon series; only the ``N``
    available samples contribute, so accuracy degrades near the ends of the
    window (the missing tail decays like 1/distance).
    """
    t = np.asarray(t, dtype=float)
    n = np.arange(samples.N)
    weighted = samples.values * chirp_factor(samples.theta, n * samples.T)
    kernel = sinc(t[..., None] / samples.T - n)
    out = np.conj(chirp_factor(samples.theta, t)) * (kernel @ weighted)
    return complex(out) if out.ndim == 0 else out
