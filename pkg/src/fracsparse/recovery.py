"""Time-domain annihilation recovery of Dirac streams from FrFT low-pass samples.

Pipeline::

    y[n] --demodulate/de-alternate--> ycirc[n]
         --Delta^{KM}(n^k ycirc[n])--> D          (N-KM) x (KM+1)
         --null vector-->              q          monic, real
         --companion roots-->          {m + t_k/T}
         --least squares-->            c_k
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    DegenerateConfigurationError,
    InsufficientSamplesError,
    InvalidArgumentError,
    NoisyRootsError,
)
from .frft import Kernel, SampleSet, SparseSignal, as_order, chirp_factor


class IllPosedWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class AnnihilationConfig:
    K: int
    M: int = 1
    rank_tol: float = 1e-8
    imag_tol: float = 1e-3
    integer_guard: float = 1e-6
    chain_tol: float = 0.05
    noiseless: bool = False

    def __post_init__(self):
        if self.K < 1 or self.M < 1:
            raise InvalidArgumentError("K and M must be positive")

    @property
    def KM(self) -> int:
        return self.K * self.M

    @property
    def min_samples(self) -> int:
        return 2 * self.KM


@dataclass(frozen=True)
class RecoveryResult:
    amplitudes: np.ndarray
    locations: np.ndarray
    q: np.ndarray
    roots: np.ndarray
    residual_norm: float
    singular_values: np.ndarray
    imag_residue: float = 0.0
    warnings: tuple = field(default=())

    @property
    def K(self) -> int:
        return int(self.locations.size)

    def as_signal(self) -> SparseSignal:
        return SparseSignal(self.amplitudes, self.locations)


class NullVector(NamedTuple):
    q: np.ndarray
    singular_values: np.ndarray
    imag_residue: float


def build_ycirc(samples: SampleSet) -> np.ndarray:
    """``pi * y[n] * xi(nT) / (-1)**(n+1)``.

    For the synthetic model this equals
    ``sum_k cb_k sum_m (-1)**m p_m / (n - m - t_k/T)``, a rational function of n.
    """
    n = np.arange(samples.N)
    sign = np.where(n % 2 == 0, -1.0, 1.0)  # (-1)**(n+1)
    return np.pi * samples.values * chirp_factor(samples.theta, n * samples.T) * sign


def finite_diff(seq, L: int) -> np.ndarray:
    """Forward difference of order ``L``; output is ``L`` samples shorter."""
    seq = np.asarray(seq)
    if L < 0:
        raise InvalidArgumentError("difference order must be >= 0")
    if seq.shape[0] < L + 1:
        raise InvalidArgumentError(
            f"need at least {L + 1} samples for a difference of order {L}, got {seq.shape[0]}"
        )
    return np.diff(seq, n=L, axis=0)


def build_D(ycirc, K: int, M: int, origin: float = 0.0, scale: float = 1.0):
    """Annihilation matrix ``D[n, k] = Delta^{KM}(u_n^k ycirc[n])`` with column scaling.

    ``u_n = (n - origin) / scale``; the defaults give the plain monomials
    ``n^k``. Any affine change of variable leaves the annihilation property
    intact, and a centered basis keeps the columns far better conditioned.

    Returns ``(D_scaled, scales)`` where ``D = D_scaled * scales`` column-wise.
    """
    ycirc = np.asarray(ycirc, dtype=complex)
    KM = K * M
    N = ycirc.size
    if N < KM + 1:
        raise InsufficientSamplesError(f"need at least {KM + 1} samples to build D, got {N}")
    u = (np.arange(N, dtype=float) - origin) / scale
    powers = u[:, None] ** np.arange(KM + 1)
    D = finite_diff(powers * ycirc[:, None], KM)
    scales = np.max(np.abs(D), axis=0)
    scales[scales == 0] = 1.0
    return D / scales, scales


def _smallest_right_vector(A):
    _, s, vh = np.linalg.svd(A)
    return np.conj(vh[-1]), s


def nullspace_q(D, scales=None, rank_tol: float = 1e-8, noiseless: bool = False) -> NullVector:
    """Real, monic annihilating-polynomial coefficients (ascending powers).

    The coefficients of the annihilating polynomial are real, so ``Dq = 0``
    splits into ``Re(D) q = 0`` and ``Im(D) q = 0``; q is the smallest right
    singular vector of the stacked real matrix, unscaled and made monic. The
    plain complex null vector is also computed; the relative size of its
    imaginary part (after monic normalization) is reported as ``imag_residue``.
    """
    D = np.asarray(D)
    rows, cols = D.shape
    KM = cols - 1
    if rows < KM:
        raise InsufficientSamplesError(
            f"annihilation needs N >= 2KM: D has {rows} rows for KM={KM}"
        )
    scales = np.ones(cols) if scales is None else np.asarray(scales, dtype=float)

    v, s = _smallest_right_vector(np.vstack([D.real, D.imag]))
    v = v.real / scales
    if v[-1] == 0:
        raise DegenerateConfigurationError("null vector has zero leading coefficient")
    q = v / v[-1]

    vc, _ = _smallest_right_vector(D)
    vc = vc / scales
    imag_residue = float(np.max(np.abs((vc / vc[-1]).imag)) / np.max(np.abs(q))) if vc[-1] != 0 else 1.0

    smax = s[0] if s[0] > 0 else 1.0
    if noiseless:
        if s[-1] / smax > rank_tol:
            warnings.warn(
                f"D is not rank deficient (s_min/s_max = {s[-1] / smax:.3g})", IllPosedWarning
            )
        if cols > 1 and s[-2] / smax <= rank_tol:
            warnings.warn("null space of D has dimension > 1", IllPosedWarning)
    return NullVector(q, s, imag_residue)


def polynomial_roots(q) -> np.ndarray:
    """Eigenvalues of the companion matrix of ``sum_k q[k] z^k``."""
    q = np.asarray(q, dtype=float)
    return np.linalg.eigvals(P.polycompanion(q))


def _chains(real_roots, K, M, chain_tol):
    remaining = sorted(real_roots)
    starts = []
    while remaining:
        start = remaining.pop(0)
        chain = [start]
        for i in range(1, M):
            if not remaining:
                break
            dist = [abs(r - (start + i)) for r in remaining]
            j = int(np.argmin(dist))
            if dist[j] > chain_tol:
                break
            chain.append(remaining.pop(j))
        if len(chain) != M:
            raise DegenerateConfigurationError(
                f"could not form a chain of {M} unit-spaced roots starting at {start:.6g}"
            )
        starts.append(np.mean(np.asarray(chain) - np.arange(M)))
    if len(starts) != K:
        raise DegenerateConfigurationError(f"found {len(starts)} root chains, expected {K}")
    return np.asarray(starts)


def roots_to_locations(
    q, K, M, T, imag_tol=1e-3, integer_guard=1e-6, chain_tol=0.05, origin=0.0, scale=1.0
):
    """Spike locations (seconds, ascending) from the annihilating polynomial.

    The roots, mapped back through ``n = origin + scale * u``, are
    ``m + t_k/T`` for m = 0..M-1. For ``M > 1`` the sorted real parts are
    grouped into K chains of unit-spaced roots and each chain collapses to the
    mean of ``root_i - i``.
    """
    roots = origin + scale * polynomial_roots(q)
    if roots.size != K * M:
        raise DegenerateConfigurationError(f"polynomial has degree {roots.size}, expected {K * M}")
    bad = np.abs(roots.imag) > imag_tol
    if np.any(bad):
        worst = roots[bad][np.argmax(np.abs(roots[bad].imag))]
        raise NoisyRootsError(f"root {worst:.6g} has imaginary part beyond {imag_tol}", worst)
    real = roots.real
    tbar = np.sort(real) if M == 1 else np.sort(_chains(real, K, M, chain_tol))
    if np.any(np.abs(tbar - np.rint(tbar)) < integer_guard):
        warnings.warn(
            "a recovered location sits on the sampling grid, where sin(pi t/T) = 0",
            IllPosedWarning,
            stacklevel=2,
        )
    return T * tbar


def amplitude_system(N, locations, kernel: Kernel, theta):
    """``A[n, k] = xi(t_k) psi_M(n - t_k/T)``, the design matrix for chirp-modulated samples."""
    theta = as_order(theta)
    locations = np.asarray(locations, dtype=float)
    n = np.arange(N)
    x = n[:, None] - locations / kernel.T
    return chirp_factor(theta, locations) * kernel.psi(x)


def estimate_amplitudes(samples: SampleSet, locations, kernel: Kernel, theta=None):
    """Least-squares amplitudes given spike locations; returns ``(c, residual_norm)``."""
    theta = samples.theta if theta is None else as_order(theta)
    locations = np.asarray(locations, dtype=float)
    if locations.size > samples.N:
        raise InsufficientSamplesError("more spikes than samples")
    A = amplitude_system(samples.N, locations, kernel, theta)
    rhs = samples.values * chirp_factor(theta, samples.times)
    c, _, rank, _ = np.linalg.lstsq(A, rhs, rcond=None)
    if rank < locations.size:
        raise DegenerateConfigurationError(
            "amplitude system is rank deficient (coincident spike locations?)"
        )
    return c, float(np.linalg.norm(A @ c - rhs))


def recover(samples: SampleSet, kernel: Kernel, config: AnnihilationConfig) -> RecoveryResult:
    """Recover K spikes from ``samples``; guaranteed for noiseless data when N >= 2KM."""
    if kernel.M != config.M:
        raise InvalidArgumentError(f"kernel has M={kernel.M}, config says M={config.M}")
    if not np.isclose(kernel.T, samples.T, rtol=1e-12, atol=0):
        raise InvalidArgumentError(f"kernel T={kernel.T} differs from sample T={samples.T}")
    if samples.N < config.min_samples:
        raise InsufficientSamplesError(
            f"N={samples.N} samples < 2KM={config.min_samples}; recovery is not identifiable"
        )
    origin = (samples.N - 1) / 2
    scale = max(origin, 1.0)
    D, scales = build_D(build_ycirc(samples), config.K, config.M, origin, scale)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IllPosedWarning)
        null = nullspace_q(D, scales, config.rank_tol, config.noiseless)
        locations = roots_to_locations(
            null.q,
            config.K,
            config.M,
            kernel.T,
            config.imag_tol,
            config.integer_guard,
            config.chain_tol,
            origin,
            scale,
        )
    notes = tuple(str(w.message) for w in caught)
    for w in caught:
        warnings.warn(w.message, w.category, stacklevel=2)
    amplitudes, residual = estimate_amplitudes(samples, locations, kernel)
    roots = origin + scale * polynomial_roots(null.q)
    return RecoveryResult(
        amplitudes=amplitudes,
        locations=locations,
        q=P.polyfromroots(roots).real,
        roots=roots,
        residual_norm=residual,
        singular_values=null.singular_values,
        imag_residue=null.imag_residue,
        warnings=notes,
    )
