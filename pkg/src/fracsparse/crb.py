"""Fisher information and Cramér-Rao bounds for FrFT sparse sampling.

Parameters are ordered ``[t_0..t_{K-1} | c_0..c_{K-1}]``. The information
matrix is ``J = G^H G / sigma2`` with ``G[n, :]`` the partial derivatives of
the noiseless sample ``z[n]``. Amplitudes are treated as real parameters.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, PoleError
from .frft import Kernel, SparseSignal, as_order, sinc, sinc_derivative


@dataclass(frozen=True)
class FimMatrix:
    entries: np.ndarray
    sigma2: float

    @property
    def K(self) -> int:
        return self.entries.shape[0] // 2

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        J = self.entries
        scale = max(np.max(np.abs(J)), 1.0)
        return bool(np.max(np.abs(J - J.conj().T)) <= tol * scale)

    def eigvalsh(self) -> np.ndarray:
        J = self.entries
        return np.linalg.eigvalsh(0.5 * (J + J.conj().T))

    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.entries)

    def report(self, psnr=None) -> "CrbReport":
        return CrbReport.from_covariance(self.inverse(), psnr)


@dataclass(frozen=True)
class CrbReport:
    covariance: np.ndarray
    var_t: np.ndarray
    var_c: np.ndarray
    psnr: float | None = None

    @classmethod
    def from_covariance(cls, cov, psnr=None) -> "CrbReport":
        cov = np.asarray(cov)
        K = cov.shape[0] // 2
        diag = np.real(np.diag(cov))
        return cls(cov, diag[:K].copy(), diag[K:].copy(), psnr)


def _phase(n, t_k, kernel: Kernel, theta):
    # exp(-j cot/2 ((nT)^2 - t_k^2))
    return np.exp(-0.5j * theta.cot * ((n * kernel.T) ** 2 - t_k**2))


def dz_dc(k, n, signal: SparseSignal, kernel: Kernel, theta):
    """Partial of the noiseless sample ``z[n]`` with respect to amplitude ``c_k``."""
    theta = as_order(theta)
    n = np.asarray(n, dtype=float)
    t_k = signal.locations[k]
    return kernel.psi(n - t_k / kernel.T) * _phase(n, t_k, kernel, theta)


def dz_dt(k, n, signal: SparseSignal, kernel: Kernel, theta):
    """Partial of ``z[n]`` with respect to location ``t_k``.

    Written as ``c_k (-psi'(x)/T + j t_k cot(theta) psi(x)) * phase`` with
    ``x = n - t_k/T``; the product form stays finite at zeros of ``psi``.
    """
    theta = as_order(theta)
    n = np.asarray(n, dtype=float)
    t_k = signal.locations[k]
    x = n - t_k / kernel.T
    phase = _phase(n, t_k, kernel, theta)
    c_k = signal.amplitudes[k]
    return c_k * (-kernel.dpsi(x) / kernel.T + 1j * t_k * theta.cot * kernel.psi(x)) * phase


def jacobian(signal: SparseSignal, kernel: Kernel, theta, N: int) -> np.ndarray:
    """``G`` with shape ``(N, 2K)``: location columns then amplitude columns."""
    n = np.arange(N)
    cols = [dz_dt(k, n, signal, kernel, theta) for k in range(signal.K)]
    cols += [dz_dc(k, n, signal, kernel, theta) for k in range(signal.K)]
    return np.stack(cols, axis=1)


def fim_numeric(signal: SparseSignal, kernel: Kernel, theta, N: int, sigma2: float) -> FimMatrix:
    if not sigma2 > 0:
        raise InvalidArgumentError("sigma2 must be positive")
    G = jacobian(signal, kernel, theta, N)
    return FimMatrix(G.conj().T @ G / sigma2, float(sigma2))


def crb_numeric(signal: SparseSignal, kernel: Kernel, theta, N: int, sigma2: float) -> CrbReport:
    psnr = float(np.max(np.abs(signal.amplitudes)) ** 2 / sigma2)
    return fim_numeric(signal, kernel, theta, N, sigma2).report(psnr)


_PSI = {"sinc": sinc, "sinc-derivative": sinc_derivative}


def phi_sum(psi1_id: str, psi2_id: str, x: float, N: int) -> float:
    """``sum_n psi1(n - x) psi2(n - x)`` over ``n`` in ``[ceil(x) - N, floor(x) + N]``.

    Truncation is symmetric about ``x`` so that edge effects do not bias the
    comparison with the infinite-lattice limits.
    """
    try:
        f1, f2 = _PSI[psi1_id], _PSI[psi2_id]
    except KeyError as exc:
        raise InvalidArgumentError(f"unknown psi id {exc.args[0]!r}; use one of {sorted(_PSI)}")
    if N < 1:
        raise InvalidArgumentError("truncation half-width must be >= 1")
    n = np.arange(np.ceil(x) - N, np.floor(x) + N + 1)
    u = n - x
    terms = f1(u) * f2(u)
    return float(np.sum(terms[np.argsort(np.abs(terms))]))


def s_sum_closed(m: int, xbar: float) -> float:
    """Closed form of ``sum_{n in Z} (xbar - n)^-m`` for m = 2, 3, 4."""
    d = abs(xbar - round(xbar))
    if d < 1e-9:
        raise PoleError(f"xbar={xbar!r} is within 1e-9 of an integer")
    s = np.sin(np.pi * xbar)
    csc2 = 1.0 / s**2
    if m == 2:
        return float(np.pi**2 * csc2)
    if m == 3:
        return float(np.pi**3 * np.cos(np.pi * xbar) / s * csc2)
    if m == 4:
        return float(np.pi**4 / 3 * (np.cos(2 * np.pi * xbar) + 2) * csc2**2)
    raise InvalidArgumentError(f"closed form available for m in (2, 3, 4), got {m!r}")


def phi_infinity(psi1_id: str, psi2_id: str, xbar: float) -> float:
    """Infinite-lattice limits assembled from the ``S(m)`` closed forms."""
    s, c = np.sin(np.pi * xbar), np.cos(np.pi * xbar)
    ids = tuple(sorted((psi1_id, psi2_id)))
    if ids == ("sinc", "sinc"):
        return float(s**2 / np.pi**2 * s_sum_closed(2, xbar))
    if ids == ("sinc-derivative", "sinc-derivative"):
        return float(
            (s / np.pi) ** 2 * s_sum_closed(4, xbar)
            + c**2 * s_sum_closed(2, xbar)
            - np.sin(2 * np.pi * xbar) / np.pi * s_sum_closed(3, xbar)
        )
    if ids == ("sinc", "sinc-derivative"):
        # arguments are n - xbar, hence the sign flips relative to the (xbar - n) lattice sums
        return float(
            -np.sin(2 * np.pi * xbar) / (2 * np.pi) * s_sum_closed(2, xbar)
            + s**2 / np.pi**2 * s_sum_closed(3, xbar)
        )
    raise InvalidArgumentError(f"unknown psi ids {psi1_id!r}, {psi2_id!r}")


def _k1_entries(c0, t0, T, theta):
    theta = as_order(theta)
    c0 = abs(c0)
    ct = c0 * theta.cot * t0
    J1 = c0**2 * (theta.cot**2 * t0**2 + np.pi**2 / (3 * T**2))
    return np.array([[J1, -1j * ct], [1j * ct, 1.0]], dtype=complex)


def fim_analytic_k1(c0, t0, T, theta, sigma2) -> FimMatrix:
    """Asymptotic (N -> infinity) information matrix for one spike, sinc kernel."""
    if not sigma2 > 0:
        raise InvalidArgumentError("sigma2 must be positive")
    return FimMatrix(_k1_entries(c0, t0, T, theta) / sigma2, float(sigma2))


def crb_analytic_k1(c0, t0, T, theta, sigma2) -> CrbReport:
    """Single-spike bounds via the adjugate of the 2x2 information matrix.

    ``var(t0) >= 3 T^2 / (pi^2 PSNR)`` and
    ``var(c0) >= 3 c0^2 T^2 / (pi^2 PSNR) * ((t0 cot theta)^2 + pi^2 / (3 T^2))``
    with ``PSNR = c0^2 / sigma2``.
    """
    if not sigma2 > 0:
        raise InvalidArgumentError("sigma2 must be positive")
    J = _k1_entries(c0, t0, T, theta)
    det = abs(c0) ** 2 * np.pi**2 / (3 * T**2)
    adj = np.array([[J[1, 1], -J[0, 1]], [-J[1, 0], J[0, 0]]])
    return CrbReport.from_covariance(sigma2 / det * adj, abs(c0) ** 2 / sigma2)
