"""Free-fermion spectrum of the extended Ising chain at zero longitudinal field.

Single-fermion energies (in units of gamma) are

    Lambda_k = |1 + sum_j (-1)^(j+1) lambda_j exp(2 pi i j k / N)|

on the integer momentum grid returned by :func:`momentum_indices`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, CouplingProfile
from .errors import (
    ConstraintViolationError,
    DegenerateModeError,
    DomainError,
    InvalidChainError,
    UnsupportedRegimeError,
)

DEGENERACY_TOL = 1e-12
MOMENT_SUM_TOL = 1e-9


def momentum_indices(n: int) -> np.ndarray:
    """Integer momenta: ``-N/2 .. (N-2)/2`` for even N, ``(1-N)/2 .. (N-1)/2`` for odd N."""
    if int(n) != n or n < 3:
        raise InvalidChainError(f"chain needs N >= 3 sites, got {n}")
    n = int(n)
    lo = -(n // 2)
    return np.arange(lo, lo + n)


def _phase(m, n: int):
    """cos and sin of ``2 pi m / N`` with m reduced exactly in integers first.

    The reduced index lies in (-N/2, N/2], so ``m = N/2`` maps to exactly pi and
    the result is exactly symmetric under m -> -m.
    """
    m = np.asarray(m, dtype=np.int64)
    r = np.mod(m, n)
    s = np.where(2 * r > n, r - n, r)
    theta = 2.0 * np.pi * s / n
    c = np.cos(theta)
    sn = np.sin(theta)
    half = 2 * s == n
    c = np.where(half, -1.0, c)
    sn = np.where(half | (s == 0), 0.0, sn)
    return c, sn


def dispersion_parts(profile: CouplingProfile, n: int, k) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary brackets ``(A_k, B_k)`` with ``Lambda_k = hypot(A_k, B_k)``."""
    k = np.asarray(k, dtype=np.int64)
    a = np.ones(k.shape)
    b = np.zeros(k.shape)
    for j, lam in enumerate(profile.signed(), start=1):
        c, s = _phase(j * k, n)
        a = a + lam * c
        b = b + lam * s
    return a, b


def lambda_values(profile: CouplingProfile, n: int, k=None) -> np.ndarray:
    """Vectorised Lambda_k; ``k`` defaults to the full momentum grid."""
    if k is None:
        k = momentum_indices(n)
    a, b = dispersion_parts(profile, n, k)
    return np.hypot(a, b)


def _check_momentum(n: int, k: int) -> None:
    ks = momentum_indices(n)
    if int(k) != k or not ks[0] <= k <= ks[-1]:
        raise DomainError(f"k={k} is outside the momentum set {ks[0]}..{ks[-1]} for N={n}")


def lambda_k(spec: ChainSpec, k: int) -> float:
    _check_momentum(spec.n_qubits, k)
    return float(lambda_values(spec.profile, spec.n_qubits, np.array([k]))[0])


@dataclass(frozen=True)
class SpectrumResult:
    k_values: np.ndarray
    lambda_k: np.ndarray
    gamma: float
    e_ground: float
    gap_index: int
    gap_indices: tuple[int, ...]
    gap: float
    degenerate: bool

    @property
    def e_ground_over_gamma(self) -> float:
        return self.e_ground / self.gamma

    @property
    def gap_over_gamma(self) -> float:
        return self.gap / self.gamma


def spectrum(spec: ChainSpec) -> SpectrumResult:
    """Full single-fermion spectrum, ground-state energy and minimum gap.

    The longitudinal field of ``spec`` is ignored. Every minimiser is recorded in
    ``gap_indices``; ``gap_index`` prefers the positive member of a +-k tie.
    """
    n = spec.n_qubits
    ks = momentum_indices(n)
    lam = lambda_values(spec.profile, n, ks)
    lam.setflags(write=False)
    ks.setflags(write=False)
    lmin = float(lam.min())
    tied = ks[np.isclose(lam, lmin, rtol=1e-12, atol=1e-15)]
    gap_index = int(tied.max()) if np.any(tied > 0) else int(tied[np.argmax(np.abs(tied))])
    return SpectrumResult(
        k_values=ks,
        lambda_k=lam,
        gamma=spec.gamma,
        e_ground=-0.5 * spec.gamma * float(np.sum(lam)),
        gap_index=gap_index,
        gap_indices=tuple(int(x) for x in tied),
        gap=spec.gamma * lmin,
        degenerate=lmin <= DEGENERACY_TOL,
    )


def eigenvector_components(spec: ChainSpec, k: int, i: int) -> tuple[float, float]:
    """Components ``(phi_ki, psi_ki)`` of the Bogoliubov mode k on site i (1-based)."""
    n = spec.n_qubits
    _check_momentum(n, k)
    if int(i) != i or not 1 <= i <= n:
        raise DomainError(f"site index {i} outside 1..{n}")
    a, b = dispersion_parts(spec.profile, n, np.array([k]))
    lam = math.hypot(a[0], b[0])
    if lam <= DEGENERACY_TOL:
        raise DegenerateModeError(k)
    phi = _phi(n, k, i)
    psi = -(a[0] * phi + b[0] * _phi(n, -k, i)) / lam
    return phi, psi


def _phi(n: int, k: int, i: int) -> float:
    c, s = _phase(i * k, n)
    return math.sqrt(2.0 / n) * float(s if k > 0 else c)


def phi_matrix(n: int) -> np.ndarray:
    """``phi[k_index, i-1]`` over the momentum grid and all sites."""
    ks = momentum_indices(n)
    sites = np.arange(1, n + 1)
    c, s = _phase(np.outer(ks, sites), n)
    return math.sqrt(2.0 / n) * np.where((ks > 0)[:, None], s, c)


def gap_closed_form(spec: ChainSpec) -> float:
    """Gap at ``k = (N-1)/2`` for up to next-nearest neighbours and odd N.

    Equals ``gamma * Lambda_{(N-1)/2}``. That mode is the minimiser whenever
    ``lambda1 * (1 - lambda2) > 2 * lambda2 * (1 - cos(pi/N))``; outside this
    window the grid minimum sits at k = 0, which :func:`spectrum` reports.
    """
    l1, l2 = _nearest_pair(spec)
    n = spec.n_qubits
    x = math.pi / n
    sq = 1 + l1 * l1 + l2 * l2 - 2 * l1 * (1 - l2) * math.cos(x) - 2 * l2 * math.cos(2 * x)
    return spec.gamma * math.sqrt(max(sq, 0.0))


def gap_closed_form_asymptotic(spec: ChainSpec) -> float:
    """Large-N form of :func:`gap_closed_form`."""
    l1, l2 = _nearest_pair(spec)
    x = math.pi / spec.n_qubits
    return spec.gamma * math.sqrt((l1 + l2 - 1) ** 2 + (l1 - l1 * l2 + 4 * l2) * x * x)


def _nearest_pair(spec: ChainSpec) -> tuple[float, float]:
    prof = spec.profile
    if prof.m_neighbours > 2:
        raise UnsupportedRegimeError("closed-form gap covers at most next-nearest neighbours")
    if spec.n_qubits % 2 == 0:
        raise UnsupportedRegimeError("closed-form gap needs odd N")
    l1, l2 = (tuple(prof.lambdas) + (0.0, 0.0))[:2]
    if l2 >= 1:
        raise UnsupportedRegimeError(
            f"lambda2={l2} >= 1: the minimum moves to k=0 and no closed form is provided"
        )
    return l1, l2


def min_gap_at_criticality(profile: CouplingProfile, gamma: float, n: int) -> float:
    """``(pi gamma / N) * sum_j j lambda_j`` for couplings summing to one."""
    if abs(profile.total - 1.0) > MOMENT_SUM_TOL:
        raise ConstraintViolationError(f"couplings sum to {profile.total}, expected 1")
    if n % 2 == 0:
        raise UnsupportedRegimeError("minimum-gap formula needs odd N")
    if 2 * profile.m_neighbours >= n:
        raise InvalidChainError(f"M={profile.m_neighbours} must be < N/2")
    return math.pi * gamma / n * profile.moment
