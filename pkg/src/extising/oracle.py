"""Brute-force exact diagonalisation on the full 2^N spin basis.

Convention: spin-1/2 operators ``S = sigma / 2`` on field terms and coupling
endpoints, a full Pauli ``sigma^z`` in the middle of the three-site term::

    H = gamma sum S^z_i + J1 sum S^x_i S^x_{i+1}
        + J2 sum S^x_i sigma^z_{i+1} S^x_{i+2} + sum h_i S^x_i,   J_j = 2 gamma lambda_j

With no couplings the gap is exactly gamma, matching Lambda_k = 1. Bit i of
a basis index is site i+1; bit value 0 is spin up along z.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .chain import ChainSpec
from .errors import CapacityError, DomainError, SolverError, UnsupportedInteractionError
from .spectrum import spectrum

MAX_QUBITS = 16
CONVENTION_TAG = "spin-half:gamma*Sz+J1*SxSx+J2*Sx.sigz.Sx+h*Sx"
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class DenseHamiltonian:
    dimension: int
    matrix: np.ndarray
    convention_tag: str
    n_qubits: int
    parity_conserving: bool  # commutes with prod_i sigma^z_i (no longitudinal field)


def build_hamiltonian(spec: ChainSpec, boundary: str = "periodic") -> DenseHamiltonian:
    n = spec.n_qubits
    if n > MAX_QUBITS:
        raise CapacityError(f"dense oracle is capped at N={MAX_QUBITS}, got {n}")
    if spec.profile.m_neighbours > 2:
        raise UnsupportedInteractionError("oracle supports at most next-nearest neighbour couplings")
    if boundary not in ("periodic", "open"):
        raise DomainError(f"boundary must be 'periodic' or 'open', got {boundary!r}")
    g = spec.gamma
    lams = tuple(spec.profile.lambdas) + (0.0, 0.0)
    j1, j2 = 2 * g * lams[0], 2 * g * lams[1]
    hs = spec.site_fields()

    dim = 1 << n
    states = np.arange(dim, dtype=np.int64)
    bits = [(states >> i) & 1 for i in range(n)]
    h = np.zeros((dim, dim))
    h[states, states] = 0.5 * g * sum(1 - 2 * b for b in bits)

    def bond(i, span):
        if boundary == "open" and i + span >= n:
            return None
        return [(i + d) % n for d in range(span + 1)]

    for i in range(n):
        if j1:
            sites = bond(i, 1)
            if sites:
                a, b = sites
                h[states ^ (1 << a) ^ (1 << b), states] += 0.25 * j1
        if j2:
            sites = bond(i, 2)
            if sites:
                a, mid, c = sites
                h[states ^ (1 << a) ^ (1 << c), states] += 0.25 * j2 * (1 - 2 * bits[mid])
        if hs[i]:
            h[states ^ (1 << i), states] += 0.5 * hs[i]
    return DenseHamiltonian(dim, h, CONVENTION_TAG, n, not np.any(hs))


@dataclass(frozen=True)
class OracleSpectrum:
    eigenvalues: np.ndarray
    gap: float
    parity_even_in_h: bool | None = None
    max_residual: float = 0.0


def _lowest(block: np.ndarray, count: int) -> tuple[np.ndarray, np.ndarray]:
    count = min(count, block.shape[0])
    return scipy.linalg.eigh(block, subset_by_index=[0, count - 1], check_finite=False)


def oracle_spectrum(ham: DenseHamiltonian, n_levels: int = 8) -> OracleSpectrum:
    """Lowest ``n_levels`` eigenvalues from a dense symmetric eigensolver.

    Parity-conserving Hamiltonians are split into their two z-parity blocks
    before solving; the merged list is identical to the full solve.
    """
    if not 1 <= n_levels <= ham.dimension:
        raise DomainError(f"n_levels must be in 1..{ham.dimension}")
    mat = ham.matrix
    norm = float(np.max(np.sum(np.abs(mat), axis=1))) or 1.0
    if ham.parity_conserving:
        parity = np.zeros(ham.dimension, dtype=np.int64)
        states = np.arange(ham.dimension)
        for i in range(ham.n_qubits):
            parity ^= (states >> i) & 1
        blocks = [np.flatnonzero(parity == p) for p in (0, 1)]
    else:
        blocks = [np.arange(ham.dimension)]
    vals, residuals = [], []
    for idx in blocks:
        sub = mat[np.ix_(idx, idx)] if len(blocks) > 1 else mat
        w, v = _lowest(sub, n_levels)
        res = np.linalg.norm(sub @ v - v * w, axis=0)
        vals.append(w)
        residuals.append(res)
    w = np.concatenate(vals)
    res = np.concatenate(residuals)
    worst = float(res.max())
    if worst > RESIDUAL_TOL * norm:
        raise SolverError(f"eigenpair residual {worst:.3e} exceeds {RESIDUAL_TOL:g}*||H||", worst)
    w = np.sort(w)[:n_levels]
    gap = float(w[1] - w[0]) if w.size > 1 else 0.0
    return OracleSpectrum(w, gap, None, worst)


def solve(spec: ChainSpec, n_levels: int = 8, boundary: str = "periodic",
          check_h_parity: bool = False) -> OracleSpectrum:
    """Build and diagonalise; optionally compare with the spectrum at ``-h``."""
    res = oracle_spectrum(build_hamiltonian(spec, boundary), n_levels)
    if not check_h_parity:
        return res
    flipped = spec.with_field(-spec.site_fields() if not spec.uniform_field else -spec.h_field)
    other = oracle_spectrum(build_hamiltonian(flipped, boundary), n_levels)
    even = bool(np.allclose(res.eigenvalues, other.eigenvalues, rtol=0, atol=1e-12))
    return OracleSpectrum(res.eigenvalues, res.gap, even, res.max_residual)


@dataclass(frozen=True)
class OracleComparison:
    n: int
    gap_oracle: float
    gap_analytic: float
    discrepancy: float
    scaled_discrepancy: float  # N * discrepancy / gamma


def compare_to_analytic(spec: ChainSpec, boundary: str = "periodic") -> OracleComparison:
    """Oracle gap versus ``gamma * min_k Lambda_k`` of the zero-field theory."""
    ora = solve(spec, n_levels=2, boundary=boundary)
    ana = spectrum(spec).gap
    d = abs(ora.gap - ana)
    return OracleComparison(spec.n_qubits, ora.gap, ana, d, spec.n_qubits * d / spec.gamma)


def fit_gap_exponent(spec: ChainSpec, h_values: Sequence[float],
                     boundary: str = "periodic") -> float:
    """Log-log slope of ``|gap(h) - gap(0)|`` against h for a uniform field."""
    h_values = [float(h) for h in h_values]
    if len(h_values) < 2 or any(h <= 0 for h in h_values):
        raise DomainError("need at least two positive field values")
    g0 = solve(spec.with_field(0.0), 2, boundary).gap
    dg = [abs(solve(spec.with_field(h), 2, boundary).gap - g0) for h in h_values]
    if min(dg) == 0:
        raise DomainError("gap does not respond to the field; exponent undefined")
    slope, _ = np.polyfit(np.log(h_values), np.log(dg), 1)
    return float(slope)


def ground_energy_shift(spec: ChainSpec, boundary: str = "periodic") -> float:
    """``E_0(h) - E_0(0)`` from the oracle."""
    e_h = solve(spec, 1, boundary).eigenvalues[0]
    e_0 = solve(spec.with_field(0.0), 1, boundary).eigenvalues[0]
    return float(e_h - e_0)


def fit_quadratic_coefficient(spec: ChainSpec, h_values: Sequence[float],
                              boundary: str = "periodic") -> float:
    """Least-squares c in ``E_0(h) - E_0(0) = c h^2`` over the given fields."""
    h = np.asarray(h_values, dtype=float)
    shifts = np.array([ground_energy_shift(spec.with_field(float(x)), boundary) for x in h])
    return float(np.dot(h ** 2, shifts) / np.dot(h ** 2, h ** 2))

