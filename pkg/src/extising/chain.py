"""Configuration types for the extended Ising chain.

The chain Hamiltonian has a transverse field ``gamma`` along z, couplings
``J_j = 2 * gamma * lambda_j`` to the j-th neighbour (j = 1..M) and an optional
longitudinal field ``h`` (uniform) or ``h_i`` (per site) along x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .errors import InvalidChainError

CRITICAL_TOL = 1e-12


class ProfileKind(str, Enum):
    EXPLICIT = "explicit"
    LINEAR = "linear"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class CouplingProfile:
    """Dimensionless couplings ``lambda_1 .. lambda_M``.

    Use the ``explicit``, ``linear`` and ``exponential`` constructors; the two
    decaying profiles are normalised so that the couplings sum to one.
    """

    kind: ProfileKind
    lambdas: tuple[float, ...]

    def __post_init__(self):
        lams = tuple(float(x) for x in self.lambdas)
        if not all(math.isfinite(x) for x in lams):
            raise InvalidChainError(f"couplings must be finite, got {lams}")
        object.__setattr__(self, "lambdas", lams)
        object.__setattr__(self, "kind", ProfileKind(self.kind))

    @classmethod
    def explicit(cls, lambdas: Sequence[float] = ()) -> "CouplingProfile":
        return cls(ProfileKind.EXPLICIT, tuple(lambdas))

    @classmethod
    def linear(cls, m: int) -> "CouplingProfile":
        """``lambda_j = c / j`` normalised to unit sum."""
        _check_m(m)
        w = [1.0 / j for j in range(1, m + 1)]
        c = 1.0 / math.fsum(w)
        return cls(ProfileKind.LINEAR, tuple(c * x for x in w))

    @classmethod
    def exponential(cls, m: int) -> "CouplingProfile":
        """``lambda_j = c * exp(-j)`` normalised to unit sum."""
        _check_m(m)
        w = [math.exp(-j) for j in range(1, m + 1)]
        c = 1.0 / math.fsum(w)
        return cls(ProfileKind.EXPONENTIAL, tuple(c * x for x in w))

    @classmethod
    def of_kind(cls, kind: str, m: int) -> "CouplingProfile":
        kind = ProfileKind(kind)
        if kind is ProfileKind.LINEAR:
            return cls.linear(m)
        if kind is ProfileKind.EXPONENTIAL:
            return cls.exponential(m)
        raise InvalidChainError("explicit profiles need their couplings, not just M")

    @property
    def m_neighbours(self) -> int:
        return len(self.lambdas)

    @property
    def total(self) -> float:
        return math.fsum(self.lambdas)

    @property
    def critical(self) -> bool:
        return abs(self.total - 1.0) <= CRITICAL_TOL

    @property
    def moment(self) -> float:
        """First moment ``sum_j j * lambda_j`` of the couplings."""
        return math.fsum(j * lam for j, lam in enumerate(self.lambdas, start=1))

    def signed(self) -> np.ndarray:
        """Couplings with the alternating sign ``(-1)^(j+1)`` applied."""
        lams = np.asarray(self.lambdas, dtype=float)
        signs = np.where(np.arange(1, lams.size + 1) % 2 == 1, 1.0, -1.0)
        return signs * lams


def _check_m(m: int) -> None:
    if int(m) != m or m < 1:
        raise InvalidChainError(f"number of neighbours must be a positive integer, got {m}")


FieldLike = Union[float, Sequence[float]]


@dataclass(frozen=True)
class ChainSpec:
    """A chain of ``n_qubits`` spins; energies are in the units of ``gamma``."""

    n_qubits: int
    gamma: float = 1.0
    profile: CouplingProfile = field(default_factory=CouplingProfile.explicit)
    h_field: FieldLike = 0.0

    def __post_init__(self):
        n = self.n_qubits
        if int(n) != n or n < 3:
            raise InvalidChainError(f"n_qubits must be an integer >= 3, got {n}")
        object.__setattr__(self, "n_qubits", int(n))
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise InvalidChainError(f"gamma must be positive, got {self.gamma}")
        m = self.profile.m_neighbours
        if 2 * m >= n:
            raise InvalidChainError(
                f"M={m} neighbours needs M < N/2 (N={n}) for the boundary terms to be negligible"
            )
        if np.ndim(self.h_field) == 0:
            h = float(self.h_field)
            if not math.isfinite(h):
                raise InvalidChainError("h_field must be finite")
            object.__setattr__(self, "h_field", h)
        else:
            h = tuple(float(x) for x in self.h_field)
            if len(h) != n:
                raise InvalidChainError(f"site field has {len(h)} entries for {n} sites")
            if not all(math.isfinite(x) for x in h):
                raise InvalidChainError("h_field must be finite")
            object.__setattr__(self, "h_field", h)

    @classmethod
    def nearest(cls, n: int, lambda1: float = 0.0, lambda2: float = 0.0, *, gamma: float = 1.0,
                h: FieldLike = 0.0) -> "ChainSpec":
        """Chain with up to next-nearest neighbour couplings; zero trailing couplings are dropped."""
        lams = [lambda1, lambda2]
        while lams and lams[-1] == 0.0:
            lams.pop()
        return cls(n, gamma, CouplingProfile.explicit(lams), h)

    @property
    def uniform_field(self) -> bool:
        return isinstance(self.h_field, float)

    def site_fields(self) -> np.ndarray:
        """Longitudinal field per site as an array of length N."""
        if self.uniform_field:
            return np.full(self.n_qubits, self.h_field)
        return np.asarray(self.h_field, dtype=float)

    @property
    def h_max(self) -> float:
        return float(np.max(np.abs(self.site_fields())))

    def with_field(self, h: FieldLike) -> "ChainSpec":
        return ChainSpec(self.n_qubits, self.gamma, self.profile, h)

    def with_profile(self, profile: CouplingProfile) -> "ChainSpec":
        return ChainSpec(self.n_qubits, self.gamma, profile, self.h_field)
