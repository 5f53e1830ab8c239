"""Shared parameter types and exceptions.

Units throughout: hbar = c = 1, so masses, cutoffs and energies share one
unit and the fine-structure constant is dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InfeasibleError(ArithmeticError):
    """The inequality system has no solution for the given parameters.

    Kept distinct from :class:`DomainError`: the inputs are legal, the
    constraints just cannot be met.
    """


class PreconditionError(DomainError):
    """A hypothesis required by a bound (normalization, anticommutation) fails."""


class ResourceError(MemoryError):
    """A requested discretization exceeds the configured size cap."""


@dataclass(frozen=True)
class PhysicalParams:
    alpha: float
    Z: float
    m: float = 1.0
    Lambda: float = 1.0
    N: int = 1
    K: int = 1

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not (self.Z >= 0 and math.isfinite(self.Z)):
            raise DomainError(f"Z must be nonnegative, got {self.Z}")
        # m = 0 is the massless limit used with epsilon = 0.
        if not (self.m >= 0 and math.isfinite(self.m)):
            raise DomainError(f"m must be nonnegative, got {self.m}")
        if not (self.Lambda > 0 and math.isfinite(self.Lambda)):
            raise DomainError(f"Lambda must be positive, got {self.Lambda}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be an integer >= 1, got {self.N}")
        if int(self.K) != self.K or self.K < 1:
            raise DomainError(f"K must be an integer >= 1, got {self.K}")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class EnergyBoundReport:
    """The four additive contributions to the energy lower bound.

    ``total`` is always the literal sum of the four terms.
    """

    kappa: float
    epsilon: float
    C2: float
    C3: float
    term_mass: float
    term_c3: float
    term_coulomb: float
    term_field: float
    N: int

    @property
    def total(self) -> float:
        return self.term_mass + self.term_c3 + self.term_coulomb + self.term_field

    @property
    def total_per_electron(self) -> float:
        return self.total / self.N

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("N")
        d["total"] = self.total
        d["total_per_electron"] = self.total_per_electron
        return d


def reduce_charges(charges: Sequence[float], Zcap: float) -> tuple[float, int]:
    """Replace per-nucleus charges by the common cap.

    The energy is concave in each charge separately, so a lower bound only
    needs the extreme points; every nucleus is kept at ``Zcap``.  Returns
    ``(Z, K)``.
    """
    if not (Zcap >= 0 and math.isfinite(Zcap)):
        raise DomainError(f"charge cap must be nonnegative, got {Zcap}")
    charges = list(charges)
    if not charges:
        raise DomainError("at least one nucleus is required")
    for z in charges:
        if not (0 <= z <= Zcap):
            raise DomainError(f"charge {z} outside [0, {Zcap}]")
    return float(Zcap), len(charges)
