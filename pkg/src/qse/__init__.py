"""Energy lower bounds for relativistic electrons coupled to a quantized field.

Submodules
----------
certificate
    Constant system, maximal nuclear charge, phase scans.
geometry, localization
    Coulomb single-particle bound and kinetic localization functions.
fock, field_bounds
    Discrete photon modes, truncated Fock space, field-energy bounds.
spectral, lattice
    Trace inequalities, chiral symmetry, Dirac square identity, Lieb-Thirring.
atlas
    Stability verdicts per model variant.
suites, cli
    Seeded verification suites and the ``qse`` command.
"""

from .core import (
    DomainError,
    EnergyBoundReport,
    InfeasibleError,
    PhysicalParams,
    PreconditionError,
    ResourceError,
    reduce_charges,
)
from .certificate import StabilityCertificate, certify, eps_max, kappa_min, max_Z, phase_scan

__all__ = [
    "DomainError",
    "EnergyBoundReport",
    "InfeasibleError",
    "PhysicalParams",
    "PreconditionError",
    "ResourceError",
    "StabilityCertificate",
    "certify",
    "eps_max",
    "kappa_min",
    "max_Z",
    "phase_scan",
    "reduce_charges",
]

__version__ = "0.1.0"
