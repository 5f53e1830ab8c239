"""Stability and instability verdicts across model variants, plus the thresholds behind them."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .certificate import certify
from .core import DomainError, PhysicalParams


class Kind(str, enum.Enum):
    STABLE_SECOND_KIND = "stable_second_kind"
    POSITIVE_HAMILTONIAN = "positive_hamiltonian"
    INSTABILITY_FIRST_KIND = "instability_first_kind"
    INSTABILITY_SECOND_KIND = "instability_second_kind"
    CONDITIONAL = "conditional"

    @property
    def unstable(self) -> bool:
        return self in (Kind.INSTABILITY_FIRST_KIND, Kind.INSTABILITY_SECOND_KIND)


PROJECTORS = ("free_D0", "dressed_DA")
FIELDS = ("classical", "quantized")

# citation anchors: which decision table / threshold a verdict rests on
ANCHOR_FREE_TABLE = "table: electrons projected onto the positive subspace of the free Dirac operator D(0)"
ANCHOR_DRESSED_TABLE = "table: electrons projected onto the positive subspace of D(A), the Dirac operator with field"
ANCHOR_CERTIFICATE = "stability certificate: kinetic, field and Coulomb constant system"
ANCHOR_FOURPI = "instability threshold: Z alpha > 4/pi (one electron, m > 0)"
ANCHOR_ALPHA_C = "instability threshold: alpha > alpha_c for K large"
ANCHOR_SCALING = "scaling bound: a N^{4/3} - alpha b N^2 trial energy"


@dataclass(frozen=True)
class ModelVariant:
    projector: str
    field: str
    cutoff: bool
    coulomb: bool

    def __post_init__(self):
        if self.projector not in PROJECTORS:
            raise DomainError(f"projector must be one of {PROJECTORS}")
        if self.field not in FIELDS:
            raise DomainError(f"field must be one of {FIELDS}")


@dataclass(frozen=True)
class Verdict:
    kind: Kind
    conditions: tuple[str, ...] = ()
    citations: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "conditions": list(self.conditions), "citations": list(self.citations)}


def critical_Z(alpha: float, epsilon: float = 0.0) -> tuple[float, float]:
    """``(4/(pi alpha), (4/pi) sqrt(1 + epsilon) / alpha)``."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if epsilon < 0:
        raise DomainError("epsilon must be nonnegative")
    z = 4.0 / (math.pi * alpha)
    return z, z * math.sqrt(1.0 + epsilon)


def classify(
    variant: ModelVariant,
    alpha: float,
    Z: float = 1.0,
    N: int = 1,
    K: int = 1,
    alpha_c: Optional[float] = None,
    paper_mode: bool = False,
) -> Verdict:
    """Verdict for a model variant at the given couplings.

    ``alpha_c`` is the unquantified large-alpha threshold; when omitted it
    plays no part and the unresolved region is reported as conditional.
    """
    params = PhysicalParams(alpha=alpha, Z=Z, N=N, K=K)
    if variant.projector == "free_D0":
        if variant.cutoff:
            return Verdict(
                Kind.INSTABILITY_SECOND_KIND,
                ("any alpha > 0", "classical or quantized field with cutoff"),
                (ANCHOR_FREE_TABLE, ANCHOR_SCALING),
            )
        return Verdict(
            Kind.INSTABILITY_FIRST_KIND,
            ("any alpha > 0", "classical or quantized field without cutoff"),
            (ANCHOR_FREE_TABLE, ANCHOR_SCALING),
        )

    if variant.field == "quantized" and not variant.cutoff:
        return Verdict(
            Kind.CONDITIONAL,
            ("quantized field without cutoff lies outside the decision tables",),
            (ANCHOR_DRESSED_TABLE,),
        )
    if not variant.coulomb:
        return Verdict(Kind.POSITIVE_HAMILTONIAN, ("no Coulomb potential",), (ANCHOR_DRESSED_TABLE,))

    cert = certify(params, paper_mode=paper_mode)
    if cert.feasible:
        return Verdict(
            Kind.STABLE_SECOND_KIND,
            (f"certificate feasible at alpha={alpha!r}, Z={Z!r}",),
            (ANCHOR_DRESSED_TABLE, ANCHOR_CERTIFICATE),
        )
    z4pi, _ = critical_Z(alpha)
    if Z > z4pi:
        return Verdict(
            Kind.INSTABILITY_FIRST_KIND,
            (f"Z alpha = {Z * alpha!r} > 4/pi",),
            (ANCHOR_DRESSED_TABLE, ANCHOR_FOURPI),
        )
    if alpha_c is not None and alpha > alpha_c:
        return Verdict(
            Kind.INSTABILITY_FIRST_KIND,
            (f"alpha = {alpha!r} > alpha_c = {alpha_c!r}", "K sufficiently large"),
            (ANCHOR_DRESSED_TABLE, ANCHOR_ALPHA_C),
        )
    conds = ["certificate infeasible", "Z alpha <= 4/pi"]
    conds.append("alpha_c not supplied" if alpha_c is None else f"alpha <= alpha_c = {alpha_c!r}")
    return Verdict(Kind.CONDITIONAL, tuple(conds), (ANCHOR_DRESSED_TABLE,))


@dataclass(frozen=True)
class TableRow:
    """One cell of the decision tables.

    ``expected`` is either a single kind or, for the threshold cell, the
    pair (kind when small couplings, kind when large couplings).
    """

    table: int
    variant: ModelVariant
    expected: tuple[Kind, ...]
    thresholds: tuple[str, ...] = ()


def table_rows() -> list[TableRow]:
    """The eight cells of the two decision tables.

    The free-projector table is Coulomb x cutoff; the field may be classical
    or quantized in every cell, so each cell is represented by a classical
    field.  The dressed-projector table is Coulomb x {classical field,
    quantized field with cutoff}.
    """
    rows = []
    for coulomb in (False, True):
        for cutoff in (False, True):
            kind = Kind.INSTABILITY_SECOND_KIND if cutoff else Kind.INSTABILITY_FIRST_KIND
            rows.append(TableRow(1, ModelVariant("free_D0", "classical", cutoff, coulomb), (kind,), ("alpha > 0",)))
    for coulomb in (False, True):
        for fld, cutoff in (("classical", False), ("quantized", True)):
            v = ModelVariant("dressed_DA", fld, cutoff, coulomb)
            if coulomb:
                rows.append(
                    TableRow(
                        2, v, (Kind.STABLE_SECOND_KIND, Kind.INSTABILITY_FIRST_KIND),
                        ("alpha and Z alpha small enough", "Z alpha > 4/pi or alpha > alpha_c"),
                    )
                )
            else:
                rows.append(TableRow(2, v, (Kind.POSITIVE_HAMILTONIAN,)))
    return rows


@dataclass(frozen=True)
class ScalingBound:
    unscaled: float
    scaled: float
    N_crit_unscaled: float
    N_crit_scaled: float

    def as_dict(self) -> dict:
        return asdict(self)


def free_projector_upper_bound(N: float, alpha: float, a: float, b: float, mu: float = 1.0) -> ScalingBound:
    """Trial-state upper bounds for the free-projector model.

    unscaled = a N^{4/3} - alpha b N^2 and scaled = mu (a N^{1/3} - alpha b N^2).
    The critical particle numbers are where each expression changes sign:
    (a/(alpha b))^{3/2} and (a/(alpha b))^{3/5}.
    """
    if a <= 0 or b <= 0:
        raise DomainError("a and b must be positive")
    if mu <= 0 or alpha <= 0 or N <= 0:
        raise DomainError("N, alpha and mu must be positive")
    unscaled = a * N ** (4.0 / 3.0) - alpha * b * N**2
    scaled = mu * (a * N ** (1.0 / 3.0) - alpha * b * N**2)
    r = a / (alpha * b)
    return ScalingBound(unscaled, scaled, r**1.5, r**0.6)


def nuclei_instability_condition(charges: Sequence[float], alpha: float, const_c: float) -> bool:
    """sum Z_j >= const_c alpha^{-3/2} and sum Z_j^2 >= 2."""
    if const_c <= 0:
        raise DomainError("const_c must be positive")
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    z = [float(c) for c in charges]
    return sum(z) >= const_c * alpha**-1.5 and sum(c * c for c in z) >= 2.0
