"""Coefficient sets for the classical, RRR1 and RRR2 formulations."""

from src.common.exceptions import DomainError
from src.services.swarm.enums import Formulation
from src.services.swarm.schemas import CoefficientSet, CoefficientSpec

RRR1_AW_RANGE = (1.00, 2.00)  # open interval
RRR2_AW_RANGE = (1.00, 2.61)  # (lower, upper]

DEFAULT_SUBGROUP_SPECS: tuple[CoefficientSpec, ...] = (
    CoefficientSpec(formulation=Formulation.RRR2, aw=2.40),
    CoefficientSpec(formulation=Formulation.RRR1, aw=1.80),
    CoefficientSpec(formulation=Formulation.CLASSICAL, w=0.7298, aw=2.9922),
)


def _check_ip(ip: float) -> None:
    if not 0.0 <= ip < 1.0:
        raise DomainError(f"ip must lie in [0, 1), got {ip}")


def rrr1_coefficients(aw: float, ip: float = 0.5) -> CoefficientSet:
    low, high = RRR1_AW_RANGE
    if not low < aw < high:
        raise DomainError(f"RRR1 requires aw in ({low:.2f}, {high:.2f}), got {aw}")
    _check_ip(ip)
    w = aw - 1.0
    return CoefficientSet(
        formulation=Formulation.RRR1,
        w=w,
        aw=aw,
        ip=ip,
        sp=1.0 - ip,
        phi_min=0.5 * (w + 1.0),
        phi_max=1.5 * (w + 1.0),
    )


def rrr2_coefficients(aw: float, ip: float = 0.5) -> CoefficientSet:
    low, high = RRR2_AW_RANGE
    if not low < aw <= high:
        raise DomainError(f"RRR2 requires aw in ({low:.2f}, {high:.2f}], got {aw}")
    _check_ip(ip)
    w = 1.0 / aw - 2.0 + aw
    phi_max = 2.0 * (w + 1.0)
    return CoefficientSet(
        formulation=Formulation.RRR2,
        w=w,
        aw=aw,
        ip=ip,
        sp=1.0 - ip,
        phi_min=2.0 * aw - phi_max,
        phi_max=phi_max,
    )


def classical_coefficients(w: float, iw: float, sw: float) -> CoefficientSet:
    if iw < 0.0 or sw < 0.0:
        raise DomainError(f"iw and sw must be non-negative, got iw={iw}, sw={sw}")
    return CoefficientSet(formulation=Formulation.CLASSICAL, w=w, aw=iw + sw, iw=iw, sw=sw)


def constriction_coefficients(cf: float = 0.7298, aw: float = 4.10) -> CoefficientSet:
    """Constriction-factor form: w = cf, iw = sw = cf * aw / 2."""
    if cf <= 0.0 or aw <= 0.0:
        raise DomainError(f"cf and aw must be positive, got cf={cf}, aw={aw}")
    half = cf * aw / 2.0
    return classical_coefficients(cf, half, half)


def coefficients_from_spec(spec: CoefficientSpec) -> CoefficientSet:
    """Build a coefficient set from its config description.

    Classical specs take explicit iw/sw, or split aw evenly.
    """
    if spec.formulation == Formulation.RRR1:
        if spec.aw is None:
            raise DomainError("RRR1 coefficients need aw")
        return rrr1_coefficients(spec.aw, spec.ip)
    if spec.formulation == Formulation.RRR2:
        if spec.aw is None:
            raise DomainError("RRR2 coefficients need aw")
        return rrr2_coefficients(spec.aw, spec.ip)

    if spec.w is None:
        raise DomainError("classical coefficients need w")
    if spec.iw is not None and spec.sw is not None:
        return classical_coefficients(spec.w, spec.iw, spec.sw)
    if spec.aw is None:
        raise DomainError("classical coefficients need aw or both iw and sw")
    return classical_coefficients(spec.w, spec.aw / 2.0, spec.aw / 2.0)
