"""Exact fixed-point physical quantities and the emissions arithmetic.

Every quantity is a non-negative scaled integer; nothing here ever touches
floating point.  Scales are fixed so that intensity (1e6) times energy (1e3)
times share (1e6) divides by exactly 1e9 to land back on the emissions scale
(1e6), and the largest possible product stays below 2**110, far under the
proof field modulus.
"""

from __future__ import annotations

from dataclasses import dataclass

# Fractional digits carried by each quantity kind.
ENERGY_SCALE = 10**3  # milli-kWh
INTENSITY_SCALE = 10**6  # micro-kgCO2e/kWh
SHARE_SCALE = 10**6  # parts-per-million
EMISSIONS_SCALE = 10**6  # micro-kgCO2e

# intensity_scale * energy_scale * share_scale / emissions_scale
EMISSIONS_DIVISOR = 10**9

ENERGY_BOUND = 2**50  # exclusive
INTENSITY_BOUND = 2**40  # exclusive
SHARE_BOUND = SHARE_SCALE  # inclusive (100%)


class QuantityError(ValueError):
    pass


class PrecisionLoss(QuantityError):
    """Input text carries more fractional digits than the quantity stores."""


class OutOfRange(QuantityError):
    """Value violates the quantity's range invariant."""


def _check_int(value: object, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")
    return value


@dataclass(frozen=True)
class EnergyQuantity:
    """Total energy consumption in milli-kWh."""

    value: int

    def __post_init__(self) -> None:
        _check_int(self.value, "energy")
        if not 0 <= self.value < ENERGY_BOUND:
            raise OutOfRange(f"energy {self.value} outside [0, 2**50)")


@dataclass(frozen=True)
class IntensityQuantity:
    """Carbon intensity in micro-kgCO2e per kWh."""

    value: int

    def __post_init__(self) -> None:
        _check_int(self.value, "intensity")
        if not 0 <= self.value < INTENSITY_BOUND:
            raise OutOfRange(f"intensity {self.value} outside [0, 2**40)")


@dataclass(frozen=True)
class ShareFraction:
    """One customer's fraction of total consumption, in ppm."""

    value: int

    def __post_init__(self) -> None:
        _check_int(self.value, "share")
        if not 0 <= self.value <= SHARE_BOUND:
            raise OutOfRange(f"share {self.value} outside [0, 10**6]")


@dataclass(frozen=True)
class EmissionsQuantity:
    """Customer emissions in micro-kgCO2e."""

    value: int

    def __post_init__(self) -> None:
        _check_int(self.value, "emissions")
        if self.value < 0:
            raise OutOfRange(f"emissions {self.value} negative")


@dataclass(frozen=True)
class ReportingPeriod:
    """Half-open reporting window in unix seconds (UTC)."""

    start: int
    end: int

    def __post_init__(self) -> None:
        _check_int(self.start, "start")
        _check_int(self.end, "end")
        if self.start < 0 or self.end < 0:
            raise OutOfRange("period timestamps must be non-negative")
        if not self.start < self.end:
            raise OutOfRange(f"period start {self.start} not before end {self.end}")


_KINDS = {
    "energy": (ENERGY_SCALE, EnergyQuantity),
    "intensity": (INTENSITY_SCALE, IntensityQuantity),
    "share": (SHARE_SCALE, ShareFraction),
    "emissions": (EMISSIONS_SCALE, EmissionsQuantity),
}


def parse_quantity(text: str, kind: str):
    """Parse a non-negative decimal string into the exact scaled integer.

    Raises PrecisionLoss if the text has more fractional digits than the
    kind's scale, OutOfRange if the scaled value violates the type bound.
    There is no rounding path: either the text is exact or it is rejected.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown quantity kind {kind!r}")
    scale, ctor = _KINDS[kind]
    digits = len(str(scale)) - 1

    text = text.strip()
    if not text:
        raise QuantityError("empty quantity string")
    whole, sep, frac = text.partition(".")
    if not whole.isascii() or not whole.isdigit():
        raise QuantityError(f"malformed decimal {text!r}")
    if sep:
        if not frac or not frac.isascii() or not frac.isdigit():
            raise QuantityError(f"malformed decimal {text!r}")
        if len(frac) > digits:
            raise PrecisionLoss(
                f"{text!r} has {len(frac)} fractional digits; {kind} stores {digits}"
            )
    else:
        frac = ""
    value = int(whole) * scale + int(frac.ljust(digits, "0") or "0")
    return ctor(value)


def format_quantity(q) -> str:
    """Canonical decimal rendering: no trailing fractional zeros, no '+'."""
    for scale, ctor in _KINDS.values():
        if isinstance(q, ctor):
            whole, frac = divmod(q.value, scale)
            if frac == 0:
                return str(whole)
            digits = len(str(scale)) - 1
            return f"{whole}.{str(frac).zfill(digits).rstrip('0')}"
    raise TypeError(f"not a quantity: {type(q).__name__}")


def compute_emissions(
    i: IntensityQuantity, x: EnergyQuantity, c: ShareFraction
) -> tuple[EmissionsQuantity, int]:
    """Customer emissions from intensity, total energy and customer share.

    Returns (ce, r) with i*x*c == ce*1e9 + r and 0 <= r < 1e9; the flooring
    remainder is kept explicit because the proof circuit re-checks the same
    identity with a range check on r.
    """
    product = i.value * x.value * c.value
    ce, r = divmod(product, EMISSIONS_DIVISOR)
    return EmissionsQuantity(ce), r


def check_bounds(q) -> str | None:
    """Return None if the quantity's invariant holds, else a description.

    Accepts raw out-of-range integers wrapped via object.__new__ in tests;
    the normal constructors already refuse to build violating values.
    """
    if isinstance(q, EnergyQuantity):
        if not 0 <= q.value < ENERGY_BOUND:
            return f"energy {q.value} outside [0, 2**50)"
    elif isinstance(q, IntensityQuantity):
        if not 0 <= q.value < INTENSITY_BOUND:
            return f"intensity {q.value} outside [0, 2**40)"
    elif isinstance(q, ShareFraction):
        if not 0 <= q.value <= SHARE_BOUND:
            return f"share {q.value} outside [0, 10**6]"
    elif isinstance(q, EmissionsQuantity):
        if q.value < 0:
            return f"emissions {q.value} negative"
    elif isinstance(q, ReportingPeriod):
        if not 0 <= q.start < q.end:
            return f"period [{q.start}, {q.end}) not strictly increasing"
    else:
        raise TypeError(f"not a quantity: {type(q).__name__}")
    return None


def render_emissions_kg(ce: EmissionsQuantity) -> str:
    """Human display in kgCO2e (used in verification reports)."""
    whole, frac = divmod(ce.value, EMISSIONS_SCALE)
    if frac == 0:
        return f"{whole} kgCO2e"
    return f"{whole}.{str(frac).zfill(6).rstrip('0')} kgCO2e"
