"""Prime-field constants and helpers shared across the crypto modules.

All in-circuit values live in the scalar field of the BN254 pairing curve
(254 bits).  The embedded Baby Jubjub curve used for signatures has this
field as its base field, so signature data embeds into circuit variables
without any conversion.
"""

from __future__ import annotations

# Scalar field of BN254 (a.k.a. alt_bn128); base field of Baby Jubjub.
P = 21888242871839275222246405745257275088548364400416034343698204186575808495617

FIELD_BITS = P.bit_length()  # 254


def fe(value: int) -> int:
    """Reduce an integer into the field."""
    return value % P


def finv(value: int) -> int:
    if value % P == 0:
        raise ZeroDivisionError("inverse of zero field element")
    return pow(value, P - 2, P)


def is_field_element(value: object) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and 0 <= value < P
