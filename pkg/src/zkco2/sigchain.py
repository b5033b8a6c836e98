"""Circuit-friendly signatures and the meter / supplier certificate chains.

The scheme is Schnorr-style over Baby Jubjub with the algebraic sponge as
the challenge hash: R = r*B, c = sponge(domain, R, A, message),
s = r + c*secret mod subgroup order, verified as s*B == R + c*A.  The
challenge is used as a full-width integer scalar on both sides, so the
native check and the in-circuit gadget compute the identical equation.

Two chains exist: CA-M -> manufacturer -> meter for readings, and
CA-ES -> supplier for carbon intensity.  Certificates sign the sponge hash
of (role tag, subject key), never the raw key, matching what the circuit
re-hashes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import babyjubjub as jj
from .fields import P
from .poseidon import fields_from_bytes, sponge_hash
from .quantities import EnergyQuantity, IntensityQuantity, ReportingPeriod, ShareFraction


class MalformedPoint(ValueError):
    """Encoding does not describe a point on the curve."""


class RoleViolation(ValueError):
    """Certificate issuance outside the two permitted chain topologies."""


def _tag(text: str) -> int:
    value = int.from_bytes(text.encode("ascii"), "little")
    assert value < 2**64
    return value


# Pairwise-distinct sponge domain tags; reusing a signature across domains
# changes the challenge and therefore fails verification.
DOMAIN_NONCE = _tag("nonce")
DOMAIN_CERT = _tag("cert")
DOMAIN_METER = _tag("meter")
DOMAIN_INTENSITY = _tag("carbint")
DOMAIN_SHARE = _tag("share")
DOMAIN_ID = _tag("ident")

ROLES = ("ca-m", "ca-es", "manufacturer", "supplier", "meter")
ROLE_TAGS = {role: index + 1 for index, role in enumerate(ROLES)}

# issuer role -> subject roles it may certify (Fig-2-style topology: one CA
# per chain, the manufacturer vouches for its meters).
ISSUABLE = {
    "ca-m": ("manufacturer",),
    "manufacturer": ("meter",),
    "ca-es": ("supplier",),
}

Point = jj.Point


@dataclass(frozen=True)
class KeyPair:
    role: str
    secret: int
    public: Point


@dataclass(frozen=True)
class Signature:
    r: Point
    s: int


@dataclass(frozen=True)
class Certificate:
    subject_pk: Point
    subject_role: str
    issuer_sig: Signature


def keygen(role: str, seed: bytes) -> KeyPair:
    """Derive a key pair from a 32-byte seed; same seed, same keys."""
    if role not in ROLES:
        raise ValueError(f"unknown role {role!r}")
    if len(seed) != 32:
        raise ValueError(f"seed must be 32 bytes, got {len(seed)}")
    digest = hashlib.sha512(b"zkco2/keygen/v1:" + role.encode() + b":" + seed).digest()
    secret = int.from_bytes(digest, "little") % jj.SUBGROUP_ORDER
    if secret == 0:
        secret = 1
    return KeyPair(role=role, secret=secret, public=jj.scalar_mul(secret, jj.base_point()))


def _require_point(pt: Point) -> None:
    if not jj.on_curve(pt):
        raise MalformedPoint(f"({pt[0]}, {pt[1]}) is not on the curve")


def challenge(pk: Point, r: Point, message: list[int], domain: int) -> int:
    return sponge_hash(domain, [r[0], r[1], pk[0], pk[1], *message])


def sign(kp: KeyPair, message: list[int], domain: int) -> Signature:
    """Deterministic signature: the nonce is a hash of secret and message."""
    for m in message:
        if not 0 <= m < P:
            raise ValueError("message element outside field")
    nonce = sponge_hash(DOMAIN_NONCE, [domain, kp.secret, *message]) % jj.SUBGROUP_ORDER
    if nonce == 0:
        nonce = 1
    big_r = jj.scalar_mul(nonce, jj.base_point())
    c = challenge(kp.public, big_r, message, domain)
    s = (nonce + c * kp.secret) % jj.SUBGROUP_ORDER
    return Signature(r=big_r, s=s)


def verify(pk: Point, message: list[int], sig: Signature, domain: int) -> bool:
    """Accept iff s*B == R + c*A for the full-width sponge challenge c.

    Off-curve pk or R raises MalformedPoint; an on-curve pk outside the
    prime-order subgroup, a non-canonical s, or a failed equation rejects.
    """
    _require_point(pk)
    _require_point(sig.r)
    if pk == jj.IDENTITY or not jj.in_subgroup(pk):
        return False
    if not 0 <= sig.s < jj.SUBGROUP_ORDER:
        return False
    for m in message:
        if not 0 <= m < P:
            return False
    c = challenge(pk, sig.r, message, domain)
    lhs = jj.scalar_mul(sig.s, jj.base_point())
    rhs = jj.point_add(sig.r, jj.scalar_mul(c, pk))
    return lhs == rhs


def cert_message(subject_role: str, subject_pk: Point) -> int:
    return sponge_hash(DOMAIN_CERT, [ROLE_TAGS[subject_role], subject_pk[0], subject_pk[1]])


def issue_certificate(issuer: KeyPair, subject_pk: Point, subject_role: str) -> Certificate:
    if subject_role not in ROLES:
        raise ValueError(f"unknown role {subject_role!r}")
    if subject_role not in ISSUABLE.get(issuer.role, ()):
        raise RoleViolation(f"{issuer.role} may not certify {subject_role}")
    _require_point(subject_pk)
    sig = sign(issuer, [cert_message(subject_role, subject_pk)], DOMAIN_CERT)
    return Certificate(subject_pk=subject_pk, subject_role=subject_role, issuer_sig=sig)


def verify_certificate(issuer_pk: Point, cert: Certificate) -> bool:
    return verify(
        issuer_pk, [cert_message(cert.subject_role, cert.subject_pk)], cert.issuer_sig, DOMAIN_CERT
    )


def chain_failure(
    anchor_pk: Point,
    chain: list[Certificate],
    leaf_sig: Signature,
    leaf_message: list[int],
    leaf_domain: int,
    expected_roles: tuple[str, ...] | None = None,
) -> str | None:
    """None if the whole chain and leaf signature verify, else what broke.

    The chain is ordered root to leaf: certificate i verifies under the
    subject key of certificate i-1, the first under the anchor.
    """
    if expected_roles is not None:
        actual = tuple(cert.subject_role for cert in chain)
        if actual != expected_roles:
            return f"chain roles {actual} != expected {expected_roles}"
    current = anchor_pk
    for index, cert in enumerate(chain):
        if not verify_certificate(current, cert):
            return f"certificate {index} ({cert.subject_role}) does not verify"
        current = cert.subject_pk
    if not verify(current, leaf_message, leaf_sig, leaf_domain):
        return "leaf signature does not verify"
    return None


def verify_chain(
    anchor_pk: Point,
    chain: list[Certificate],
    leaf_sig: Signature,
    leaf_message: list[int],
    leaf_domain: int,
) -> bool:
    return chain_failure(anchor_pk, chain, leaf_sig, leaf_message, leaf_domain) is None


def meter_reading_message(meter_id: int, period: ReportingPeriod, x: EnergyQuantity) -> list[int]:
    return [meter_id, period.start, period.end, x.value]


def sign_meter_reading(
    meter: KeyPair, meter_id: int, period: ReportingPeriod, x: EnergyQuantity
) -> Signature:
    if meter.role != "meter":
        raise RoleViolation(f"{meter.role} key cannot sign meter readings")
    return sign(meter, meter_reading_message(meter_id, period, x), DOMAIN_METER)


def intensity_message(
    region_id: int, period: ReportingPeriod, i: IntensityQuantity
) -> list[int]:
    return [region_id, period.start, period.end, i.value]


def sign_intensity(
    supplier: KeyPair, region_id: int, period: ReportingPeriod, i: IntensityQuantity
) -> Signature:
    if supplier.role != "supplier":
        raise RoleViolation(f"{supplier.role} key cannot sign intensity records")
    return sign(supplier, intensity_message(region_id, period, i), DOMAIN_INTENSITY)


def commit_share(customer_id: int, c: ShareFraction, blinding: int) -> int:
    """Binding, hiding commitment to one customer's consumption share."""
    if not 0 <= blinding < P:
        raise ValueError("blinding outside field")
    return sponge_hash(DOMAIN_SHARE, [customer_id, c.value, blinding])


def id_to_field(text: str) -> int:
    """Map an identity string (datacentre, customer, region, meter) to one
    field element, so identities bind into single circuit variables."""
    return sponge_hash(DOMAIN_ID, fields_from_bytes(text.encode("utf-8")))


# --- JSON file forms -------------------------------------------------------
#
# Decimal-string field elements, explicit version and kind, sorted keys so
# files are byte-stable.

FILE_VERSION = 1


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def public_key_to_json(role: str, pk: Point) -> str:
    return _dump(
        {
            "kind": "public-key",
            "role": role,
            "version": FILE_VERSION,
            "x": str(pk[0]),
            "y": str(pk[1]),
        }
    )


def keypair_to_json(kp: KeyPair) -> str:
    return _dump(
        {
            "kind": "key-pair",
            "role": kp.role,
            "secret": str(kp.secret),
            "version": FILE_VERSION,
            "x": str(kp.public[0]),
            "y": str(kp.public[1]),
        }
    )


def signature_to_dict(sig: Signature) -> dict:
    return {"r_x": str(sig.r[0]), "r_y": str(sig.r[1]), "s": str(sig.s)}


def signature_from_dict(data: dict) -> Signature:
    return Signature(r=(int(data["r_x"]), int(data["r_y"])), s=int(data["s"]))


def certificate_to_json(cert: Certificate) -> str:
    body = {
        "kind": "certificate",
        "subject_role": cert.subject_role,
        "subject_x": str(cert.subject_pk[0]),
        "subject_y": str(cert.subject_pk[1]),
        "version": FILE_VERSION,
    }
    body.update({f"sig_{k}": v for k, v in signature_to_dict(cert.issuer_sig).items()})
    return _dump(body)


class SchemaViolation(ValueError):
    """A JSON document does not match the expected file schema."""

    def __init__(self, path: str, detail: str):
        self.path = path
        self.detail = detail
        super().__init__(f"{path}: {detail}")


def _load(text: str, kind: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("$", f"not JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaViolation("$", "expected a JSON object")
    if data.get("version") != FILE_VERSION:
        raise SchemaViolation("$.version", f"unsupported version {data.get('version')!r}")
    if data.get("kind") != kind:
        raise SchemaViolation("$.kind", f"expected {kind!r}, got {data.get('kind')!r}")
    return data


def _field_int(data: dict, key: str) -> int:
    try:
        value = int(data[key])
    except KeyError as exc:
        raise SchemaViolation(f"$.{key}", "missing") from exc
    except (TypeError, ValueError) as exc:
        raise SchemaViolation(f"$.{key}", "not a decimal string") from exc
    if not 0 <= value < P:
        raise SchemaViolation(f"$.{key}", "outside field")
    return value


def public_key_from_json(text: str) -> tuple[str, Point]:
    data = _load(text, "public-key")
    role = data.get("role")
    if role not in ROLES:
        raise SchemaViolation("$.role", f"unknown role {role!r}")
    return role, (_field_int(data, "x"), _field_int(data, "y"))


def keypair_from_json(text: str) -> KeyPair:
    data = _load(text, "key-pair")
    role = data.get("role")
    if role not in ROLES:
        raise SchemaViolation("$.role", f"unknown role {role!r}")
    secret = _field_int(data, "secret")
    return KeyPair(role=role, secret=secret, public=(_field_int(data, "x"), _field_int(data, "y")))


def certificate_from_json(text: str) -> Certificate:
    data = _load(text, "certificate")
    role = data.get("subject_role")
    if role not in ROLES:
        raise SchemaViolation("$.subject_role", f"unknown role {role!r}")
    sig = Signature(
        r=(_field_int(data, "sig_r_x"), _field_int(data, "sig_r_y")),
        s=_field_int(data, "sig_s"),
    )
    return Certificate(
        subject_pk=(_field_int(data, "subject_x"), _field_int(data, "subject_y")),
        subject_role=role,
        issuer_sig=sig,
    )
