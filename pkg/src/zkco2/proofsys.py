"""Proving-backend contract with two interchangeable implementations.

- "groth16": the succinct zero-knowledge backend (256-byte proofs,
  verification cost independent of the witness).
- "oracle": a test oracle whose proof is the whole witness and whose
  verifier literally re-runs constraint satisfaction.  It has no privacy
  whatsoever, is flagged non_private in its artifacts, and production
  paths must refuse it unless explicitly unlocked.

Artifacts serialize to a length-prefixed binary format behind an 8-byte
magic; verifying keys additionally export to JSON for verifier-only
deployments.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import struct
from dataclasses import dataclass

from . import bn254 as bn
from . import groth16
from .fields import P
from .groth16 import KeyMismatch, MalformedProof, UnsatisfiedWitness  # re-exported
from .r1cs import (
    ConstraintSystem,
    WitnessAssignment,
    is_satisfied,
    system_from_debug_json,
)

__all__ = [
    "SetupArtifacts",
    "Proof",
    "setup",
    "prove",
    "verify",
    "artifacts_to_bytes",
    "artifacts_from_bytes",
    "verifying_key_json",
    "BACKENDS",
    "KeyMismatch",
    "MalformedProof",
    "UnsatisfiedWitness",
]

ARTIFACT_MAGIC = b"ZKCO2ART"
ARTIFACT_VERSION = 1

MAX_PROOF_BYTES = 4096


@dataclass(frozen=True)
class SetupArtifacts:
    backend: str
    circuit_digest: bytes
    proving_key: bytes
    verifying_key: bytes
    insecure_dev_setup: bool
    non_private: bool


@dataclass(frozen=True)
class Proof:
    backend: str
    data: bytes

    @property
    def byte_length(self) -> int:
        return len(self.data)


# --- point (de)serialization ---------------------------------------------------


def _fq_bytes(v: int) -> bytes:
    return int(v).to_bytes(32, "big")


def _g1_bytes(pt) -> bytes:
    if pt is None:
        return bytes(64)
    return _fq_bytes(pt[0]) + _fq_bytes(pt[1])


def _g2_bytes(pt) -> bytes:
    if pt is None:
        return bytes(128)
    (x0, x1), (y0, y1) = pt
    return _fq_bytes(x0) + _fq_bytes(x1) + _fq_bytes(y0) + _fq_bytes(y1)


def _g1_read(data: bytes, offset: int):
    x = int.from_bytes(data[offset : offset + 32], "big")
    y = int.from_bytes(data[offset + 32 : offset + 64], "big")
    if x == 0 and y == 0:
        return None, offset + 64
    return (x, y), offset + 64


def _g2_read(data: bytes, offset: int):
    vals = [int.from_bytes(data[offset + 32 * i : offset + 32 * (i + 1)], "big") for i in range(4)]
    offset += 128
    if all(v == 0 for v in vals):
        return None, offset
    return ((vals[0], vals[1]), (vals[2], vals[3])), offset


def _g1_list_bytes(points) -> bytes:
    return struct.pack("<Q", len(points)) + b"".join(_g1_bytes(p) for p in points)


def _g2_list_bytes(points) -> bytes:
    return struct.pack("<Q", len(points)) + b"".join(_g2_bytes(p) for p in points)


def _g1_list_read(data: bytes, offset: int):
    (count,) = struct.unpack_from("<Q", data, offset)
    offset += 8
    out = []
    for _ in range(count):
        pt, offset = _g1_read(data, offset)
        out.append(pt)
    return out, offset


def _g2_list_read(data: bytes, offset: int):
    (count,) = struct.unpack_from("<Q", data, offset)
    offset += 8
    out = []
    for _ in range(count):
        pt, offset = _g2_read(data, offset)
        out.append(pt)
    return out, offset


# --- groth16 backend -------------------------------------------------------------


def _groth16_pk_bytes(pk: groth16.ProvingKey) -> bytes:
    return b"".join(
        [
            struct.pack("<Q", pk.domain),
            _g1_bytes(pk.alpha1),
            _g1_bytes(pk.beta1),
            _g1_bytes(pk.delta1),
            _g2_bytes(pk.beta2),
            _g2_bytes(pk.delta2),
            _g1_list_bytes(pk.a_basis),
            _g1_list_bytes(pk.b1_basis),
            _g2_list_bytes(pk.b2_basis),
            _g1_list_bytes(pk.k_basis),
            _g1_list_bytes(pk.h_basis),
        ]
    )


def _groth16_pk_parse(data: bytes, digest: bytes) -> groth16.ProvingKey:
    (domain,) = struct.unpack_from("<Q", data, 0)
    offset = 8
    alpha1, offset = _g1_read(data, offset)
    beta1, offset = _g1_read(data, offset)
    delta1, offset = _g1_read(data, offset)
    beta2, offset = _g2_read(data, offset)
    delta2, offset = _g2_read(data, offset)
    a_basis, offset = _g1_list_read(data, offset)
    b1_basis, offset = _g1_list_read(data, offset)
    b2_basis, offset = _g2_list_read(data, offset)
    k_basis, offset = _g1_list_read(data, offset)
    h_basis, offset = _g1_list_read(data, offset)
    return groth16.ProvingKey(
        digest=digest, domain=domain, alpha1=alpha1, beta1=beta1, delta1=delta1,
        beta2=beta2, delta2=delta2, a_basis=a_basis, b1_basis=b1_basis,
        b2_basis=b2_basis, k_basis=k_basis, h_basis=h_basis,
    )


def _groth16_vk_bytes(vk: groth16.VerifyingKey) -> bytes:
    return b"".join(
        [
            _g1_bytes(vk.alpha1),
            _g2_bytes(vk.beta2),
            _g2_bytes(vk.gamma2),
            _g2_bytes(vk.delta2),
            _g1_list_bytes(vk.ic),
        ]
    )


def _groth16_vk_parse(data: bytes, digest: bytes) -> groth16.VerifyingKey:
    offset = 0
    alpha1, offset = _g1_read(data, offset)
    beta2, offset = _g2_read(data, offset)
    gamma2, offset = _g2_read(data, offset)
    delta2, offset = _g2_read(data, offset)
    ic, offset = _g1_list_read(data, offset)
    return groth16.VerifyingKey(
        digest=digest, alpha1=alpha1, beta2=beta2, gamma2=gamma2, delta2=delta2, ic=ic
    )


_key_cache: dict[tuple[str, bytes], object] = {}


def _cached(kind: str, blob: bytes, parser):
    key = (kind, hashlib.sha256(blob).digest())
    if key not in _key_cache:
        _key_cache[key] = parser(blob)
    return _key_cache[key]


class _Groth16Backend:
    tag = "groth16"
    non_private = False

    def setup(self, system: ConstraintSystem, randomness: bytes) -> SetupArtifacts:
        pk, vk = groth16.setup(system, randomness)
        return SetupArtifacts(
            backend=self.tag,
            circuit_digest=system.digest(),
            proving_key=_groth16_pk_bytes(pk),
            verifying_key=_groth16_vk_bytes(vk),
            insecure_dev_setup=True,
            non_private=False,
        )

    def prove(self, artifacts: SetupArtifacts, system: ConstraintSystem,
              witness: WitnessAssignment, rng) -> Proof:
        pk = _cached(
            "pk", artifacts.proving_key,
            lambda blob: _groth16_pk_parse(blob, artifacts.circuit_digest),
        )
        proof = groth16.prove(pk, system, witness, rng)
        data = _g1_bytes(proof.a) + _g2_bytes(proof.b) + _g1_bytes(proof.c)
        return Proof(backend=self.tag, data=data)

    def verify(self, artifacts: SetupArtifacts, public_inputs: list[int], proof: Proof) -> bool:
        if len(proof.data) != 256:
            raise MalformedProof(f"groth16 proof must be 256 bytes, got {len(proof.data)}")
        a, offset = _g1_read(proof.data, 0)
        b, offset = _g2_read(proof.data, offset)
        c, offset = _g1_read(proof.data, offset)
        if a is None or b is None or c is None:
            raise MalformedProof("proof encodes the point at infinity")
        vk = _cached(
            "vk", artifacts.verifying_key,
            lambda blob: _groth16_vk_parse(blob, artifacts.circuit_digest),
        )
        return groth16.verify(vk, public_inputs, groth16.Groth16Proof(a, b, c))


class _OracleBackend:
    """Direct-evaluation oracle: no succinctness, no privacy, full recheck."""

    tag = "oracle"
    non_private = True

    def setup(self, system: ConstraintSystem, randomness: bytes) -> SetupArtifacts:
        blob = system.to_debug_json().encode()
        return SetupArtifacts(
            backend=self.tag,
            circuit_digest=system.digest(),
            proving_key=blob,
            verifying_key=blob,
            insecure_dev_setup=True,
            non_private=True,
        )

    def prove(self, artifacts: SetupArtifacts, system: ConstraintSystem,
              witness: WitnessAssignment, rng) -> Proof:
        ok, failing = is_satisfied(system, witness)
        if not ok:
            raise UnsatisfiedWitness(failing)
        body = {
            "attestation": "satisfied",
            "backend": self.tag,
            "witness": [str(v) for v in witness.values],
        }
        return Proof(backend=self.tag, data=json.dumps(body, sort_keys=True).encode())

    def verify(self, artifacts: SetupArtifacts, public_inputs: list[int], proof: Proof) -> bool:
        try:
            body = json.loads(proof.data.decode())
            values = [int(v) for v in body["witness"]]
        except (ValueError, KeyError, UnicodeDecodeError) as exc:
            raise MalformedProof(f"oracle proof does not decode: {exc}") from exc
        system = _cached("sys", artifacts.verifying_key,
                         lambda blob: system_from_debug_json(blob.decode()))
        if len(values) != system.num_vars or not values or values[0] != 1:
            return False
        if any(not 0 <= v < P for v in values):
            return False
        assignment = WitnessAssignment(values)
        ok, _ = is_satisfied(system, assignment)
        if not ok:
            return False
        return assignment.public_slice(system) == [v % P for v in public_inputs]


BACKENDS = {b.tag: b for b in (_Groth16Backend(), _OracleBackend())}


def _backend(tag: str):
    if tag not in BACKENDS:
        raise ValueError(f"unknown backend {tag!r}")
    return BACKENDS[tag]


def setup(system: ConstraintSystem, randomness: bytes, backend: str = "groth16") -> SetupArtifacts:
    """Per-circuit key generation; deterministic in `randomness`."""
    return _backend(backend).setup(system, randomness)


def prove(
    artifacts: SetupArtifacts,
    system: ConstraintSystem,
    witness: WitnessAssignment,
    rng=None,
) -> Proof:
    """Prove a satisfied witness; raises UnsatisfiedWitness / KeyMismatch."""
    if artifacts.circuit_digest != system.digest():
        raise KeyMismatch("setup artifacts were generated for a different circuit")
    if rng is None:
        rng = secrets.SystemRandom()
    return _backend(artifacts.backend).prove(artifacts, system, witness, rng)


def verify(artifacts: SetupArtifacts, public_inputs: list[int], proof: Proof) -> bool:
    """Accept or reject; MalformedProof (an error) is distinct from reject."""
    if proof.backend != artifacts.backend:
        raise MalformedProof(
            f"proof backend {proof.backend!r} does not match artifacts {artifacts.backend!r}"
        )
    return _backend(artifacts.backend).verify(artifacts, public_inputs, proof)


# --- artifact files --------------------------------------------------------------


def artifacts_to_bytes(artifacts: SetupArtifacts) -> bytes:
    tag = artifacts.backend.encode()
    flags = (1 if artifacts.insecure_dev_setup else 0) | (2 if artifacts.non_private else 0)
    return b"".join(
        [
            ARTIFACT_MAGIC,
            struct.pack("<I", ARTIFACT_VERSION),
            struct.pack("<B", len(tag)),
            tag,
            artifacts.circuit_digest,
            struct.pack("<I", flags),
            struct.pack("<Q", len(artifacts.proving_key)),
            artifacts.proving_key,
            struct.pack("<Q", len(artifacts.verifying_key)),
            artifacts.verifying_key,
        ]
    )


def artifacts_from_bytes(data: bytes) -> SetupArtifacts:
    if data[:8] != ARTIFACT_MAGIC:
        raise ValueError("not a setup-artifact file (bad magic)")
    (version,) = struct.unpack_from("<I", data, 8)
    if version != ARTIFACT_VERSION:
        raise ValueError(f"unsupported artifact version {version}")
    offset = 12
    (tag_len,) = struct.unpack_from("<B", data, offset)
    offset += 1
    tag = data[offset : offset + tag_len].decode()
    offset += tag_len
    digest = data[offset : offset + 32]
    offset += 32
    (flags,) = struct.unpack_from("<I", data, offset)
    offset += 4
    (pk_len,) = struct.unpack_from("<Q", data, offset)
    offset += 8
    pk = data[offset : offset + pk_len]
    offset += pk_len
    (vk_len,) = struct.unpack_from("<Q", data, offset)
    offset += 8
    vk = data[offset : offset + vk_len]
    return SetupArtifacts(
        backend=tag,
        circuit_digest=digest,
        proving_key=pk,
        verifying_key=vk,
        insecure_dev_setup=bool(flags & 1),
        non_private=bool(flags & 2),
    )


def verifying_key_json(artifacts: SetupArtifacts) -> str:
    """JSON export of the verifying key for verifier-only deployments."""
    if artifacts.backend != "groth16":
        raise ValueError("only the groth16 backend has a JSON verifying key form")
    vk = _groth16_vk_parse(artifacts.verifying_key, artifacts.circuit_digest)

    def g1(pt):
        return None if pt is None else [str(pt[0]), str(pt[1])]

    def g2(pt):
        return None if pt is None else [[str(pt[0][0]), str(pt[0][1])], [str(pt[1][0]), str(pt[1][1])]]

    body = {
        "alpha_1": g1(vk.alpha1),
        "backend": "groth16",
        "beta_2": g2(vk.beta2),
        "circuit_digest": artifacts.circuit_digest.hex(),
        "delta_2": g2(vk.delta2),
        "gamma_2": g2(vk.gamma2),
        "ic": [g1(pt) for pt in vk.ic],
        "insecure_dev_setup": artifacts.insecure_dev_setup,
        "version": ARTIFACT_VERSION,
    }
    return json.dumps(body, sort_keys=True, indent=2) + "\n"
