"""Algebraic sponge hash over the proof field (Poseidon permutation).

The same constants drive both the native hash here and the in-circuit
gadget, so a digest computed natively equals the digest enforced inside a
proof.  Parameters: state width t=6 (rate 5, capacity 1), x^5 S-box,
8 full rounds and 60 partial rounds, sized for the 254-bit field at the
128-bit security level.

Round constants come from an 80-bit Grain LFSR seeded with the parameter
encoding, with rejection sampling into the field; the MDS layer is the
Cauchy matrix 1/(x_i + y_j) for x = 0..t-1, y = t..2t-1.  Everything is
re-derivable from this file alone.
"""

from __future__ import annotations

from functools import lru_cache

from .fields import P, finv

WIDTH = 6
RATE = WIDTH - 1
FULL_ROUNDS = 8
PARTIAL_ROUNDS = 60
ALPHA = 5

# Grain seed fields: GF(p) marker, x^alpha S-box marker, field bits.
_GRAIN_FIELD_TAG = 1
_GRAIN_SBOX_TAG = 0
_FIELD_BITS = P.bit_length()


def _grain_bits(t: int, r_f: int, r_p: int):
    """Yield the Grain keystream for the given parameter set.

    80-bit LFSR, feedback taps 62/51/38/23/13/0, 160 warm-up steps, then
    self-shrinking output: a raw 1 bit passes the following bit through, a
    raw 0 bit discards it.
    """
    state = []
    for value, width in (
        (_GRAIN_FIELD_TAG, 2),
        (_GRAIN_SBOX_TAG, 4),
        (_FIELD_BITS, 12),
        (t, 12),
        (r_f, 10),
        (r_p, 10),
    ):
        state.extend(int(b) for b in bin(value)[2:].zfill(width))
    state.extend([1] * 30)
    assert len(state) == 80

    def step() -> int:
        bit = state[62] ^ state[51] ^ state[38] ^ state[23] ^ state[13] ^ state[0]
        state.pop(0)
        state.append(bit)
        return bit

    for _ in range(160):
        step()
    while True:
        if step() == 1:
            yield step()
        else:
            step()


def _grain_field_elements(count: int, t: int, r_f: int, r_p: int) -> list[int]:
    """Sample `count` field elements, rejecting out-of-field candidates."""
    stream = _grain_bits(t, r_f, r_p)
    out: list[int] = []
    while len(out) < count:
        candidate = 0
        for _ in range(_FIELD_BITS):
            candidate = (candidate << 1) | next(stream)
        if candidate < P:
            out.append(candidate)
    return out


@lru_cache(maxsize=None)
def round_constants(t: int = WIDTH, r_f: int = FULL_ROUNDS, r_p: int = PARTIAL_ROUNDS):
    flat = _grain_field_elements((r_f + r_p) * t, t, r_f, r_p)
    return tuple(tuple(flat[r * t : (r + 1) * t]) for r in range(r_f + r_p))


@lru_cache(maxsize=None)
def mds_matrix(t: int = WIDTH):
    return tuple(tuple(finv(x + y) for y in range(t, 2 * t)) for x in range(t))


def _sbox(v: int) -> int:
    v2 = v * v % P
    v4 = v2 * v2 % P
    return v4 * v % P


def permute(state: list[int]) -> list[int]:
    """One Poseidon permutation of a width-6 state (values already in field)."""
    if len(state) != WIDTH:
        raise ValueError(f"state width {len(state)} != {WIDTH}")
    rc = round_constants()
    mds = mds_matrix()
    half_full = FULL_ROUNDS // 2
    total = FULL_ROUNDS + PARTIAL_ROUNDS
    s = list(state)
    for r in range(total):
        cs = rc[r]
        s = [(v + c) % P for v, c in zip(s, cs)]
        if half_full <= r < half_full + PARTIAL_ROUNDS:
            s[0] = _sbox(s[0])
        else:
            s = [_sbox(v) for v in s]
        s = [sum(m * v for m, v in zip(row, s)) % P for row in mds]
    return s


def sponge_hash(domain_tag: int, inputs: list[int]) -> int:
    """Hash a non-empty field-element list under a domain tag.

    The capacity cell is initialised with tag + len(inputs)*2**64, which
    separates domains and input lengths at once; inputs are absorbed in
    rate-sized chunks by addition.  Output is the first rate cell.
    """
    if not inputs:
        raise ValueError("sponge_hash requires at least one input")
    if not 0 <= domain_tag < 2**64:
        raise ValueError("domain tag must fit in 64 bits")
    state = [0] * WIDTH
    state[0] = (domain_tag + (len(inputs) << 64)) % P
    for offset in range(0, len(inputs), RATE):
        chunk = inputs[offset : offset + RATE]
        for j, v in enumerate(chunk):
            if not 0 <= v < P:
                raise ValueError("sponge input outside field")
            state[1 + j] = (state[1 + j] + v) % P
        state = permute(state)
    return state[1]


def fields_from_bytes(data: bytes) -> list[int]:
    """Pack bytes into field elements, 31 bytes per element, little-endian.

    Used to absorb identity strings; 31 bytes always fit below the modulus.
    """
    if not data:
        return [0]
    return [
        int.from_bytes(data[i : i + 31], "little") for i in range(0, len(data), 31)
    ]
