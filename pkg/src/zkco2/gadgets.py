"""Constraint gadgets: range checks, curve arithmetic, sponge, signatures.

Each gadget appends constraints to a CircuitBuilder and returns linear
combinations.  Soundness conventions used throughout:

- bit decompositions at width <= 252 are injective (2**253 < field modulus);
  full-width 254-bit decompositions additionally enforce the canonical
  "value <= modulus-1" comparison so a hash output has exactly one witness;
- twisted Edwards formulas are the complete unified ones, so they are
  correct for every pair of on-curve points including the identity; points
  entering from the witness are curve-checked first;
- scalar multiplication is plain boolean double-and-add, no windowing.
"""

from __future__ import annotations

from functools import lru_cache

from . import babyjubjub as jj
from . import poseidon
from .fields import P
from .quantities import (
    EMISSIONS_DIVISOR,
    ENERGY_BOUND,
    INTENSITY_BOUND,
    SHARE_BOUND,
)
from .r1cs import LC, CircuitBuilder

GadgetPoint = tuple[LC, LC]

SUBGROUP_BITS = jj.SUBGROUP_ORDER.bit_length()  # 251
FIELD_BITS = P.bit_length()  # 254


def lc_eval_hint(lc: LC):
    return lambda get, lc=lc: sum(c * get(i) for i, c in lc.terms.items()) % P


def gadget_bits(b: CircuitBuilder, v: LC, n: int) -> list[LC]:
    """Decompose v into n little-endian bits; proves 0 <= v < 2**n.

    Requires n <= 252 so the recomposition cannot wrap around the modulus.
    """
    if not 0 < n < FIELD_BITS - 1:
        raise ValueError(f"bit width {n} outside (0, {FIELD_BITS - 1})")
    return _bits_unchecked(b, v, n)


def _bits_unchecked(b: CircuitBuilder, v: LC, n: int) -> list[LC]:
    ev = lc_eval_hint(v)
    bits: list[LC] = []
    for i in range(n):
        bit = b.alloc_computed(lambda get, ev=ev, i=i: (ev(get) >> i) & 1)
        blc = LC.of(bit)
        b.enforce(blc, blc - 1, 0)
        bits.append(blc)
    recomposed = LC()
    for i, blc in enumerate(bits):
        recomposed = recomposed + blc.scale(1 << i)
    b.enforce_zero(recomposed - v)
    return bits


def bits_le_const(b: CircuitBuilder, bits: list[LC], bound: int) -> None:
    """Enforce int(bits) <= bound for boolean inputs, scanning from the MSB.

    A prefix-equality flag survives only while the value tracks the bound's
    1-bits; wherever the bound has a 0-bit, the flag forbids a 1 there.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    eq = LC.of(1)
    for i in reversed(range(len(bits))):
        if (bound >> i) & 1:
            eq = b.mul(eq, bits[i])
        else:
            b.enforce(eq, bits[i], 0)


def gadget_bits_canonical(b: CircuitBuilder, v: LC, bound: int) -> list[LC]:
    """Full decomposition of v with uniqueness: bits recompose to v and the
    bit string is <= bound.  Used with bound = P-1 (hash outputs) and
    bound = subgroup order - 1 (signature scalars)."""
    n = bound.bit_length()
    bits = _bits_unchecked(b, v, n)
    bits_le_const(b, bits, bound)
    return bits


def gadget_range_lt(b: CircuitBuilder, v: LC, bound: int) -> None:
    """Enforce v < bound for a constant bound.

    Both v and bound-1-v are decomposed to the bound's bit width; the pair
    of decompositions is satisfiable exactly for 0 <= v <= bound-1.
    """
    if not 0 < bound < 1 << (FIELD_BITS - 2):
        raise ValueError(f"bound {bound} outside (0, 2**{FIELD_BITS - 2})")
    if bound == 1:
        b.enforce_zero(v)
        return
    n = (bound - 1).bit_length()
    _bits_unchecked(b, v, n)
    _bits_unchecked(b, LC.of(bound - 1) - v, n)


# --- twisted Edwards arithmetic over gadget points --------------------------


def te_on_curve(b: CircuitBuilder, pt: GadgetPoint) -> None:
    x, y = pt
    xx = b.mul(x, x)
    yy = b.mul(y, y)
    xxyy = b.mul(xx, yy)
    b.enforce_zero(xx.scale(jj.A) + yy - 1 - xxyy.scale(jj.D))


def te_add(b: CircuitBuilder, p1: GadgetPoint, p2: GadgetPoint) -> GadgetPoint:
    """Complete unified addition, 6 constraints."""
    x1, y1 = p1
    x2, y2 = p2
    beta = b.mul(x1, y2)
    gamma = b.mul(y1, x2)
    delta = b.mul(y1 - x1.scale(jj.A), x2 + y2)
    tau = b.mul(beta, gamma)
    x3 = b.alloc_computed(
        lambda get, beta=beta, gamma=gamma, tau=tau: (
            lc_eval_hint(beta)(get) + lc_eval_hint(gamma)(get)
        )
        * pow(1 + jj.D * lc_eval_hint(tau)(get), P - 2, P)
        % P
    )
    b.enforce(LC.of(x3), LC.of(1) + tau.scale(jj.D), beta + gamma)
    y3 = b.alloc_computed(
        lambda get, delta=delta, beta=beta, gamma=gamma, tau=tau: (
            lc_eval_hint(delta)(get) + jj.A * lc_eval_hint(beta)(get) - lc_eval_hint(gamma)(get)
        )
        * pow(1 - jj.D * lc_eval_hint(tau)(get), P - 2, P)
        % P
    )
    b.enforce(LC.of(y3), LC.of(1) - tau.scale(jj.D), delta + beta.scale(jj.A) - gamma)
    return LC.of(x3), LC.of(y3)


def te_double(b: CircuitBuilder, pt: GadgetPoint) -> GadgetPoint:
    """Doubling via the curve identity a*x^2 + y^2 = 1 + d*x^2*y^2, valid
    only for on-curve points; 5 constraints."""
    x, y = pt
    xx = b.mul(x, x)
    yy = b.mul(y, y)
    xy = b.mul(x, y)
    den_x = xx.scale(jj.A) + yy
    den_y = LC.of(2) - xx.scale(jj.A) - yy
    x3 = b.alloc_computed(
        lambda get, xy=xy, den_x=den_x: 2
        * lc_eval_hint(xy)(get)
        * pow(lc_eval_hint(den_x)(get), P - 2, P)
        % P
    )
    b.enforce(LC.of(x3), den_x, xy.scale(2))
    y3 = b.alloc_computed(
        lambda get, xx=xx, yy=yy, den_y=den_y: (
            lc_eval_hint(yy)(get) - jj.A * lc_eval_hint(xx)(get)
        )
        * pow(lc_eval_hint(den_y)(get), P - 2, P)
        % P
    )
    b.enforce(LC.of(y3), den_y, yy - xx.scale(jj.A))
    return LC.of(x3), LC.of(y3)


def te_select_const(bit: LC, pt: jj.Point) -> GadgetPoint:
    """bit ? pt : identity, for a compile-time constant point; linear."""
    x, y = pt
    return bit.scale(x), LC.of(1) + bit.scale((y - 1) % P)


def te_select_var(b: CircuitBuilder, bit: LC, pt: GadgetPoint) -> GadgetPoint:
    """bit ? pt : identity, for a witness point; 2 constraints."""
    x, y = pt
    return b.mul(bit, x), LC.of(1) + b.mul(bit, y - 1)


@lru_cache(maxsize=None)
def _base_powers(n: int) -> tuple[jj.Point, ...]:
    powers = [jj.base_point()]
    for _ in range(n - 1):
        powers.append(jj.point_double(powers[-1]))
    return tuple(powers)


def te_scalar_mul_base(b: CircuitBuilder, bits: list[LC]) -> GadgetPoint:
    """sum(bits_i * 2**i) times the subgroup generator; the doubled bases
    are circuit constants so each step is one conditional addition."""
    acc: GadgetPoint = (LC.of(0), LC.of(1))
    for bit, power in zip(bits, _base_powers(len(bits))):
        acc = te_add(b, acc, te_select_const(bit, power))
    return acc


def te_scalar_mul_var(b: CircuitBuilder, bits: list[LC], pt: GadgetPoint) -> GadgetPoint:
    """Variable-base double-and-add over boolean scalar bits."""
    acc: GadgetPoint = (LC.of(0), LC.of(1))
    power = pt
    for i, bit in enumerate(bits):
        acc = te_add(b, acc, te_select_var(b, bit, power))
        if i + 1 < len(bits):
            power = te_double(b, power)
    return acc


# --- sponge ------------------------------------------------------------------


def _gadget_sbox(b: CircuitBuilder, v: LC) -> LC:
    v2 = b.mul(v, v)
    v4 = b.mul(v2, v2)
    return b.mul(v4, v)


def gadget_permute(b: CircuitBuilder, state: list[LC]) -> list[LC]:
    """In-circuit Poseidon permutation; the linear MDS layer costs nothing,
    only the S-boxes allocate wires."""
    rc = poseidon.round_constants()
    mds = poseidon.mds_matrix()
    half = poseidon.FULL_ROUNDS // 2
    total = poseidon.FULL_ROUNDS + poseidon.PARTIAL_ROUNDS
    for r in range(total):
        state = [cell + const for cell, const in zip(state, rc[r])]
        if half <= r < half + poseidon.PARTIAL_ROUNDS:
            state[0] = _gadget_sbox(b, state[0])
        else:
            state = [_gadget_sbox(b, cell) for cell in state]
        state = [
            sum((cell.scale(row[j]) for j, cell in enumerate(state)), LC())
            for row in mds
        ]
    return state


def gadget_sponge(b: CircuitBuilder, domain_tag: int, inputs: list[LC]) -> LC:
    """In-circuit mirror of poseidon.sponge_hash, same constants and shape."""
    if not inputs:
        raise ValueError("sponge gadget requires at least one input")
    state = [LC.of((domain_tag + (len(inputs) << 64)) % P)] + [LC() for _ in range(poseidon.RATE)]
    for offset in range(0, len(inputs), poseidon.RATE):
        chunk = inputs[offset : offset + poseidon.RATE]
        for j, v in enumerate(chunk):
            state[1 + j] = state[1 + j] + v
        state = gadget_permute(b, state)
    return state[1]


# --- signatures --------------------------------------------------------------


def gadget_sig_verify(
    b: CircuitBuilder,
    pk: GadgetPoint,
    message: list[LC],
    sig_r: GadgetPoint,
    sig_s: LC,
    domain: int,
) -> None:
    """Satisfiable exactly when the native verifier accepts (pk, msg, sig).

    Re-derives the sponge challenge in-circuit, decomposes it canonically
    (unique bits), range-checks s below the subgroup order, and enforces
    s*B == R + c*pk coordinate-wise.
    """
    te_on_curve(b, pk)
    te_on_curve(b, sig_r)
    c = gadget_sponge(b, domain, [sig_r[0], sig_r[1], pk[0], pk[1], *message])
    c_bits = gadget_bits_canonical(b, c, P - 1)
    s_bits = gadget_bits_canonical(b, sig_s, jj.SUBGROUP_ORDER - 1)
    lhs = te_scalar_mul_base(b, s_bits)
    rhs = te_add(b, sig_r, te_scalar_mul_var(b, c_bits, pk))
    b.enforce_zero(lhs[0] - rhs[0])
    b.enforce_zero(lhs[1] - rhs[1])


# --- emissions ---------------------------------------------------------------

# The quotient of the largest possible product still fits 81 bits.
CE_BOUND = (INTENSITY_BOUND - 1) * (ENERGY_BOUND - 1) * SHARE_BOUND // EMISSIONS_DIVISOR + 1


def gadget_emissions(
    b: CircuitBuilder, i: LC, x: LC, c: LC, ce_public: LC, r: LC
) -> None:
    """Bind ce_public = floor(i*x*c / 1e9) with remainder r.

    All operands are range-checked so the widest intermediate stays below
    2**111 and the field arithmetic can never wrap.
    """
    gadget_range_lt(b, i, INTENSITY_BOUND)
    gadget_range_lt(b, x, ENERGY_BOUND)
    gadget_range_lt(b, c, SHARE_BOUND + 1)
    gadget_range_lt(b, r, EMISSIONS_DIVISOR)
    gadget_range_lt(b, ce_public, CE_BOUND)
    p1 = b.mul(i, x)
    p2 = b.mul(p1, c)
    b.enforce_zero(ce_public.scale(EMISSIONS_DIVISOR) + r - p2)
