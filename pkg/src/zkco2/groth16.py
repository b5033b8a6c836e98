"""Groth16 over BN254 for the package's constraint systems.

Pure-Python implementation tuned for desk-scale circuits (tens of
thousands of constraints): Pippenger multi-scalar multiplication, radix-2
NTT for the quotient polynomial, batch-inverted affine tables for the
setup's fixed-base lifts.  If gmpy2 is importable its mpz type is used for
the big-integer hot paths; everything works (slower) without it.

The setup is an explicitly insecure single-party dev ceremony: it derives
the toxic scalars (tau, alpha, beta, gamma, delta) from caller randomness,
uses them to evaluate the QAP directly in the field, lifts the results
with fixed-base tables, and then drops them.  Artifacts are flagged
insecure_dev_setup accordingly.

Wire 0 and the layout variables are the Groth16 statement; following the
libsnark reduction, the QAP domain is padded with one row per statement
wire so their A-polynomials are linearly independent.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from . import bn254 as bn
from .fields import P as FR
from .r1cs import ConstraintSystem, WitnessAssignment, is_satisfied

try:  # pragma: no cover - exercised implicitly everywhere
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    def mpz(x):  # type: ignore
        return x


class UnsatisfiedWitness(ValueError):
    """Refusing to prove a false statement; carries the failing constraint."""

    def __init__(self, constraint_index: int):
        self.constraint_index = constraint_index
        super().__init__(f"witness does not satisfy constraint {constraint_index}")


class KeyMismatch(ValueError):
    """Key material was generated for a different constraint system."""


class MalformedProof(ValueError):
    """Proof bytes do not decode to curve points."""


# --- NTT over the scalar field -------------------------------------------------

_GENERATOR = 5  # generates the multiplicative group of the scalar field
_TWO_ADICITY = 28
assert (FR - 1) % (1 << _TWO_ADICITY) == 0

_root_cache: dict[int, list] = {}


def _roots(n: int, inverse: bool) -> list:
    key = n if not inverse else -n
    if key not in _root_cache:
        w = pow(_GENERATOR, (FR - 1) // n, FR)
        if inverse:
            w = pow(w, FR - 2, FR)
        acc = mpz(1)
        w = mpz(w)
        table = [acc]
        for _ in range(n // 2 - 1):
            acc = acc * w % FR
            table.append(acc)
        _root_cache[key] = table
    return _root_cache[key]


def _ntt(vec: list, inverse: bool = False) -> list:
    """In-place iterative radix-2 NTT; returns the (new) list."""
    n = len(vec)
    assert n & (n - 1) == 0
    vec = [mpz(v) for v in vec]
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            vec[i], vec[j] = vec[j], vec[i]
    roots = _roots(n, inverse)
    length = 2
    while length <= n:
        half = length >> 1
        step = n // length
        for start in range(0, n, length):
            for k in range(half):
                w = roots[k * step]
                lo = vec[start + k]
                hi = vec[start + k + half] * w % FR
                vec[start + k] = (lo + hi) % FR
                vec[start + k + half] = (lo - hi) % FR
        length <<= 1
    if inverse:
        n_inv = pow(n, FR - 2, FR)
        vec = [v * n_inv % FR for v in vec]
    return vec


# --- generic group helpers -------------------------------------------------------


class _Ops:
    """Per-group function bundle so MSM and tables are written once."""

    def __init__(self, add_jac, add_affine, double, to_jac, from_jac, inf, is_inf, mapper, z_one):
        self.add_jac = add_jac
        self.add_affine = add_affine
        self.double = double
        self.to_jac = to_jac
        self.from_jac = from_jac
        self.inf = inf
        self.is_inf = is_inf
        self.mapper = mapper  # lift affine coords into mpz
        self.z_one = z_one


def _g1_mpz(pt):
    return None if pt is None else (mpz(pt[0]), mpz(pt[1]))


def _g2_mpz(pt):
    if pt is None:
        return None
    (x0, x1), (y0, y1) = pt
    return ((mpz(x0), mpz(x1)), (mpz(y0), mpz(y1)))


G1_OPS = _Ops(
    bn.g1_jac_add, bn.g1_jac_add_affine, bn.g1_jac_double,
    bn.g1_to_jac, bn.g1_from_jac, (1, 1, 0), lambda j: j[2] == 0, _g1_mpz, 1,
)
G2_OPS = _Ops(
    bn.g2_jac_add, bn.g2_jac_add_affine, bn.g2_jac_double,
    bn.g2_to_jac, bn.g2_from_jac, (bn.FQ2_ONE, bn.FQ2_ONE, bn.FQ2_ZERO),
    lambda j: j[2] == bn.FQ2_ZERO, _g2_mpz, bn.FQ2_ONE,
)


def msm(ops: _Ops, points: list, scalars: list):
    """Pippenger bucket MSM; returns an affine point (or None).

    Zero scalars and infinity points are skipped, which matters here: a
    large share of witness values are bits.
    """
    pairs = [
        (ops.mapper(p), int(s) % FR)
        for p, s in zip(points, scalars)
        if p is not None and s % FR != 0
    ]
    if not pairs:
        return None
    n = len(pairs)
    if n < 32:
        acc = ops.inf
        for p, s in pairs:
            acc = ops.add_jac(acc, _scalar_mul_jac(ops, p, s))
        return ops.from_jac(acc)
    c = min(13, max(4, n.bit_length() - 5))
    windows = (254 + c - 1) // c
    mask = (1 << c) - 1
    add_affine = ops.add_affine
    add_jac = ops.add_jac
    z_one = ops.z_one
    window_sums = []
    for w in range(windows):
        shift = w * c
        buckets = [None] * (mask + 1)
        for p, s in pairs:
            digit = (s >> shift) & mask
            if digit:
                cur = buckets[digit]
                buckets[digit] = (p[0], p[1], z_one) if cur is None else add_affine(cur, p)
        acc = ops.inf
        running = ops.inf
        for digit in range(mask, 0, -1):
            b = buckets[digit]
            if b is not None:
                running = add_jac(running, b)
            acc = add_jac(acc, running)
        window_sums.append(acc)
    total = ops.inf
    for acc in reversed(window_sums):
        for _ in range(c):
            total = ops.double(total)
        total = ops.add_jac(total, acc)
    return ops.from_jac(total)


def _scalar_mul_jac(ops: _Ops, affine, k: int):
    acc = ops.inf
    add = (affine[0], affine[1], ops.z_one)
    while k:
        if k & 1:
            acc = ops.add_jac(acc, add)
        add = ops.double(add)
        k >>= 1
    return acc


def _g1_batch_affine(jacs: list) -> list:
    """Batch-normalize G1 Jacobian points with one field inversion."""
    q = bn.Q
    zs = []
    idx = []
    for i, (_, _, z) in enumerate(jacs):
        if z != 0:
            zs.append(z)
            idx.append(i)
    out: list = [None] * len(jacs)
    if not zs:
        return out
    prefix = [zs[0]]
    for z in zs[1:]:
        prefix.append(prefix[-1] * z % q)
    inv = pow(prefix[-1], q - 2, q)
    invs = [0] * len(zs)
    for i in range(len(zs) - 1, 0, -1):
        invs[i] = inv * prefix[i - 1] % q
        inv = inv * zs[i] % q
    invs[0] = inv
    for slot, i in enumerate(idx):
        x, y, _ = jacs[i]
        zi = invs[slot]
        zi2 = zi * zi % q
        out[i] = (int(x * zi2 % q), int(y * zi2 % q * zi % q))
    return out


class _FixedBase:
    """Windowed fixed-base multiplier used by the trapdoor setup lifts."""

    def __init__(self, ops: _Ops, generator, window: int = 8):
        self.ops = ops
        self.window = window
        self.windows = (254 + window - 1) // window
        rows = []
        base = ops.to_jac(ops.mapper(generator))
        for _ in range(self.windows):
            row = [None]
            acc = ops.inf
            for _ in range((1 << window) - 1):
                acc = ops.add_jac(acc, base)
                row.append(acc)
            rows.append(row)
            for _ in range(window):
                base = ops.double(base)
        self.rows = rows

    def mul(self, k: int):
        k = int(k) % FR
        ops = self.ops
        acc = ops.inf
        mask = (1 << self.window) - 1
        w = 0
        while k:
            digit = k & mask
            if digit:
                acc = ops.add_jac(acc, self.rows[w][digit])
            k >>= self.window
            w += 1
        return ops.from_jac(acc)


# --- QAP helpers ---------------------------------------------------------------


def _domain_size(system: ConstraintSystem) -> int:
    rows = system.num_constraints() + len(system.public_indices) + 1
    size = 1
    while size < rows:
        size <<= 1
    return size


def _statement_wires(system: ConstraintSystem) -> list[int]:
    return [0] + list(system.public_indices)


def _lagrange_at_tau(m: int, tau: int) -> list[int]:
    """L_j(tau) for the radix-2 domain, via batch inversion: O(m)."""
    w = pow(_GENERATOR, (FR - 1) // m, FR)
    z = (pow(tau, m, FR) - 1) % FR
    if z == 0:
        raise ValueError("trapdoor tau landed inside the domain; reroll")
    m_inv = pow(m, FR - 2, FR)
    pows = [1] * m
    for j in range(1, m):
        pows[j] = pows[j - 1] * w % FR
    dens = [(tau - pows[j]) % FR for j in range(m)]
    prefix = [dens[0]]
    for d in dens[1:]:
        prefix.append(prefix[-1] * d % FR)
    inv = pow(prefix[-1], FR - 2, FR)
    out = [0] * m
    for j in range(m - 1, 0, -1):
        out[j] = z * m_inv % FR * pows[j] % FR * (inv * prefix[j - 1] % FR) % FR
        inv = inv * dens[j] % FR
    out[0] = z * m_inv % FR * pows[0] % FR * inv % FR
    return out


# --- key material ----------------------------------------------------------------


@dataclass
class ProvingKey:
    digest: bytes
    domain: int
    alpha1: bn.G1Affine
    beta1: bn.G1Affine
    delta1: bn.G1Affine
    beta2: bn.G2Affine
    delta2: bn.G2Affine
    a_basis: list
    b1_basis: list
    b2_basis: list
    k_basis: list
    h_basis: list


@dataclass
class VerifyingKey:
    digest: bytes
    alpha1: bn.G1Affine
    beta2: bn.G2Affine
    gamma2: bn.G2Affine
    delta2: bn.G2Affine
    ic: list


@dataclass
class Groth16Proof:
    a: bn.G1Affine
    b: bn.G2Affine
    c: bn.G1Affine


def _derive_trapdoor(seed: bytes) -> list[int]:
    out = []
    counter = 0
    while len(out) < 5:
        digest = hashlib.sha512(b"zkco2/groth16-setup/v1:%d:" % counter + seed).digest()
        value = int.from_bytes(digest, "little") % FR
        if value != 0:
            out.append(value)
        counter += 1
    return out


def setup(system: ConstraintSystem, seed: bytes) -> tuple[ProvingKey, VerifyingKey]:
    """Dev-mode trusted setup, deterministic in `seed`.

    Knowing the trapdoor lets the whole CRS be computed as field scalars
    first (sparse matrix evaluation at tau), then lifted with fixed-base
    tables; this is what makes a pure-Python setup affordable.
    """
    m = _domain_size(system)
    tau, alpha, beta, gamma, delta = _derive_trapdoor(seed)
    lag = _lagrange_at_tau(m, tau)

    nvars = system.num_vars
    u = [0] * nvars
    v = [0] * nvars
    w = [0] * nvars
    for j, (a_row, b_row, c_row) in enumerate(system.constraints):
        lj = lag[j]
        for i, coef in a_row.items():
            u[i] = (u[i] + coef * lj) % FR
        for i, coef in b_row.items():
            v[i] = (v[i] + coef * lj) % FR
        for i, coef in c_row.items():
            w[i] = (w[i] + coef * lj) % FR
    statement = _statement_wires(system)
    for k, wire in enumerate(statement):
        u[wire] = (u[wire] + lag[system.num_constraints() + k]) % FR

    gamma_inv = pow(gamma, FR - 2, FR)
    delta_inv = pow(delta, FR - 2, FR)
    statement_set = set(statement)
    k_scalars = [0] * nvars
    ic_scalars = []
    for i in range(nvars):
        combined = (beta * u[i] + alpha * v[i] + w[i]) % FR
        if i in statement_set:
            k_scalars[i] = 0
        else:
            k_scalars[i] = combined * delta_inv % FR
    for wire in statement:
        combined = (beta * u[wire] + alpha * v[wire] + w[wire]) % FR
        ic_scalars.append(combined * gamma_inv % FR)

    z_tau = (pow(tau, m, FR) - 1) % FR
    h_scalars = [0] * (m - 1)
    acc = z_tau * delta_inv % FR
    for i in range(m - 1):
        h_scalars[i] = acc
        acc = acc * tau % FR

    g1_table = _FixedBase(G1_OPS, bn.G1_GEN)
    g2_table = _FixedBase(G2_OPS, bn.G2_GEN)

    def lift1(scalar: int):
        return g1_table.mul(scalar) if scalar else None

    def lift2(scalar: int):
        return g2_table.mul(scalar) if scalar else None

    digest = system.digest()
    pk = ProvingKey(
        digest=digest,
        domain=m,
        alpha1=g1_table.mul(alpha),
        beta1=g1_table.mul(beta),
        delta1=g1_table.mul(delta),
        beta2=g2_table.mul(beta),
        delta2=g2_table.mul(delta),
        a_basis=[lift1(s) for s in u],
        b1_basis=[lift1(s) for s in v],
        b2_basis=[lift2(s) for s in v],
        k_basis=[lift1(s) for s in k_scalars],
        h_basis=[lift1(s) for s in h_scalars],
    )
    vk = VerifyingKey(
        digest=digest,
        alpha1=pk.alpha1,
        beta2=pk.beta2,
        gamma2=g2_table.mul(gamma),
        delta2=pk.delta2,
        ic=[g1_table.mul(s) for s in ic_scalars],
    )
    return pk, vk


def _quotient_coeffs(system: ConstraintSystem, values: list, m: int) -> list:
    """Coefficients of h(X) = (A(X)B(X) - C(X)) / Z(X) via a coset NTT."""
    az = [0] * m
    bz = [0] * m
    cz = [0] * m
    for j, (a_row, b_row, c_row) in enumerate(system.constraints):
        az[j] = sum(coef * values[i] for i, coef in a_row.items()) % FR
        bz[j] = sum(coef * values[i] for i, coef in b_row.items()) % FR
        cz[j] = sum(coef * values[i] for i, coef in c_row.items()) % FR
    for k, wire in enumerate(_statement_wires(system)):
        az[system.num_constraints() + k] = values[wire]

    a_coeff = _ntt(az, inverse=True)
    b_coeff = _ntt(bz, inverse=True)
    c_coeff = _ntt(cz, inverse=True)

    g = mpz(_GENERATOR)
    gpow = [mpz(1)] * m
    for i in range(1, m):
        gpow[i] = gpow[i - 1] * g % FR
    a_ev = _ntt([c * gpow[i] % FR for i, c in enumerate(a_coeff)])
    b_ev = _ntt([c * gpow[i] % FR for i, c in enumerate(b_coeff)])
    c_ev = _ntt([c * gpow[i] % FR for i, c in enumerate(c_coeff)])

    z_inv = pow((pow(_GENERATOR, m, FR) - 1) % FR, FR - 2, FR)
    h_ev = [(a_ev[i] * b_ev[i] - c_ev[i]) % FR * z_inv % FR for i in range(m)]
    h_coeff = _ntt(h_ev, inverse=True)
    g_inv = pow(_GENERATOR, FR - 2, FR)
    gi = mpz(1)
    out = [0] * m
    for i in range(m):
        out[i] = h_coeff[i] * gi % FR
        gi = gi * g_inv % FR
    # degree <= m-2 by construction for satisfying witnesses
    return out[: m - 1]


def prove(
    pk: ProvingKey,
    system: ConstraintSystem,
    witness: WitnessAssignment,
    rng,
) -> Groth16Proof:
    """Standard Groth16 prover; refuses witnesses that do not satisfy."""
    if pk.digest != system.digest():
        raise KeyMismatch("proving key does not match this constraint system")
    ok, failing = is_satisfied(system, witness)
    if not ok:
        raise UnsatisfiedWitness(failing)

    values = [mpz(v) for v in witness.values]
    r = rng.randrange(FR)
    s = rng.randrange(FR)

    a_sum = msm(G1_OPS, pk.a_basis, values)
    b1_sum = msm(G1_OPS, pk.b1_basis, values)
    b2_sum = msm(G2_OPS, pk.b2_basis, values)

    a_point = bn.g1_add(bn.g1_add(pk.alpha1, a_sum), bn.g1_mul(pk.delta1, r))
    b1_point = bn.g1_add(bn.g1_add(pk.beta1, b1_sum), bn.g1_mul(pk.delta1, s))
    b2_point = bn.g2_add(bn.g2_add(pk.beta2, b2_sum), bn.g2_mul(pk.delta2, s))

    h_coeffs = _quotient_coeffs(system, values, pk.domain)
    k_sum = msm(G1_OPS, pk.k_basis, values)
    h_sum = msm(G1_OPS, pk.h_basis, h_coeffs)

    c_point = bn.g1_add(k_sum, h_sum)
    c_point = bn.g1_add(c_point, bn.g1_mul(a_point, s))
    c_point = bn.g1_add(c_point, bn.g1_mul(b1_point, r))
    c_point = bn.g1_add(c_point, bn.g1_neg(bn.g1_mul(pk.delta1, r * s % FR)))
    return Groth16Proof(a=a_point, b=b2_point, c=c_point)


def verify(vk: VerifyingKey, public_inputs: list[int], proof: Groth16Proof) -> bool:
    """Pairing check e(A,B) = e(alpha,beta) e(sum, gamma) e(C, delta)."""
    if len(public_inputs) != len(vk.ic) - 1:
        return False
    for pt in (proof.a, proof.c):
        if pt is None or not bn.g1_on_curve(pt):
            raise MalformedProof("proof G1 element not on curve")
    if proof.b is None or not bn.g2_on_curve(proof.b):
        raise MalformedProof("proof G2 element not on curve")
    if bn.g2_mul(proof.b, FR) is not None:
        raise MalformedProof("proof G2 element outside the prime-order subgroup")
    acc = G1_OPS.to_jac(_g1_mpz(vk.ic[0]))
    small = msm(G1_OPS, vk.ic[1:], public_inputs)
    if small is not None:
        acc = bn.g1_jac_add_affine(acc, _g1_mpz(small))
    statement_sum = bn.g1_from_jac(acc)
    result = bn.multi_pairing(
        [
            (bn.g1_neg(proof.a), proof.b),
            (vk.alpha1, vk.beta2),
            (statement_sum, vk.gamma2),
            (proof.c, vk.delta2),
        ]
    )
    return result == bn.FQ12_ONE
