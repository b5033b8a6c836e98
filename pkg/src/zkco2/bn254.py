"""BN254 pairing curve: tower fields, group arithmetic, optimal ate pairing.

Everything the succinct proof backend needs, self-contained: Fq / Fq2 /
Fq6 / Fq12 tower arithmetic on plain tuples, affine+Jacobian point ops for
G1 (over Fq) and G2 (over Fq2, the sextic twist), and the optimal ate
pairing with a multi-Miller-loop entry point so a verification equation
costs a single final exponentiation.

The curve: y^2 = x^3 + 3 over Fq, |G1| = R (the proof field modulus used
by the constraint system).  Tower: Fq2 = Fq[u]/(u^2+1), Fq6 = Fq2[v]/(v^3 - xi)
with xi = 9 + u, Fq12 = Fq6[w]/(w^2 - v).  Twist (D-type): y^2 = x^3 + 3/xi,
untwisting (x, y) -> (x*w^2, y*w^3).

Group generators are the conventional ones; their order and curve
membership are asserted at import, so a transcription error cannot pass
silently.
"""

from __future__ import annotations

from .fields import P as R  # scalar field / proof field

# Base field.
Q = 21888242871839275222246405745257275088696311157297823662689037894645226208583

# BN parameter x: Q = 36x^4 + 36x^3 + 24x^2 + 6x + 1, R = 36x^4 + 36x^3 + 18x^2 + 6x + 1.
BN_X = 4965661367192848881
ATE_LOOP = 6 * BN_X + 2

assert Q == 36 * BN_X**4 + 36 * BN_X**3 + 24 * BN_X**2 + 6 * BN_X + 1
assert R == 36 * BN_X**4 + 36 * BN_X**3 + 18 * BN_X**2 + 6 * BN_X + 1

B1 = 3

Fq2 = tuple[int, int]

XI: Fq2 = (9, 1)


# --- Fq2 ---------------------------------------------------------------------


def fq2_add(a: Fq2, b: Fq2) -> Fq2:
    return ((a[0] + b[0]) % Q, (a[1] + b[1]) % Q)


def fq2_sub(a: Fq2, b: Fq2) -> Fq2:
    return ((a[0] - b[0]) % Q, (a[1] - b[1]) % Q)


def fq2_neg(a: Fq2) -> Fq2:
    return ((-a[0]) % Q, (-a[1]) % Q)


def fq2_mul(a: Fq2, b: Fq2) -> Fq2:
    t0 = a[0] * b[0]
    t1 = a[1] * b[1]
    t2 = (a[0] + a[1]) * (b[0] + b[1])
    return ((t0 - t1) % Q, (t2 - t0 - t1) % Q)


def fq2_sqr(a: Fq2) -> Fq2:
    t = a[0] * a[1]
    return ((a[0] + a[1]) * (a[0] - a[1]) % Q, (t + t) % Q)


def fq2_scalar(a: Fq2, k: int) -> Fq2:
    return (a[0] * k % Q, a[1] * k % Q)


def fq2_conj(a: Fq2) -> Fq2:
    return (a[0], (-a[1]) % Q)


def fq2_inv(a: Fq2) -> Fq2:
    d = pow(a[0] * a[0] + a[1] * a[1], Q - 2, Q)
    return (a[0] * d % Q, -a[1] * d % Q)


def fq2_mul_xi(a: Fq2) -> Fq2:
    """Multiply by xi = 9 + u."""
    return ((9 * a[0] - a[1]) % Q, (a[0] + 9 * a[1]) % Q)


def fq2_pow(a: Fq2, e: int) -> Fq2:
    result: Fq2 = (1, 0)
    base = a
    while e:
        if e & 1:
            result = fq2_mul(result, base)
        base = fq2_sqr(base)
        e >>= 1
    return result


FQ2_ZERO: Fq2 = (0, 0)
FQ2_ONE: Fq2 = (1, 0)

# --- Fq6 = Fq2[v]/(v^3 - xi) --------------------------------------------------

Fq6 = tuple[Fq2, Fq2, Fq2]

FQ6_ZERO: Fq6 = (FQ2_ZERO, FQ2_ZERO, FQ2_ZERO)
FQ6_ONE: Fq6 = (FQ2_ONE, FQ2_ZERO, FQ2_ZERO)


def fq6_add(a: Fq6, b: Fq6) -> Fq6:
    return (fq2_add(a[0], b[0]), fq2_add(a[1], b[1]), fq2_add(a[2], b[2]))


def fq6_sub(a: Fq6, b: Fq6) -> Fq6:
    return (fq2_sub(a[0], b[0]), fq2_sub(a[1], b[1]), fq2_sub(a[2], b[2]))


def fq6_neg(a: Fq6) -> Fq6:
    return (fq2_neg(a[0]), fq2_neg(a[1]), fq2_neg(a[2]))


def fq6_mul(a: Fq6, b: Fq6) -> Fq6:
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0 = fq2_mul(a0, b0)
    t1 = fq2_mul(a1, b1)
    t2 = fq2_mul(a2, b2)
    c0 = fq2_add(t0, fq2_mul_xi(fq2_sub(fq2_mul(fq2_add(a1, a2), fq2_add(b1, b2)), fq2_add(t1, t2))))
    c1 = fq2_add(
        fq2_sub(fq2_mul(fq2_add(a0, a1), fq2_add(b0, b1)), fq2_add(t0, t1)),
        fq2_mul_xi(t2),
    )
    c2 = fq2_add(fq2_sub(fq2_mul(fq2_add(a0, a2), fq2_add(b0, b2)), fq2_add(t0, t2)), t1)
    return (c0, c1, c2)


def fq6_sqr(a: Fq6) -> Fq6:
    return fq6_mul(a, a)


def fq6_scalar(a: Fq6, k: Fq2) -> Fq6:
    return (fq2_mul(a[0], k), fq2_mul(a[1], k), fq2_mul(a[2], k))


def fq6_mul_by_v(a: Fq6) -> Fq6:
    return (fq2_mul_xi(a[2]), a[0], a[1])


def fq6_inv(a: Fq6) -> Fq6:
    a0, a1, a2 = a
    c0 = fq2_sub(fq2_sqr(a0), fq2_mul_xi(fq2_mul(a1, a2)))
    c1 = fq2_sub(fq2_mul_xi(fq2_sqr(a2)), fq2_mul(a0, a1))
    c2 = fq2_sub(fq2_sqr(a1), fq2_mul(a0, a2))
    t = fq2_add(
        fq2_mul(a0, c0),
        fq2_mul_xi(fq2_add(fq2_mul(a2, c1), fq2_mul(a1, c2))),
    )
    ti = fq2_inv(t)
    return (fq2_mul(c0, ti), fq2_mul(c1, ti), fq2_mul(c2, ti))


# --- Fq12 = Fq6[w]/(w^2 - v) ---------------------------------------------------

Fq12 = tuple[Fq6, Fq6]

FQ12_ONE: Fq12 = (FQ6_ONE, FQ6_ZERO)


def fq12_mul(a: Fq12, b: Fq12) -> Fq12:
    a0, a1 = a
    b0, b1 = b
    t0 = fq6_mul(a0, b0)
    t1 = fq6_mul(a1, b1)
    c1 = fq6_sub(fq6_mul(fq6_add(a0, a1), fq6_add(b0, b1)), fq6_add(t0, t1))
    return (fq6_add(t0, fq6_mul_by_v(t1)), c1)


def fq12_sqr(a: Fq12) -> Fq12:
    a0, a1 = a
    t = fq6_mul(a0, a1)
    c0 = fq6_sub(
        fq6_mul(fq6_add(a0, a1), fq6_add(a0, fq6_mul_by_v(a1))),
        fq6_add(t, fq6_mul_by_v(t)),
    )
    return (c0, fq6_add(t, t))


def fq12_conj(a: Fq12) -> Fq12:
    return (a[0], fq6_neg(a[1]))


def fq12_inv(a: Fq12) -> Fq12:
    a0, a1 = a
    d = fq6_inv(fq6_sub(fq6_sqr(a0), fq6_mul_by_v(fq6_sqr(a1))))
    return (fq6_mul(a0, d), fq6_neg(fq6_mul(a1, d)))


def fq12_pow(a: Fq12, e: int) -> Fq12:
    result = FQ12_ONE
    base = a
    while e:
        if e & 1:
            result = fq12_mul(result, base)
        base = fq12_sqr(base)
        e >>= 1
    return result


# q-power Frobenius on the tower: conjugate every Fq2 coefficient, then fix
# the basis factors w^k by gamma^k with gamma = xi^((q-1)/6).
_GAMMA = [fq2_pow(XI, i * (Q - 1) // 6) for i in range(6)]


def fq12_frobenius(a: Fq12) -> Fq12:
    (x0, y0, z0), (x1, y1, z1) = a
    c0 = (fq2_conj(x0), fq2_mul(fq2_conj(y0), _GAMMA[2]), fq2_mul(fq2_conj(z0), _GAMMA[4]))
    c1 = (
        fq2_mul(fq2_conj(x1), _GAMMA[1]),
        fq2_mul(fq2_conj(y1), _GAMMA[3]),
        fq2_mul(fq2_conj(z1), _GAMMA[5]),
    )
    return (c0, c1)


# --- G1 ------------------------------------------------------------------------
#
# Affine points are (x, y) int pairs, None for infinity.  Jacobian triples
# (X, Y, Z) with Z=0 for infinity feed the hot multi-scalar paths.

G1Affine = tuple[int, int] | None
G1_GEN: G1Affine = (1, 2)


def g1_on_curve(pt: G1Affine) -> bool:
    if pt is None:
        return True
    x, y = pt
    return 0 <= x < Q and 0 <= y < Q and (y * y - x * x * x - B1) % Q == 0


def g1_neg(pt: G1Affine) -> G1Affine:
    if pt is None:
        return None
    return (pt[0], (-pt[1]) % Q)


def g1_to_jac(pt: G1Affine):
    if pt is None:
        return (1, 1, 0)
    return (pt[0], pt[1], 1)


def g1_from_jac(j) -> G1Affine:
    x, y, z = j
    if z == 0:
        return None
    zi = pow(z, Q - 2, Q)
    zi2 = zi * zi % Q
    return (x * zi2 % Q, y * zi2 % Q * zi % Q)


def g1_jac_double(p):
    x1, y1, z1 = p
    if z1 == 0 or y1 == 0:
        return (1, 1, 0)
    a = x1 * x1 % Q
    b = y1 * y1 % Q
    c = b * b % Q
    t = (x1 + b) % Q
    d = 2 * (t * t - a - c) % Q
    e = 3 * a % Q
    f = e * e % Q
    x3 = (f - 2 * d) % Q
    y3 = (e * (d - x3) - 8 * c) % Q
    z3 = 2 * y1 * z1 % Q
    return (x3, y3, z3)


def g1_jac_add(p, q):
    x1, y1, z1 = p
    x2, y2, z2 = q
    if z1 == 0:
        return q
    if z2 == 0:
        return p
    z1z1 = z1 * z1 % Q
    z2z2 = z2 * z2 % Q
    u1 = x1 * z2z2 % Q
    u2 = x2 * z1z1 % Q
    s1 = y1 * z2 % Q * z2z2 % Q
    s2 = y2 * z1 % Q * z1z1 % Q
    h = (u2 - u1) % Q
    rr = (s2 - s1) % Q
    if h == 0:
        if rr == 0:
            return g1_jac_double(p)
        return (1, 1, 0)
    hh = h * h % Q
    i = 4 * hh % Q
    j = h * i % Q
    rr = 2 * rr % Q
    v = u1 * i % Q
    x3 = (rr * rr - j - 2 * v) % Q
    y3 = (rr * (v - x3) - 2 * s1 * j) % Q
    z3 = ((z1 + z2) * (z1 + z2) - z1z1 - z2z2) % Q * h % Q
    return (x3, y3, z3)


def g1_jac_add_affine(p, a: G1Affine):
    """Mixed addition p (Jacobian) + a (affine)."""
    if a is None:
        return p
    x1, y1, z1 = p
    if z1 == 0:
        return (a[0], a[1], 1)
    x2, y2 = a
    z1z1 = z1 * z1 % Q
    u2 = x2 * z1z1 % Q
    s2 = y2 * z1 % Q * z1z1 % Q
    h = (u2 - x1) % Q
    rr = (s2 - y1) % Q
    if h == 0:
        if rr == 0:
            return g1_jac_double(p)
        return (1, 1, 0)
    hh = h * h % Q
    i = 4 * hh % Q
    j = h * i % Q
    rr = 2 * rr % Q
    v = x1 * i % Q
    x3 = (rr * rr - j - 2 * v) % Q
    y3 = (rr * (v - x3) - 2 * y1 * j) % Q
    z3 = (z1 + h) % Q
    z3 = (z3 * z3 - z1z1 - hh) % Q
    return (x3, y3, z3)


def g1_mul(pt: G1Affine, k: int) -> G1Affine:
    """k*pt for k >= 0; deliberately no mod-R reduction so that order
    checks like g1_mul(pt, R) actually exercise the group order."""
    if k < 0:
        raise ValueError("negative scalar")
    acc = (1, 1, 0)
    add = g1_to_jac(pt)
    while k:
        if k & 1:
            acc = g1_jac_add(acc, add)
        add = g1_jac_double(add)
        k >>= 1
    return g1_from_jac(acc)


def g1_add(a: G1Affine, b: G1Affine) -> G1Affine:
    return g1_from_jac(g1_jac_add(g1_to_jac(a), g1_to_jac(b)))


# --- G2 (twist over Fq2) --------------------------------------------------------

G2Affine = tuple[Fq2, Fq2] | None

B2: Fq2 = fq2_mul((B1, 0), fq2_inv(XI))

G2_GEN: G2Affine = (
    (
        10857046999023057135944570762232829481370756359578518086990519993285655852781,
        11559732032986387107991004021392285783925812861821192530917403151452391805634,
    ),
    (
        8495653923123431417604973247489272438418190587263600148770280649306958101930,
        4082367875863433681332203403145435568316851327593401208105741076214120093531,
    ),
)


def g2_on_curve(pt: G2Affine) -> bool:
    if pt is None:
        return True
    x, y = pt
    return fq2_sub(fq2_sqr(y), fq2_add(fq2_mul(fq2_sqr(x), x), B2)) == FQ2_ZERO


def g2_neg(pt: G2Affine) -> G2Affine:
    if pt is None:
        return None
    return (pt[0], fq2_neg(pt[1]))


def g2_to_jac(pt: G2Affine):
    if pt is None:
        return (FQ2_ONE, FQ2_ONE, FQ2_ZERO)
    return (pt[0], pt[1], FQ2_ONE)


def g2_from_jac(j) -> G2Affine:
    x, y, z = j
    if z == FQ2_ZERO:
        return None
    zi = fq2_inv(z)
    zi2 = fq2_sqr(zi)
    return (fq2_mul(x, zi2), fq2_mul(fq2_mul(y, zi2), zi))


def g2_jac_double(p):
    x1, y1, z1 = p
    if z1 == FQ2_ZERO or y1 == FQ2_ZERO:
        return (FQ2_ONE, FQ2_ONE, FQ2_ZERO)
    a = fq2_sqr(x1)
    b = fq2_sqr(y1)
    c = fq2_sqr(b)
    t = fq2_add(x1, b)
    d = fq2_scalar(fq2_sub(fq2_sub(fq2_sqr(t), a), c), 2)
    e = fq2_scalar(a, 3)
    f = fq2_sqr(e)
    x3 = fq2_sub(f, fq2_scalar(d, 2))
    y3 = fq2_sub(fq2_mul(e, fq2_sub(d, x3)), fq2_scalar(c, 8))
    z3 = fq2_scalar(fq2_mul(y1, z1), 2)
    return (x3, y3, z3)


def g2_jac_add(p, q):
    x1, y1, z1 = p
    x2, y2, z2 = q
    if z1 == FQ2_ZERO:
        return q
    if z2 == FQ2_ZERO:
        return p
    z1z1 = fq2_sqr(z1)
    z2z2 = fq2_sqr(z2)
    u1 = fq2_mul(x1, z2z2)
    u2 = fq2_mul(x2, z1z1)
    s1 = fq2_mul(fq2_mul(y1, z2), z2z2)
    s2 = fq2_mul(fq2_mul(y2, z1), z1z1)
    h = fq2_sub(u2, u1)
    rr = fq2_sub(s2, s1)
    if h == FQ2_ZERO:
        if rr == FQ2_ZERO:
            return g2_jac_double(p)
        return (FQ2_ONE, FQ2_ONE, FQ2_ZERO)
    hh = fq2_sqr(h)
    i = fq2_scalar(hh, 4)
    j = fq2_mul(h, i)
    rr = fq2_scalar(rr, 2)
    v = fq2_mul(u1, i)
    x3 = fq2_sub(fq2_sub(fq2_sqr(rr), j), fq2_scalar(v, 2))
    y3 = fq2_sub(fq2_mul(rr, fq2_sub(v, x3)), fq2_scalar(fq2_mul(s1, j), 2))
    z3 = fq2_mul(fq2_sub(fq2_sub(fq2_sqr(fq2_add(z1, z2)), z1z1), z2z2), h)
    return (x3, y3, z3)


def g2_jac_add_affine(p, a: G2Affine):
    if a is None:
        return p
    x1, y1, z1 = p
    if z1 == FQ2_ZERO:
        return (a[0], a[1], FQ2_ONE)
    x2, y2 = a
    z1z1 = fq2_sqr(z1)
    u2 = fq2_mul(x2, z1z1)
    s2 = fq2_mul(fq2_mul(y2, z1), z1z1)
    h = fq2_sub(u2, x1)
    rr = fq2_sub(s2, y1)
    if h == FQ2_ZERO:
        if rr == FQ2_ZERO:
            return g2_jac_double(p)
        return (FQ2_ONE, FQ2_ONE, FQ2_ZERO)
    hh = fq2_sqr(h)
    i = fq2_scalar(hh, 4)
    j = fq2_mul(h, i)
    rr = fq2_scalar(rr, 2)
    v = fq2_mul(x1, i)
    x3 = fq2_sub(fq2_sub(fq2_sqr(rr), j), fq2_scalar(v, 2))
    y3 = fq2_sub(fq2_mul(rr, fq2_sub(v, x3)), fq2_scalar(fq2_mul(y1, j), 2))
    z3 = fq2_sub(fq2_sub(fq2_sqr(fq2_add(z1, h)), z1z1), hh)
    return (x3, y3, z3)


def g2_mul(pt: G2Affine, k: int) -> G2Affine:
    if k < 0:
        raise ValueError("negative scalar")
    acc = (FQ2_ONE, FQ2_ONE, FQ2_ZERO)
    add = g2_to_jac(pt)
    while k:
        if k & 1:
            acc = g2_jac_add(acc, add)
        add = g2_jac_double(add)
        k >>= 1
    return g2_from_jac(acc)


def g2_add(a: G2Affine, b: G2Affine) -> G2Affine:
    return g2_from_jac(g2_jac_add(g2_to_jac(a), g2_to_jac(b)))


# --- pairing ---------------------------------------------------------------------
#
# Lines through untwisted G2 points, evaluated at a G1 point, occupy the
# sparse Fq12 shape ((a, 0, 0), (b, c, 0)); multiplying f by that shape
# directly saves about half of a general Fq12 multiplication.


def _line_fq12(a: Fq2, b: Fq2, c: Fq2) -> Fq12:
    return ((a, FQ2_ZERO, FQ2_ZERO), (b, c, FQ2_ZERO))


def _mul_by_line(f: Fq12, a: Fq2, b: Fq2, c: Fq2) -> Fq12:
    return fq12_mul(f, _line_fq12(a, b, c))


def _line_double(t: G2Affine, p: tuple[int, int]) -> tuple[Fq2, Fq2, Fq2, G2Affine]:
    """Tangent line at t, evaluated at p; returns line parts and 2t."""
    x, y = t
    xp, yp = p
    slope = fq2_mul(fq2_scalar(fq2_sqr(x), 3), fq2_inv(fq2_scalar(y, 2)))
    x3 = fq2_sub(fq2_sqr(slope), fq2_scalar(x, 2))
    y3 = fq2_sub(fq2_mul(slope, fq2_sub(x, x3)), y)
    a = (yp, 0)
    b = fq2_scalar(fq2_neg(slope), xp)
    c = fq2_sub(fq2_mul(slope, x), y)
    return a, b, c, (x3, y3)


def _line_add(t: G2Affine, q: G2Affine, p: tuple[int, int]) -> tuple[Fq2, Fq2, Fq2, G2Affine]:
    """Chord line through t and q, evaluated at p; returns line parts and t+q."""
    x1, y1 = t
    x2, y2 = q
    xp, yp = p
    slope = fq2_mul(fq2_sub(y2, y1), fq2_inv(fq2_sub(x2, x1)))
    x3 = fq2_sub(fq2_sub(fq2_sqr(slope), x1), x2)
    y3 = fq2_sub(fq2_mul(slope, fq2_sub(x1, x3)), y1)
    a = (yp, 0)
    b = fq2_scalar(fq2_neg(slope), xp)
    c = fq2_sub(fq2_mul(slope, x1), y1)
    return a, b, c, (x3, y3)


# Twist-coordinate Frobenius constants for the two extra ate steps.
_TW_FROB_X = fq2_pow(XI, (Q - 1) // 3)
_TW_FROB_Y = fq2_pow(XI, (Q - 1) // 2)
_TW_FROB_X2 = fq2_pow(XI, (Q * Q - 1) // 3)
_TW_FROB_Y2 = fq2_pow(XI, (Q * Q - 1) // 2)


def _g2_frobenius(pt: G2Affine) -> G2Affine:
    x, y = pt
    return (fq2_mul(fq2_conj(x), _TW_FROB_X), fq2_mul(fq2_conj(y), _TW_FROB_Y))


def _g2_frobenius2(pt: G2Affine) -> G2Affine:
    x, y = pt
    return (fq2_mul(x, _TW_FROB_X2), fq2_mul(y, _TW_FROB_Y2))


def miller_loop(p: G1Affine, q: G2Affine) -> Fq12:
    """Optimal-ate Miller value for (p, q)."""
    if p is None or q is None:
        return FQ12_ONE
    f = FQ12_ONE
    t = q
    bits = bin(ATE_LOOP)[3:]
    for bit in bits:
        f = fq12_sqr(f)
        a, b, c, t = _line_double(t, p)
        f = _mul_by_line(f, a, b, c)
        if bit == "1":
            a, b, c, t = _line_add(t, q, p)
            f = _mul_by_line(f, a, b, c)
    q1 = _g2_frobenius(q)
    q2 = g2_neg(_g2_frobenius2(q))
    a, b, c, t = _line_add(t, q1, p)
    f = _mul_by_line(f, a, b, c)
    a, b, c, t = _line_add(t, q2, p)
    f = _mul_by_line(f, a, b, c)
    return f


_HARD_EXP = (Q**4 - Q**2 + 1) // R
assert (Q**4 - Q**2 + 1) % R == 0


def final_exponentiation(f: Fq12) -> Fq12:
    """f^((q^12-1)/r): easy part by conjugation/Frobenius, hard part by a
    plain square-and-multiply (correctness over speed)."""
    # easy: f^(q^6 - 1) then ^(q^2 + 1)
    f = fq12_mul(fq12_conj(f), fq12_inv(f))
    f = fq12_mul(fq12_frobenius(fq12_frobenius(f)), f)
    # hard: ^((q^4 - q^2 + 1) / r)
    return fq12_pow(f, _HARD_EXP)


def pairing(p: G1Affine, q: G2Affine) -> Fq12:
    return final_exponentiation(miller_loop(p, q))


def multi_pairing(pairs: list[tuple[G1Affine, G2Affine]]) -> Fq12:
    """Product of pairings e(p_i, q_i), with one shared final exponentiation.

    Final exponentiation distributes over products, so multiplying the raw
    Miller values first is equivalent to multiplying the full pairings.
    """
    f = FQ12_ONE
    for p, q in pairs:
        f = fq12_mul(f, miller_loop(p, q))
    return final_exponentiation(f)


# --- import-time sanity ------------------------------------------------------

assert g1_on_curve(G1_GEN)
assert g1_mul(G1_GEN, R) is None
assert g2_on_curve(G2_GEN)
assert g2_mul(G2_GEN, R) is None
