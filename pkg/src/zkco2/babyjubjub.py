"""Baby Jubjub: a twisted Edwards curve embedded over the proof field.

Curve equation a*x^2 + y^2 = 1 + d*x^2*y^2 with a = 168700, d = 168696.
Its base field equals the proof system's scalar field, which is what makes
signature verification affordable inside the constraint system.

Points are (x, y) int tuples; scalar multiplication runs in extended
coordinates internally to avoid per-step field inversions.  The subgroup
generator is derived deterministically (smallest viable y, canonical x,
cleared cofactor) and order-checked, rather than trusted as a literal.
"""

from __future__ import annotations

from functools import lru_cache

from .fields import P, finv

A = 168700
D = 168696

COFACTOR = 8
# Prime order of the cofactor-cleared subgroup; verified against the
# generator at derivation time.
SUBGROUP_ORDER = 2736030358979909402780800718157159386076813972158567259200215660948447373041

IDENTITY = (0, 1)

Point = tuple[int, int]


def on_curve(pt: Point) -> bool:
    x, y = pt
    if not (0 <= x < P and 0 <= y < P):
        return False
    x2 = x * x % P
    y2 = y * y % P
    return (A * x2 + y2) % P == (1 + D * x2 % P * y2) % P


def point_neg(pt: Point) -> Point:
    x, y = pt
    return ((P - x) % P, y)


def point_add(p1: Point, p2: Point) -> Point:
    """Affine unified addition; complete on Baby Jubjub (d is a non-square)."""
    x1, y1 = p1
    x2, y2 = p2
    prod = D * x1 % P * x2 % P * y1 % P * y2 % P
    x3 = (x1 * y2 + y1 * x2) % P * finv((1 + prod) % P) % P
    y3 = (y1 * y2 - A * x1 % P * x2) % P * finv((1 - prod) % P) % P
    return (x3, y3)

def point_double(pt: Point) -> Point:
    return point_add(pt, pt)


# Extended twisted Edwards coordinates (X:Y:T:Z), T = X*Y/Z; hwcd-2008
# unified formulas, no inversions until the final projection.

def _to_ext(pt: Point):
    x, y = pt
    return (x, y, x * y % P, 1)


def _from_ext(e) -> Point:
    x, y, _, z = e
    zi = finv(z)
    return (x * zi % P, y * zi % P)


def _ext_add(p, q):
    x1, y1, t1, z1 = p
    x2, y2, t2, z2 = q
    a = x1 * x2 % P
    b = y1 * y2 % P
    c = D * t1 % P * t2 % P
    dd = z1 * z2 % P
    e = ((x1 + y1) * (x2 + y2) - a - b) % P
    f = (dd - c) % P
    g = (dd + c) % P
    h = (b - A * a) % P
    return (e * f % P, g * h % P, e * h % P, f * g % P)


def _ext_double(p):
    x1, y1, _, z1 = p
    a = x1 * x1 % P
    b = y1 * y1 % P
    c = 2 * z1 * z1 % P
    d = A * a % P
    e = ((x1 + y1) * (x1 + y1) - a - b) % P
    g = (d + b) % P
    f = (g - c) % P
    h = (d - b) % P
    return (e * f % P, g * h % P, e * h % P, f * g % P)


_EXT_IDENTITY = (0, 1, 0, 1)


def scalar_mul(k: int, pt: Point) -> Point:
    """k*pt by plain double-and-add over the bits of k (k >= 0)."""
    if k < 0:
        raise ValueError("negative scalar")
    acc = _EXT_IDENTITY
    add = _to_ext(pt)
    while k:
        if k & 1:
            acc = _ext_add(acc, add)
        add = _ext_double(add)
        k >>= 1
    return _from_ext(acc)


def sqrt_mod(value: int) -> int | None:
    """Tonelli-Shanks square root in the proof field; None for non-residues."""
    value %= P
    if value == 0:
        return 0
    if pow(value, (P - 1) // 2, P) != 1:
        return None
    # P - 1 = 2**28 * s with s odd.
    s = P - 1
    e = 0
    while s % 2 == 0:
        s //= 2
        e += 1
    # Any quadratic non-residue works; 5 generates the multiplicative group.
    z = pow(5, s, P)
    x = pow(value, (s + 1) // 2, P)
    b = pow(value, s, P)
    while b != 1:
        m = 0
        t = b
        while t != 1:
            t = t * t % P
            m += 1
        z2 = pow(z, 1 << (e - m - 1), P)
        x = x * z2 % P
        z = z2 * z2 % P
        b = b * z % P
        e = m
    return x


@lru_cache(maxsize=None)
def base_point() -> Point:
    """Deterministic prime-order subgroup generator.

    Scans y = 2, 3, ... for the first curve point, takes the numerically
    smaller x root, clears the cofactor, and insists the result has order
    SUBGROUP_ORDER exactly.
    """
    y = 2
    while True:
        num = (y * y - 1) % P
        den = (D * y % P * y - A) % P
        x = sqrt_mod(num * finv(den) % P)
        if x is not None:
            x = min(x, P - x)
            candidate = scalar_mul(COFACTOR, (x, y))
            if candidate != IDENTITY:
                if scalar_mul(SUBGROUP_ORDER, candidate) != IDENTITY:
                    raise AssertionError("subgroup order constant is wrong")
                return candidate
        y += 1


def in_subgroup(pt: Point) -> bool:
    return on_curve(pt) and scalar_mul(SUBGROUP_ORDER, pt) == IDENTITY
