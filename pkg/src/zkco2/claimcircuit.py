"""The two production circuits: per-customer claim and share completeness.

The claim circuit proves, in one statement: both certificate chains verify
under the public CA anchor keys, the meter reading and intensity record are
signed over the public reporting period, and the public emissions figure is
exactly floor(I*X*C/1e9).  Everything listed in PUBLIC_LAYOUT is public;
every other wire (I, X, C, intermediate keys, signatures) stays private.

The completeness circuit proves that n hiding share commitments open to
shares summing to exactly 10**6 ppm.
"""

from __future__ import annotations

from functools import lru_cache

from . import gadgets, sigchain
from .gadgets import GadgetPoint
from .quantities import EMISSIONS_DIVISOR, SHARE_BOUND
from .r1cs import LC, CircuitBuilder, ConstraintSystem

LAYOUT_VERSION = 1

# Normative public-input order (after the constant-one wire).
PUBLIC_LAYOUT = (
    "customer_emission",
    "ca_m_pk_x",
    "ca_m_pk_y",
    "ca_es_pk_x",
    "ca_es_pk_y",
    "period_start",
    "period_end",
    "datacentre_id",
    "customer_id",
)

# Private prover inputs, by name, as fed to synthesize_witness.
PRIVATE_INPUTS = (
    "carbon_intensity",
    "total_consumption",
    "customer_share",
    "meter_id",
    "region_id",
    "meter_pk_x",
    "meter_pk_y",
    "manufacturer_pk_x",
    "manufacturer_pk_y",
    "supplier_pk_x",
    "supplier_pk_y",
    "manufacturer_cert_sig_r_x",
    "manufacturer_cert_sig_r_y",
    "manufacturer_cert_sig_s",
    "meter_cert_sig_r_x",
    "meter_cert_sig_r_y",
    "meter_cert_sig_s",
    "reading_sig_r_x",
    "reading_sig_r_y",
    "reading_sig_s",
    "supplier_cert_sig_r_x",
    "supplier_cert_sig_r_y",
    "supplier_cert_sig_s",
    "intensity_sig_r_x",
    "intensity_sig_r_y",
    "intensity_sig_s",
)


def _input_point(b: CircuitBuilder, x_name: str, y_name: str,
                 visibility: str = "private") -> GadgetPoint:
    x = b.alloc_input(x_name, visibility)
    y = b.alloc_input(y_name, visibility)
    return LC.of(x), LC.of(y)


def _input_sig(b: CircuitBuilder, prefix: str) -> tuple[GadgetPoint, LC]:
    r = _input_point(b, f"{prefix}_r_x", f"{prefix}_r_y")
    s = b.alloc_input(f"{prefix}_s")
    return r, LC.of(s)


def _cert_gadget(b: CircuitBuilder, issuer_pk: GadgetPoint, subject_pk: GadgetPoint,
                 subject_role: str, sig_prefix: str) -> None:
    """Verify issuer's signature over sponge(cert domain, role, subject key)."""
    msg = gadgets.gadget_sponge(
        b,
        sigchain.DOMAIN_CERT,
        [LC.of(sigchain.ROLE_TAGS[subject_role]), subject_pk[0], subject_pk[1]],
    )
    sig_r, sig_s = _input_sig(b, sig_prefix)
    gadgets.gadget_sig_verify(b, issuer_pk, [msg], sig_r, sig_s, sigchain.DOMAIN_CERT)


def build_claim_circuit() -> ConstraintSystem:
    """Deterministic build of the emissions-claim constraint system."""
    b = CircuitBuilder()

    # Public inputs, in layout order.  The emissions wire's value is
    # recomputed from the private operands, never taken on trust; its hint
    # is attached once the operand wires exist.
    ce = b.alloc("public", name="customer_emission")
    ca_m = _input_point(b, "ca_m_pk_x", "ca_m_pk_y", visibility="public")
    ca_es = _input_point(b, "ca_es_pk_x", "ca_es_pk_y", visibility="public")
    period_start = LC.of(b.alloc_input("period_start", visibility="public"))
    period_end = LC.of(b.alloc_input("period_end", visibility="public"))
    b.alloc_input("datacentre_id", visibility="public")
    b.alloc_input("customer_id", visibility="public")

    intensity_var = b.alloc_input("carbon_intensity")
    energy_var = b.alloc_input("total_consumption")
    share_var = b.alloc_input("customer_share")
    intensity, energy, share = LC.of(intensity_var), LC.of(energy_var), LC.of(share_var)
    meter_id = LC.of(b.alloc_input("meter_id"))
    region_id = LC.of(b.alloc_input("region_id"))
    meter_pk = _input_point(b, "meter_pk_x", "meter_pk_y")
    manufacturer_pk = _input_point(b, "manufacturer_pk_x", "manufacturer_pk_y")
    supplier_pk = _input_point(b, "supplier_pk_x", "supplier_pk_y")

    def product(get, ii=intensity_var.index, xi=energy_var.index, ci=share_var.index):
        return get(ii) * get(xi) * get(ci)

    b.hints.append((ce.index, ("compute", lambda get: product(get) // EMISSIONS_DIVISOR)))
    remainder = LC.of(
        b.alloc_computed(lambda get: product(get) % EMISSIONS_DIVISOR)
    )
    gadgets.gadget_emissions(b, intensity, energy, share, LC.of(ce), remainder)

    # Meter chain: CA-M -> manufacturer -> meter -> signed reading.
    _cert_gadget(b, ca_m, manufacturer_pk, "manufacturer", "manufacturer_cert_sig")
    _cert_gadget(b, manufacturer_pk, meter_pk, "meter", "meter_cert_sig")
    reading_r, reading_s = _input_sig(b, "reading_sig")
    gadgets.gadget_sig_verify(
        b,
        meter_pk,
        [meter_id, period_start, period_end, energy],
        reading_r,
        reading_s,
        sigchain.DOMAIN_METER,
    )

    # Supplier chain: CA-ES -> supplier -> signed intensity record.
    _cert_gadget(b, ca_es, supplier_pk, "supplier", "supplier_cert_sig")
    intensity_r, intensity_s = _input_sig(b, "intensity_sig")
    gadgets.gadget_sig_verify(
        b,
        supplier_pk,
        [region_id, period_start, period_end, intensity],
        intensity_r,
        intensity_s,
        sigchain.DOMAIN_INTENSITY,
    )

    system = b.finalize()
    assert tuple(system.public_names) == PUBLIC_LAYOUT
    return system


@lru_cache(maxsize=None)
def claim_circuit() -> ConstraintSystem:
    """Build-once cache; the build is deterministic, so every process sees
    the identical system and digest."""
    return build_claim_circuit()


def build_completeness_circuit(n: int) -> ConstraintSystem:
    """Commitments to n shares that provably sum to exactly 100% (1e6 ppm)."""
    if n < 1:
        raise ValueError("completeness circuit needs at least one customer")
    b = CircuitBuilder()
    commitments = [
        LC.of(b.alloc_input(f"commitment_{k}", visibility="public")) for k in range(n)
    ]
    total = LC()
    for k in range(n):
        customer_id = LC.of(b.alloc_input(f"customer_id_{k}"))
        share = LC.of(b.alloc_input(f"share_{k}"))
        blinding = LC.of(b.alloc_input(f"blinding_{k}"))
        recomputed = gadgets.gadget_sponge(
            b, sigchain.DOMAIN_SHARE, [customer_id, share, blinding]
        )
        b.enforce_zero(recomputed - commitments[k])
        gadgets.gadget_range_lt(b, share, SHARE_BOUND + 1)
        total = total + share
    b.enforce_zero(total - SHARE_BOUND)
    return b.finalize()


@lru_cache(maxsize=None)
def completeness_circuit(n: int) -> ConstraintSystem:
    return build_completeness_circuit(n)
