"""Verifiable, privacy-preserving carbon emissions claims for data centres.

A data-centre operator (the prover) computes a customer's emissions from
signed meter readings and supplier carbon-intensity attestations, then emits
a succinct zero-knowledge proof of the computation.  A customer (the
verifier) checks the claim using only the public bundle fields and the
certificate-authority trust-anchor keys.
"""

__version__ = "0.1.0"
