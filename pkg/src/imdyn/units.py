"""Nat/bit conversions. Entropies are kept in Nat internally."""

import math

LN2 = math.log(2.0)
BITS_PER_NAT = 1.0 / LN2


def nat_to_bit(x):
    return x / LN2


def bit_to_nat(x):
    return x * LN2


def both(nat):
    """Return ``{"nat": ..., "bit": ...}`` for a Nat quantity."""
    return {"nat": float(nat), "bit": float(nat) / LN2}
