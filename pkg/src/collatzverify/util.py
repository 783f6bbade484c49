"""Decimal I/O helpers for very large integers.

CPython's int<->str conversion is quadratic and (since the 3.10 security
backport) capped by default around 4300 digits.  gmpy2 converts in
subquadratic time with no cap, so all decimal parsing/printing of
potentially huge operands goes through it.
"""

from __future__ import annotations

import gmpy2


def decimal_digits(n: int) -> int:
    """Number of decimal digits of n >= 1."""
    if n < 1:
        raise ValueError("decimal_digits requires n >= 1")
    return int(gmpy2.num_digits(gmpy2.mpz(n), 10))


def parse_decimal(text: str) -> int:
    """Parse a (possibly huge) positive decimal integer, whitespace-tolerant."""
    cleaned = "".join(text.split())
    if not cleaned or not cleaned.isdigit():
        raise ValueError("input is not a positive decimal integer")
    value = int(gmpy2.mpz(cleaned, 10))
    if value < 1:
        raise ValueError("value must be >= 1")
    return value


def format_decimal(n: int) -> str:
    """Decimal string of n, safe for huge operands."""
    return gmpy2.mpz(n).digits(10)
