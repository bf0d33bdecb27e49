"""Modular arithmetic helpers: primality, Legendre symbol, quadratic residues."""

from .errors import InvalidParameterError


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (desk-scale inputs)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def legendre_symbol(k: int, p: int) -> int:
    """Quadratic-residuosity indicator of k modulo an odd prime p.

    Returns +1 for nonzero quadratic residues, 0 when p divides k and -1
    otherwise, evaluated through Euler's criterion k^((p-1)/2) mod p.
    """
    if p == 2 or not is_prime(p):
        raise InvalidParameterError(f"p={p} is not an odd prime")
    e = pow(k % p, (p - 1) // 2, p)
    return -1 if e == p - 1 else e


def quadratic_residues(p: int) -> list[int]:
    """Sorted quadratic residues modulo the odd prime p, zero included."""
    if p == 2 or not is_prime(p):
        raise InvalidParameterError(f"p={p} is not an odd prime")
    return sorted({(k * k) % p for k in range((p + 1) // 2)})
