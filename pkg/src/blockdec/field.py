"""Prime field configuration.

All matrix and subspace arithmetic in this package is exact arithmetic in
GF(p) for a configurable prime p.  The default prime is large enough that
accidental characteristic collisions in randomized tests are negligible,
while p**2 still fits comfortably in an int64 product.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_PRIME = 32003

_PRIME_LIMIT = 2**31


def is_prime(n: int) -> bool:
    """Trial-division primality check, adequate for p < 2**31."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field GF(p), p prime, p < 2**31."""

    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        if not isinstance(self.p, int):
            raise ValueError(f"field characteristic must be an integer, got {self.p!r}")
        if self.p >= _PRIME_LIMIT:
            raise ValueError(f"prime {self.p} too large (must be < 2**31)")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def normalize(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return (a * self.inv(b)) % self.p
