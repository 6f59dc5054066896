"""Exact coefficient arithmetic over the three supported rings: Z, Q, Z/m.

Every ring here is commutative with unit, and every operation is exact:
integers are unbounded, rationals are ``fractions.Fraction``, and residues
mod m are canonical representatives in ``range(m)``.  Floating point is
never used.  Coefficient systems that are abelian groups but not one of
these three ring kinds are unsupported.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class RingError(ValueError):
    """Malformed ring descriptor or element."""


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class CoefficientRing:
    """A coefficient ring: integers, rationals, or integers mod m (m >= 2).

    Instances are immutable and hashable.  Elements are plain ``int``
    (Z and Z/m, the latter canonicalized into ``range(m)``) or
    ``Fraction`` (Q); the ring object supplies the arithmetic.
    """

    __slots__ = ("kind", "modulus")

    def __init__(self, kind: str, modulus: int | None = None):
        if kind not in ("Z", "Q", "Zmod"):
            raise RingError(f"unknown ring kind {kind!r}")
        if kind == "Zmod":
            if not isinstance(modulus, int) or modulus < 2:
                raise RingError("Zmod requires an integer modulus >= 2")
        elif modulus is not None:
            raise RingError(f"ring kind {kind} takes no modulus")
        self.kind = kind
        self.modulus = modulus

    @staticmethod
    def parse(descriptor: str) -> "CoefficientRing":
        """Parse 'Z', 'Q', or 'Zmod:<m>'."""
        if descriptor == "Z":
            return CoefficientRing("Z")
        if descriptor == "Q":
            return CoefficientRing("Q")
        if descriptor.startswith("Zmod:"):
            try:
                m = int(descriptor[5:])
            except ValueError:
                raise RingError(f"bad modulus in {descriptor!r}") from None
            return CoefficientRing("Zmod", m)
        raise RingError(f"unknown ring descriptor {descriptor!r}")

    def descriptor(self) -> str:
        if self.kind == "Zmod":
            return f"Zmod:{self.modulus}"
        return self.kind

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoefficientRing)
            and self.kind == other.kind
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.modulus))

    def __repr__(self) -> str:
        return f"CoefficientRing({self.descriptor()!r})"

    # --- element construction ---

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else (1 % self.modulus if self.kind == "Zmod" else 1)

    def canon(self, x):
        """Canonicalize an element given as int, Fraction, or string."""
        if isinstance(x, str):
            return self.elt_from_str(x)
        if self.kind == "Q":
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
            raise RingError(f"not a rational element: {x!r}")
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise RingError(f"non-integer element {x} for ring {self.descriptor()}")
            x = x.numerator
        if not isinstance(x, int) or isinstance(x, bool):
            raise RingError(f"not an integer element: {x!r}")
        return x % self.modulus if self.kind == "Zmod" else x

    # --- arithmetic ---

    def add(self, a, b):
        c = a + b
        return c % self.modulus if self.kind == "Zmod" else c

    def neg(self, a):
        return (-a) % self.modulus if self.kind == "Zmod" else -a

    def sub(self, a, b):
        c = a - b
        return c % self.modulus if self.kind == "Zmod" else c

    def mul(self, a, b):
        c = a * b
        return c % self.modulus if self.kind == "Zmod" else c

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        if self.kind == "Q":
            return a != 0
        if self.kind == "Z":
            return a in (1, -1)
        return gcd(a, self.modulus) == 1

    def unit_inverse(self, a):
        """Inverse of a unit."""
        if self.kind == "Q":
            if a == 0:
                raise RingError("0 is not a unit")
            return 1 / a
        if self.kind == "Z":
            if a not in (1, -1):
                raise RingError(f"{a} is not a unit in Z")
            return a
        g, s, _ = _ext_gcd(a % self.modulus, self.modulus)
        if g != 1:
            raise RingError(f"{a} is not a unit mod {self.modulus}")
        return s % self.modulus

    def exact_div(self, a, b):
        """A solution x of b*x = a, or None if none exists (b may be a zero divisor)."""
        if self.kind == "Q":
            if b == 0:
                return a if a == 0 else None
            return a / b
        if self.kind == "Z":
            if b == 0:
                return 0 if a == 0 else None
            if a % b == 0:
                return a // b
            return None
        m = self.modulus
        a %= m
        b %= m
        if b == 0:
            return 0 if a == 0 else None
        g = gcd(b, m)
        if a % g != 0:
            return None
        mg = m // g
        # reduce to an invertible problem mod m/g; least solution is canonical
        inv = pow((b // g) % mg, -1, mg) if mg > 1 else 0
        return ((a // g) * inv) % mg if mg > 1 else 0

    # --- Z/m specific helpers for normal forms ---

    def annihilator(self, a) -> int:
        """Generator of {x : x*a = 0} in Z/m (m // gcd(a, m))."""
        if self.kind != "Zmod":
            raise RingError("annihilator is only defined mod m")
        a %= self.modulus
        if a == 0:
            return 1 % self.modulus
        return self.modulus // gcd(a, self.modulus)

    def unit_part(self, a) -> int:
        """A unit u of Z/m with u*a = gcd(a, m) mod m."""
        if self.kind != "Zmod":
            raise RingError("unit_part is only defined mod m")
        m = self.modulus
        a %= m
        if a == 0:
            return 1 % m
        g = gcd(a, m)
        b = (a // g) % (m // g) if m // g > 1 else 0
        mg = m // g
        v = pow(b, -1, mg) if mg > 1 else 1
        # lift v to a unit mod m; some lift in v + (m/g)*range(g) is coprime to m
        for t in range(g):
            u = v + t * mg
            if gcd(u, m) == 1:
                return u % m
        raise RingError(f"no unit lift for {a} mod {m}")  # unreachable

    # --- string forms (exact, unbounded) ---

    def elt_to_str(self, a) -> str:
        if self.kind == "Q":
            if a.denominator == 1:
                return str(a.numerator)
            return f"{a.numerator}/{a.denominator}"
        return str(a)

    def elt_from_str(self, s: str):
        s = s.strip()
        try:
            if self.kind == "Q":
                return Fraction(s)
            return self.canon(int(s))
        except (ValueError, ZeroDivisionError):
            raise RingError(f"bad element string {s!r} for ring {self.descriptor()}") from None


Z = CoefficientRing("Z")
Q = CoefficientRing("Q")


def Zmod(m: int) -> CoefficientRing:
    return CoefficientRing("Zmod", m)
