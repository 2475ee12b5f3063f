"""Polynomials over GF(2) packed into Python integers (bit i is the coefficient of X^i)."""
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

try:
    from src.utils import ParameterError, parse_hex, prime_factors, to_hex
except ImportError:
    from utils import ParameterError, parse_hex, prime_factors, to_hex


MAX_MODULUS_DEGREE: int = 1024


# Integer kernels. field.py calls these directly on element values.


def clmul(a: int, b: int) -> int:
    """Carry-less (shift-XOR) product of two packed polynomials."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def clsquare(a: int) -> int:
    # squaring only spreads the bits: (sum a_i X^i)^2 = sum a_i X^{2i}
    if a == 0:
        return 0
    return int("0".join(format(a, "b")), 2)


def int_divmod(a: int, b: int) -> Tuple[int, int]:
    if b == 0:
        raise ParameterError("division by the zero polynomial")
    deg_b = b.bit_length() - 1
    quotient = 0
    while a and a.bit_length() - 1 >= deg_b:
        shift = a.bit_length() - 1 - deg_b
        quotient |= 1 << shift
        a ^= b << shift
    return quotient, a


def int_mod(a: int, b: int) -> int:
    deg_b = b.bit_length() - 1
    while a and a.bit_length() - 1 >= deg_b:
        a ^= b << (a.bit_length() - 1 - deg_b)
    return a


def int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, int_mod(a, b)
    return a


class BitPoly:
    """
    Immutable polynomial over GF(2).

    Attributes:
        value (int): Integer encoding, bit i being the coefficient of X^i.
    """

    __slots__ = ("_value",)

    def __init__(self, value: int = 0):
        if value < 0:
            raise ParameterError(f"polynomial encoding must be non-negative, got {value}")
        self._value = value

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitPoly":
        """Builds a polynomial from little-endian coefficient bits."""
        value = 0
        for index, bit in enumerate(bits):
            if bit & 1:
                value |= 1 << index
        return cls(value)

    @classmethod
    def from_hex(cls, text: str) -> "BitPoly":
        return cls(parse_hex(text))

    @classmethod
    def monomial(cls, degree: int) -> "BitPoly":
        return cls(1 << degree)

    @property
    def value(self) -> int:
        return self._value

    @property
    def deg(self) -> Optional[int]:
        """Degree of the polynomial, or None for the zero polynomial."""
        if self._value == 0:
            return None
        return self._value.bit_length() - 1

    @property
    def bits(self) -> List[int]:
        return [(self._value >> i) & 1 for i in range(self._value.bit_length())]

    def is_zero(self) -> bool:
        return self._value == 0

    def to_hex(self) -> str:
        return to_hex(self._value)

    def __add__(self, other: "BitPoly") -> "BitPoly":
        return add(self, other)

    __sub__ = __add__

    def __mul__(self, other: "BitPoly") -> "BitPoly":
        return mul(self, other)

    def __divmod__(self, other: "BitPoly") -> Tuple["BitPoly", "BitPoly"]:
        return poly_divmod(self, other)

    def __floordiv__(self, other: "BitPoly") -> "BitPoly":
        return poly_divmod(self, other)[0]

    def __mod__(self, other: "BitPoly") -> "BitPoly":
        return poly_divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitPoly):
            return NotImplemented
        return self._value == other._value

    def __hash__(self) -> int:
        return hash(("BitPoly", self._value))

    def __repr__(self) -> str:
        return f"BitPoly({self.to_hex()})"

    def __str__(self) -> str:
        if self._value == 0:
            return "0"
        terms = []
        for degree in range(self._value.bit_length() - 1, -1, -1):
            if (self._value >> degree) & 1:
                terms.append("1" if degree == 0 else "X" if degree == 1 else f"X^{degree}")
        return " + ".join(terms)


def add(p: BitPoly, q: BitPoly) -> BitPoly:
    return BitPoly(p.value ^ q.value)


def mul(p: BitPoly, q: BitPoly) -> BitPoly:
    return BitPoly(clmul(p.value, q.value))


def poly_divmod(p: BitPoly, q: BitPoly) -> Tuple[BitPoly, BitPoly]:
    """
    Euclidean division p = quotient * q + remainder with deg(remainder) < deg(q).

    Args:
        p: The dividend.
        q: The divisor, nonzero.

    Returns:
        The pair (quotient, remainder).

    Raises:
        ParameterError: If q is the zero polynomial.
    """
    quotient, remainder = int_divmod(p.value, q.value)
    return BitPoly(quotient), BitPoly(remainder)


def gcd(p: BitPoly, q: BitPoly) -> BitPoly:
    """Monic greatest common divisor (every nonzero polynomial over GF(2) is monic)."""
    if p.is_zero() and q.is_zero():
        raise ParameterError("gcd(0, 0) is undefined")
    return BitPoly(int_gcd(p.value, q.value))


def _frobenius_power_of_x(times: int, modulus: int) -> int:
    """X^(2^times) mod modulus."""
    result = int_mod(2, modulus)
    for _ in range(times):
        result = int_mod(clsquare(result), modulus)
    return result


def is_irreducible(p: BitPoly) -> bool:
    """
    Rabin irreducibility test over GF(2).

    p of degree m is irreducible iff X^(2^m) = X (mod p) and, for every prime r dividing m,
    gcd(X^(2^(m/r)) - X mod p, p) = 1.

    Args:
        p: Polynomial of degree at least 1.

    Returns:
        True if p is irreducible.

    Raises:
        ParameterError: If p is constant.
    """
    m = p.deg
    if m is None or m == 0:
        raise ParameterError("irreducibility is only defined for non-constant polynomials")
    modulus = p.value
    x_mod = int_mod(2, modulus)
    if _frobenius_power_of_x(m, modulus) != x_mod:
        return False
    for r in prime_factors(m):
        partial = _frobenius_power_of_x(m // r, modulus) ^ x_mod
        if int_gcd(modulus, partial) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def canonical_irreducible(m: int) -> BitPoly:
    """
    The irreducible polynomial of degree m with the smallest integer encoding.

    Args:
        m: The degree, 1 <= m <= MAX_MODULUS_DEGREE.

    Returns:
        The canonical modulus for GF(2^m).

    Raises:
        ParameterError: If m is outside the supported range.
    """
    if not isinstance(m, int) or not 1 <= m <= MAX_MODULUS_DEGREE:
        raise ParameterError(f"modulus degree must be in 1..{MAX_MODULUS_DEGREE}, got {m!r}")
    for value in range(1 << m, 1 << (m + 1)):
        # X divides every candidate without a constant term
        if m > 1 and value & 1 == 0:
            continue
        candidate = BitPoly(value)
        if is_irreducible(candidate):
            return candidate
    raise RuntimeError(f"no irreducible polynomial of degree {m} found")


def trial_division_irreducible(p: BitPoly) -> bool:
    """Irreducibility by dividing out every polynomial of degree 1..deg(p)//2."""
    m = p.deg
    if m is None or m == 0:
        raise ParameterError("irreducibility is only defined for non-constant polynomials")
    for divisor in range(2, 1 << (m // 2 + 1)):
        if int_mod(p.value, divisor) == 0:
            return False
    return True

