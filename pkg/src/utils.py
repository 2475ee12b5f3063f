from typing import Iterable, Iterator, List, TypeVar
import math
import sys

from tqdm import tqdm


T = TypeVar("T")

DEFAULT_ENUMERATION_CAP: int = 1 << 20
BRUTE_FORCE_MAX_N: int = 20


class ParameterError(ValueError):
    """A precondition on the arguments of an operation does not hold."""


class UnsupportedInstanceError(ParameterError):
    """The instance is valid but outside what the closed-form solvers handle."""


class FieldError(ValueError):
    """Invalid finite-field arithmetic: zero inverse, mixed contexts or a bad modulus."""


class BenchmarkMismatchError(RuntimeError):
    """Two solving methods disagreed before timing started."""


def log(message: str, verbose: bool = True) -> None:
    """Writes a diagnostic line to stderr without tearing active progress bars."""
    if verbose:
        tqdm.write(message, file=sys.stderr)


def progress(iterable: Iterable[T], desc: str, enabled: bool = False) -> Iterator[T]:
    """
    Wraps an iterable in a progress bar on stderr.

    Args:
        iterable: The items to iterate over.
        desc: Label shown in front of the bar.
        enabled: Whether the bar is drawn at all.

    Returns:
        An iterator over the same items.
    """
    return iter(tqdm(iterable, desc=desc, disable=not enabled, file=sys.stderr, leave=False))


def require_positive(**values: int) -> None:
    for name, value in values.items():
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ParameterError(f"{name} must be a positive integer, got {value!r}")


def require_divides(small: int, big: int, what: str) -> None:
    if big % small != 0:
        raise ParameterError(f"{what}: {small} does not divide {big}")


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def prime_factors(value: int) -> List[int]:
    """
    Distinct prime factors of a positive integer, by trial division.

    Args:
        value: The integer to factor (1 has no prime factors).

    Returns:
        The distinct primes dividing value, in increasing order.
    """
    factors = []
    candidate = 2
    while candidate * candidate <= value:
        if value % candidate == 0:
            factors.append(candidate)
            while value % candidate == 0:
                value //= candidate
        candidate += 1
    if value > 1:
        factors.append(value)
    return factors


def divisors(value: int) -> List[int]:
    return [d for d in range(1, value + 1) if value % d == 0]


def is_odd(value: int) -> bool:
    return value % 2 == 1


def parse_hex(text: str) -> int:
    """
    Parses the 0x-prefixed hexadecimal encoding used for polynomials and elements.

    Args:
        text: A string such as "0xb".

    Returns:
        The non-negative integer encoding.

    Raises:
        ParameterError: If the text is not 0x-prefixed hexadecimal.
    """
    cleaned = text.strip().lower()
    if not cleaned.startswith("0x") or len(cleaned) == 2:
        raise ParameterError(f"expected 0x-prefixed hexadecimal, got {text!r}")
    digits = cleaned[2:]
    if any(ch not in "0123456789abcdef" for ch in digits):
        raise ParameterError(f"expected 0x-prefixed hexadecimal, got {text!r}")
    return int(digits, 16)


def to_hex(value: int) -> str:
    return f"0x{value:x}"
