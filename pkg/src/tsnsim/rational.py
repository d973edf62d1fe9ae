"""Exact rational arithmetic for simulation time.

Every timestamp in the simulator is a non-negative rational number of
seconds.  gmpy2's mpq is used when available (roughly 8x faster than
fractions.Fraction on the event-loop workload); the stdlib Fraction is the
fallback so the package imports without the extension.

Floats are rejected everywhere: a float that survives into the event queue
turns exact tie-breaking into noise, which is exactly the failure mode the
simulator exists to avoid.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

try:
    from gmpy2 import mpq as Rat

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rat = Fraction
    HAVE_GMPY2 = False

RAT_TYPES = (Rat, Fraction, int)

ZERO = Rat(0)
NANOSECOND = Rat(1, 10**9)

_UNITS = {
    "s": Rat(1),
    "ms": Rat(1, 10**3),
    "us": Rat(1, 10**6),
    "µs": Rat(1, 10**6),
    "ns": Rat(1, 10**9),
}

_TIME_RE = re.compile(r"^\s*([0-9eE.+\-/]+?)\s*(s|ms|us|µs|ns)?\s*$")


def rat(value, den=None):
    """Build an exact rational from int, str, Fraction, or Rat.

    Strings accept integers, decimals with exponents, and "num/den" forms.
    Floats raise TypeError.
    """
    if isinstance(value, float) or isinstance(den, float):
        raise TypeError("floats are not exact; pass int, str, or Fraction")
    if den is not None:
        return Rat(value) / Rat(den)
    if isinstance(value, str):
        if "/" in value:
            num, _, d = value.partition("/")
            return Rat(Fraction(num.strip())) / Rat(Fraction(d.strip()))
        return Rat(Fraction(value.strip()))
    return Rat(value)


def parse_time(text):
    """Parse a human-readable duration into rational seconds.

    Accepts an optional unit suffix (s, ms, us, µs, ns); bare numbers are
    seconds.  The numeric part may be a decimal ("1.4", "2e-3") or an exact
    quotient ("750/11").

    >>> parse_time("140us") == rat(140, 10**6)
    True
    """
    if isinstance(text, RAT_TYPES):
        return Rat(text)
    m = _TIME_RE.match(text)
    if not m:
        raise ValueError(f"unparseable duration: {text!r}")
    number, unit = m.groups()
    return rat(number) * _UNITS[unit or "s"]


def to_ns(t):
    """Exact integer nanoseconds; raises if t is off the 1 ns lattice."""
    scaled = Rat(t) * 10**9
    n = math.floor(scaled)
    if n != scaled:
        raise ValueError(f"{t} is not an integer number of nanoseconds")
    return int(n)


def ns_string(t):
    """Nanoseconds as a string: integer when exact, else "num/den"."""
    scaled = Rat(t) * 10**9
    n = math.floor(scaled)
    if n == scaled:
        return str(int(n))
    return f"{scaled.numerator}/{scaled.denominator}"


def format_time(t):
    """Render seconds with the largest unit that keeps the value exact-ish.

    For log and summary output only; never parsed back.
    """
    t = Rat(t)
    for unit, factor in (("s", Rat(1)), ("ms", _UNITS["ms"]), ("us", _UNITS["us"]), ("ns", _UNITS["ns"])):
        scaled = t / factor
        if scaled == math.floor(scaled):
            return f"{int(scaled)}{unit}"
    return f"{float(t):.9g}s"
