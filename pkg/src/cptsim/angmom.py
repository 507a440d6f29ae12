"""
Angular-momentum algebra on exact half-integers.

Wigner 3j and 6j symbols are evaluated with the Racah factorial sums in
integer/rational arithmetic and only converted to float at the very end,
so a symbol that vanishes by cancellation comes out as an exact ``0.0``.
Phases follow the Condon-Shortley convention.

Every function takes plain numbers (``1``, ``0.5``, ``Fraction(3, 2)``) or
:class:`HalfInt` instances interchangeably.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Real

from .errors import InvalidArgumentError

__all__ = [
    "HalfInt",
    "half",
    "wigner3j",
    "wigner6j",
    "clebsch_gordan",
    "hyperfine_reduced_factor",
    "dipole_weight",
]


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """An integer or half-odd-integer stored as twice its value."""

    twice_value: int

    def __post_init__(self):
        if not isinstance(self.twice_value, int) or isinstance(self.twice_value, bool):
            raise InvalidArgumentError(f"twice_value must be an int, got {self.twice_value!r}")

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise InvalidArgumentError("booleans are not angular momenta")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, Fraction):
            twice = 2 * value
            if twice.denominator != 1:
                raise InvalidArgumentError(f"{value} is not a multiple of 1/2")
            return cls(int(twice))
        if isinstance(value, Real):
            twice = 2.0 * float(value)
            rounded = round(twice)
            if not math.isfinite(twice) or abs(twice - rounded) > 1e-9:
                raise InvalidArgumentError(f"{value} is not a multiple of 1/2")
            return cls(int(rounded))
        raise InvalidArgumentError(f"cannot interpret {value!r} as a half-integer")

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def projections(self) -> list["HalfInt"]:
        """All m = -j, -j+1, ..., j (requires j >= 0)."""
        if self.twice_value < 0:
            raise InvalidArgumentError(f"negative angular momentum {self}")
        return [HalfInt(t) for t in range(-self.twice_value, self.twice_value + 1, 2)]

    def __float__(self) -> float:
        return self.twice_value / 2

    def __add__(self, other):
        return HalfInt(self.twice_value + HalfInt.of(other).twice_value)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice_value - HalfInt.of(other).twice_value)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).twice_value - self.twice_value)

    def __neg__(self):
        return HalfInt(-self.twice_value)

    def __abs__(self):
        return HalfInt(abs(self.twice_value))

    def __eq__(self, other):
        try:
            return self.twice_value == HalfInt.of(other).twice_value
        except InvalidArgumentError:
            return NotImplemented

    def __lt__(self, other):
        return self.twice_value < HalfInt.of(other).twice_value

    def __hash__(self):
        return hash(("HalfInt", self.twice_value))

    def __str__(self):
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def half(value) -> HalfInt:
    """Shorthand for :meth:`HalfInt.of`."""
    return HalfInt.of(value)


def _j(value) -> int:
    """Twice-value of an angular-momentum magnitude, validated non-negative."""
    t = HalfInt.of(value).twice_value
    if t < 0:
        raise InvalidArgumentError(f"angular momentum must be >= 0, got {t / 2}")
    return t


def _jm(j, m) -> tuple[int, int]:
    tj = _j(j)
    tm = HalfInt.of(m).twice_value
    if (tj - tm) % 2:
        raise InvalidArgumentError(f"j={tj / 2} and m={tm / 2} differ by a half-integer")
    return tj, tm


def _triangle(ta: int, tb: int, tc: int) -> bool:
    return (ta + tb + tc) % 2 == 0 and abs(ta - tb) <= tc <= ta + tb


def _fact(twice: int) -> int:
    # argument is twice an integer
    return math.factorial(twice // 2)


def _delta_sq(ta: int, tb: int, tc: int) -> Fraction:
    return Fraction(
        _fact(ta + tb - tc) * _fact(ta - tb + tc) * _fact(-ta + tb + tc),
        _fact(ta + tb + tc + 2),
    )


def _signed_sqrt(s: Fraction, r: Fraction) -> float:
    """Return s * sqrt(r) with a single final rounding."""
    if s == 0 or r == 0:
        return 0.0
    mag = s * s * r
    # split into integer sqrt parts to keep precision for large numerators
    val = math.sqrt(mag.numerator) / math.sqrt(mag.denominator)
    return val if s > 0 else -val


@lru_cache(maxsize=65536)
def _w3j(t1, t2, t3, tm1, tm2, tm3) -> float:
    if tm1 + tm2 + tm3 != 0:
        return 0.0
    if not _triangle(t1, t2, t3):
        return 0.0
    if abs(tm1) > t1 or abs(tm2) > t2 or abs(tm3) > t3:
        return 0.0
    # Racah: all quantities below are integers after halving
    kmin = max(0, (t2 - t3 - tm1) // 2, (t1 - t3 + tm2) // 2)
    kmax = min((t1 + t2 - t3) // 2, (t1 - tm1) // 2, (t2 + tm2) // 2)
    s = Fraction(0)
    for k in range(kmin, kmax + 1):
        tk = 2 * k
        denom = (
            _fact(tk)
            * _fact(t3 - t2 + tk + tm1)
            * _fact(t3 - t1 + tk - tm2)
            * _fact(t1 + t2 - t3 - tk)
            * _fact(t1 - tk - tm1)
            * _fact(t2 - tk + tm2)
        )
        s += Fraction((-1) ** k, denom)
    r = _delta_sq(t1, t2, t3) * (
        _fact(t1 + tm1) * _fact(t1 - tm1) * _fact(t2 + tm2)
        * _fact(t2 - tm2) * _fact(t3 + tm3) * _fact(t3 - tm3)
    )
    phase = (t1 - t2 - tm3) // 2
    if phase % 2:
        s = -s
    return _signed_sqrt(s, r)


def wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol ``(j1 j2 j3; m1 m2 m3)``.

    Returns exactly 0.0 when the triangle rule, the projection sum rule or
    ``|m| <= j`` fails.

    Raises
    ------
    InvalidArgumentError
        If any ``j`` is negative or a ``(j, m)`` pair has mismatched parity.
    """
    t1, tm1 = _jm(j1, m1)
    t2, tm2 = _jm(j2, m2)
    t3, tm3 = _jm(j3, m3)
    return _w3j(t1, t2, t3, tm1, tm2, tm3)


@lru_cache(maxsize=65536)
def _w6j(a, b, c, d, e, f) -> float:
    triads = ((a, b, c), (a, e, f), (d, b, f), (d, e, c))
    if not all(_triangle(*t) for t in triads):
        return 0.0
    r = Fraction(1)
    for t in triads:
        r *= _delta_sq(*t)
    sums = [sum(t) // 2 for t in triads]
    pairs = [(a + b + d + e) // 2, (b + c + e + f) // 2, (c + a + f + d) // 2]
    s = Fraction(0)
    for t in range(max(sums), min(pairs) + 1):
        denom = math.factorial(pairs[0] - t) * math.factorial(pairs[1] - t) * math.factorial(pairs[2] - t)
        for x in sums:
            denom *= math.factorial(t - x)
        s += Fraction((-1) ** t * math.factorial(t + 1), denom)
    return _signed_sqrt(s, r)


def wigner6j(j1, j2, j3, j4, j5, j6) -> float:
    """Wigner 6j symbol ``{j1 j2 j3; j4 j5 j6}``; 0.0 on any triad violation."""
    return _w6j(*(_j(x) for x in (j1, j2, j3, j4, j5, j6)))


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """Clebsch-Gordan coefficient ``<j1 m1; j2 m2 | J M>``."""
    t1, tm1 = _jm(j1, m1)
    t2, tm2 = _jm(j2, m2)
    tJ, tM = _jm(J, M)
    if tM != tm1 + tm2:
        return 0.0
    w = _w3j(t1, t2, tJ, tm1, tm2, -tM)
    if w == 0.0:
        return 0.0
    phase = -1.0 if ((t1 - t2 + tM) // 2) % 2 else 1.0
    return phase * math.sqrt(tJ + 1) * w


def hyperfine_reduced_factor(Fg, Fe, I, Jg, Je) -> float:
    """Ratio of the hyperfine reduced element to the fine-structure one.

    ``(-1)**(Je + I + Fg + 1) * sqrt(2 Fg + 1) * {Je Fe I; Fg Jg 1}``, chosen so
    that ``dipole_weight = CG * factor`` equals ``<Fe me| d_q |Fg mg>`` in units
    of ``<Je||d||Jg>``.
    """
    tFg, tFe, tI, tJg, tJe = (_j(x) for x in (Fg, Fe, I, Jg, Je))
    six = _w6j(tJe, tFe, tI, tFg, tJg, 2)
    if six == 0.0:
        return 0.0
    exponent = (tJe + tI + tFg + 2) // 2
    sign = -1.0 if exponent % 2 else 1.0
    return sign * math.sqrt(tFg + 1) * six


def dipole_weight(Fg, mg, Fe, me, q, I, Jg=0.5, Je=0.5) -> float:
    """Relative dipole matrix element ``<Fe me| d_q |Fg mg>``.

    The fine-structure reduced element ``<Je||d||Jg>`` is set to 1, so the
    weights are pure numbers and field strengths are carried by Rabi scales.

    Parameters
    ----------
    Fg, mg : ground hyperfine level and projection
    Fe, me : excited hyperfine level and projection
    q : int
        Spherical component of the field, one of -1, 0, +1 (``me = mg + q``).
    I : nuclear spin
    Jg, Je : electronic angular momenta of the two fine-structure levels

    Raises
    ------
    InvalidArgumentError
        If ``q`` is not in {-1, 0, 1} or the hyperfine momenta are not
        reachable by coupling ``I`` with ``Jg`` / ``Je``.
    """
    if isinstance(q, bool) or q not in (-1, 0, 1):
        raise InvalidArgumentError(f"q must be -1, 0 or +1, got {q!r}")
    tI, tJg, tJe = _j(I), _j(Jg), _j(Je)
    tFg, tmg = _jm(Fg, mg)
    tFe, tme = _jm(Fe, me)
    if not _triangle(tI, tJg, tFg) or not _triangle(tI, tJe, tFe):
        raise InvalidArgumentError(
            f"F_g={tFg / 2}, F_e={tFe / 2} inconsistent with I={tI / 2}, "
            f"J_g={tJg / 2}, J_e={tJe / 2}"
        )
    if tme != tmg + 2 * q or abs(tme) > tFe or abs(tmg) > tFg:
        return 0.0
    cg = clebsch_gordan(Fg, mg, 1, q, Fe, me)
    if cg == 0.0:
        return 0.0
    return cg * hyperfine_reduced_factor(Fg, Fe, I, Jg, Je)
