"""Exact modulus-one scalars.

Two modes are supported and never mixed:

* :class:`RootUnity` -- a root of unity, stored as an exact rational
  "turn" (the angle as a fraction of a full revolution).  All arithmetic
  is arithmetic in Q/Z, so equality is decidable and exact.
* :class:`Formal` -- a formal unit monomial ``alpha1^(h1/2) * alpha2^(h2/2)``
  in two declared-independent irrational parameters.  Such a monomial
  equals 1 exactly when both exponents vanish; no other relations hold.

An :class:`Alpha` bundles a scalar together with a fixed square root so
that half-integer exponent formulas are single valued.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union


class ScalarModeError(TypeError):
    """Raised when scalars of different modes are combined."""


@dataclass(frozen=True)
class RootUnity:
    """The root of unity exp(2*pi*i*turn), turn a rational in [0, 1)."""

    turn: Fraction

    def __post_init__(self):
        t = Fraction(self.turn) % 1
        object.__setattr__(self, "turn", t)

    @staticmethod
    def of(num: int, den: int) -> "RootUnity":
        return RootUnity(Fraction(num, den))

    @staticmethod
    def one() -> "RootUnity":
        return RootUnity(Fraction(0))

    @property
    def order(self) -> int:
        """Multiplicative order."""
        return self.turn.denominator

    def is_one(self) -> bool:
        return self.turn == 0

    def in_upper_half(self) -> bool:
        """Normalization bit: angle in [0, 1/2)."""
        return self.turn < Fraction(1, 2)

    def __mul__(self, other):
        if isinstance(other, RootUnity):
            return RootUnity(self.turn + other.turn)
        if isinstance(other, Formal):
            raise ScalarModeError("cannot multiply a root of unity by a formal unit")
        return NotImplemented

    def __pow__(self, n: int) -> "RootUnity":
        return RootUnity(self.turn * n)

    def conj(self) -> "RootUnity":
        return RootUnity(-self.turn)

    def inverse(self) -> "RootUnity":
        return self.conj()

    def to_complex(self) -> complex:
        return cmath.exp(2j * math.pi * float(self.turn))

    def render(self) -> str:
        if self.turn == 0:
            return "1"
        return f"zeta({self.turn.denominator})^{self.turn.numerator}"

    def __repr__(self):
        return self.render()


@dataclass(frozen=True)
class Formal:
    """Formal unit monomial with half-integer exponents.

    ``Formal(h1, h2)`` stands for exp(pi*i*(h1*t1 + h2*t2)) where t1, t2
    are independent transcendentals, i.e. ``alpha_j^(h_j/2)`` for
    ``alpha_j = exp(2*pi*i*t_j)``.  Equal to 1 iff h1 == h2 == 0.
    """

    h1: int
    h2: int

    @staticmethod
    def one() -> "Formal":
        return Formal(0, 0)

    def is_one(self) -> bool:
        return self.h1 == 0 and self.h2 == 0

    def __mul__(self, other):
        if isinstance(other, Formal):
            return Formal(self.h1 + other.h1, self.h2 + other.h2)
        if isinstance(other, RootUnity):
            raise ScalarModeError("cannot multiply a formal unit by a root of unity")
        return NotImplemented

    def __pow__(self, n: int) -> "Formal":
        return Formal(self.h1 * n, self.h2 * n)

    def conj(self) -> "Formal":
        return Formal(-self.h1, -self.h2)

    def inverse(self) -> "Formal":
        return self.conj()

    def render(self) -> str:
        if self.is_one():
            return "1"
        parts = []
        for name, h in (("alpha1", self.h1), ("alpha2", self.h2)):
            if h == 0:
                continue
            if h % 2 == 0:
                parts.append(f"{name}^{h // 2}")
            else:
                parts.append(f"{name}^({h}/2)")
        return "*".join(parts)

    def __repr__(self):
        return self.render()


Scalar = Union[RootUnity, Formal]


def scalar_one_like(s: Scalar) -> Scalar:
    return RootUnity.one() if isinstance(s, RootUnity) else Formal.one()


def conj(s: Scalar) -> Scalar:
    return s.conj()


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def pow_(a: Scalar, n: int) -> Scalar:
    return a ** n


@dataclass(frozen=True)
class Alpha:
    """A unit scalar together with a fixed square root of it.

    The square root disambiguates every half-integer exponent: the
    formulas built on top of an Alpha only ever evaluate
    ``half_power(alpha, m) = root**m``.
    """

    value: Scalar
    root: Scalar

    def __post_init__(self):
        if type(self.value) is not type(self.root):
            raise ScalarModeError("value and root must share a mode")
        if self.root * self.root != self.value:
            raise ValueError("root*root must equal value")

    def is_symbolic(self) -> bool:
        return isinstance(self.value, Formal)

    def half_power(self, m: int) -> Scalar:
        return self.root ** m

    @property
    def order(self):
        """Multiplicative order of the value (None when symbolic and nontrivial)."""
        if isinstance(self.value, RootUnity):
            return self.value.order
        return 1 if self.value.is_one() else None

    @property
    def root_order(self):
        if isinstance(self.root, RootUnity):
            return self.root.order
        return 1 if self.root.is_one() else None

    def __mul__(self, other: "Alpha") -> "Alpha":
        return Alpha(self.value * other.value, self.root * other.root)

    def conj(self) -> "Alpha":
        return Alpha(self.value.conj(), self.root.conj())

    def __pow__(self, n: int) -> "Alpha":
        return Alpha(self.value ** n, self.root ** n)

    def in_upper_half(self):
        if isinstance(self.value, RootUnity):
            return self.value.in_upper_half()
        return None

    def render(self) -> str:
        return f"{self.value.render()} (sqrt {self.root.render()})"

    def __repr__(self):
        return self.render()


def make_alpha(N: int, k: int) -> Alpha:
    """alpha = zeta_N^k with the square root fixed to zeta_{2N}^k."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return Alpha(RootUnity.of(k, N), RootUnity.of(k, 2 * N))


def symbolic_alpha(index: int, power: int = 1) -> Alpha:
    """The formal parameter alpha1 or alpha2 (optionally a power of it)."""
    if index == 1:
        return Alpha(Formal(2 * power, 0), Formal(power, 0))
    if index == 2:
        return Alpha(Formal(0, 2 * power), Formal(0, power))
    raise ValueError("index must be 1 or 2")


def half_power(alpha: Alpha, m: int) -> Scalar:
    """(alpha^{1/2})^m via the fixed square root."""
    return alpha.half_power(m)


# ---------------------------------------------------------------------------
# cyclotomic reduction: deciding Z-linear relations among roots of unity


@lru_cache(maxsize=None)
def cyclotomic_polynomial(M: int) -> tuple:
    """Coefficients (low degree first) of the M-th cyclotomic polynomial."""
    if M < 1:
        raise ValueError("M must be >= 1")
    # x^M - 1 divided by the product of the proper cyclotomic factors
    poly = [-1] + [0] * (M - 1) + [1]
    for d in range(1, M):
        if M % d == 0:
            poly = _polydiv_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _polydiv_exact(num, den):
    """Exact division of integer polynomials (low degree first)."""
    num = list(num)
    den = list(den)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        if c % den[-1] != 0:
            raise ArithmeticError("inexact polynomial division")
        q = c // den[-1]
        out[k] = q
        for j, dj in enumerate(den):
            num[k + j] -= q * dj
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


def reduce_mod_cyclotomic(vec: list, M: int) -> list:
    """Remainder of sum_e vec[e] x^e modulo the M-th cyclotomic polynomial."""
    phi = cyclotomic_polynomial(M)
    deg = len(phi) - 1
    r = list(vec)
    for k in range(len(r) - 1, deg - 1, -1):
        c = r[k]
        if c == 0:
            continue
        r[k] = 0
        for j in range(deg):
            r[k - deg + j] -= c * phi[j]
    return r[:deg]


def unit_sum_is_zero(terms: dict) -> bool:
    """Whether an integer combination of unit scalars is exactly zero.

    Keys must be scalars of one mode.  Formal monomials are linearly
    independent, so the combination vanishes iff every coefficient does;
    for roots of unity the combination is reduced in the common
    cyclotomic ring.
    """
    items = [(s, c) for s, c in terms.items() if c != 0]
    if not items:
        return True
    if all(isinstance(s, Formal) for s, _ in items):
        return False  # distinct monomials are independent, coefficients nonzero
    if not all(isinstance(s, RootUnity) for s, _ in items):
        raise ScalarModeError("mixed-mode combination")
    M = 1
    for s, _ in items:
        M = M * s.order // math.gcd(M, s.order)
    vec = [0] * M
    for s, c in items:
        e = s.turn.numerator * (M // s.turn.denominator) % M
        vec[e] += c
    return not any(reduce_mod_cyclotomic(vec, M))


# ---------------------------------------------------------------------------
# text grammar


_ZETA_RE = re.compile(r"^zeta\((\d+)\)\^(-?\d+)$")
_ALPHA_PART_RE = re.compile(r"^alpha([12])\^(?:\((-?\d+)/2\)|(-?\d+))$")


def parse_scalar(text: str) -> Scalar:
    """Parse the rendering grammar: "1", "zeta(M)^e", "alpha1^p*alpha2^q"."""
    text = text.strip()
    if text == "1":
        return RootUnity.one()
    if text == "-1":
        return RootUnity.of(1, 2)
    m = _ZETA_RE.match(text)
    if m:
        return RootUnity.of(int(m.group(2)), int(m.group(1)))
    if text.startswith("alpha"):
        h1 = h2 = 0
        for part in text.split("*"):
            pm = _ALPHA_PART_RE.match(part.strip())
            if not pm:
                raise ValueError(f"cannot parse scalar {text!r}")
            h = int(pm.group(2)) if pm.group(2) is not None else 2 * int(pm.group(3))
            if pm.group(1) == "1":
                h1 += h
            else:
                h2 += h
        return Formal(h1, h2)
    raise ValueError(f"cannot parse scalar {text!r}")


def render_scalar(s: Scalar) -> str:
    return s.render()
