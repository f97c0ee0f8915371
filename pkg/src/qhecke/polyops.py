"""Exact multivariate polynomials and rational functions over the rationals.

Polynomials are sparse dicts from exponent tuples to exact rational
coefficients; the ambient variables are the coordinate functions of the
character lattice, so a root (an integer vector) becomes a linear form and a
Weyl matrix acts by substituting linear forms for the generators.

Rational functions are kept unreduced; equality is cross-multiplication.
Divided-difference operators live here too: delta_s(f) = (s(f) - f)/alpha_s
with exact division.

Grading convention: a linear form has artifact degree 2 (degrees are doubled);
`artifact_degree` reports the doubled value, `degree` the internal one.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from .errors import DivisionByZeroDenominator, InternalDivisibilityFailure

if os.environ.get("QHECKE_PURE"):
    from . import _kernel_py as _k

    KERNEL_NAME = "pure"
else:
    try:
        from . import _kernel as _k  # type: ignore[attr-defined]

        KERNEL_NAME = "compiled"
    except ImportError:
        from . import _kernel_py as _k

        KERNEL_NAME = "pure"


def _coeff(value):
    """Coerce an int / Fraction / "p/q" string to an exact rational."""
    if isinstance(value, (int, Fraction)):
        return _k.norm_coeff(value)
    if isinstance(value, str):
        return _k.norm_coeff(Fraction(value))
    raise TypeError(f"not an exact rational: {value!r}")


def coeff_str(c) -> str:
    """Serialize an exact rational as "p" or "p/q"."""
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Poly:
    """Sparse exact polynomial in a fixed number of ambient variables."""

    __slots__ = ("n", "d")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.d = dict(terms) if terms else {}

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls(n)

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        c = _coeff(c)
        return cls(n, {(0,) * n: c} if c else None)

    @classmethod
    def variable(cls, n: int, k: int) -> "Poly":
        e = [0] * n
        e[k] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def linear(cls, vec) -> "Poly":
        """The linear form with coefficient vector `vec` (e.g. a root)."""
        n = len(vec)
        d = {}
        for i, c in enumerate(vec):
            c = _coeff(c)
            if c:
                e = [0] * n
                e[i] = 1
                d[tuple(e)] = c
        return cls(n, d)

    def is_zero(self) -> bool:
        return not self.d

    def is_constant(self) -> bool:
        return not self.d or (len(self.d) == 1 and not any(next(iter(self.d))))

    def constant_value(self):
        if not self.d:
            return 0
        return self.d.get((0,) * self.n, 0)

    def __bool__(self):
        return bool(self.d)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.d == other.d
        if isinstance(other, (int, Fraction)):
            return self.d == Poly.const(self.n, other).d
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.d.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.n, other)
        return Poly(self.n, _k.kadd(self.d, other.d))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, _k.kneg(self.d))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.n, other)
        return Poly(self.n, _k.kadd(self.d, _k.kneg(other.d)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.n, _k.kscale(self.d, other))
        if isinstance(other, Poly):
            return Poly(self.n, _k.kmul(self.d, other.d))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, m: int):
        if m < 0:
            raise ValueError("negative polynomial power")
        return Poly(self.n, _k.kpow(self.d, m, self.n))

    def substitute_linear(self, matrix) -> "Poly":
        """Apply an integer matrix to the degree-1 generators.

        Variable k is replaced by the linear form given by column k, so this
        realizes the Weyl action: w(root linear form) = linear form of w(root).
        """
        cols = tuple(tuple(row[k] for row in matrix) for k in range(self.n))
        return Poly(self.n, _k.ksubst(self.d, cols, self.n))

    def divexact(self, other: "Poly"):
        """Exact quotient self/other, or None when not divisible."""
        if not other.d:
            raise DivisionByZeroDenominator("division by zero polynomial")
        q = _k.kdivexact(self.d, other.d)
        return None if q is None else Poly(self.n, q)

    def degree(self) -> int:
        """Total degree (internal, not doubled); zero polynomial gives -1."""
        if not self.d:
            return -1
        return max(sum(e) for e in self.d)

    def artifact_degree(self) -> int:
        return 2 * self.degree()

    def is_homogeneous(self) -> bool:
        if not self.d:
            return True
        degs = {sum(e) for e in self.d}
        return len(degs) == 1

    def content_primitive(self):
        """(content, primitive): rational content and the primitive part."""
        if not self.d:
            return Fraction(0), self
        items = sorted(self.d.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        fracs = [Fraction(c) for _, c in items]
        num = 0
        den = 1
        for f in fracs:
            num = math.gcd(num, f.numerator)
            den = den * f.denominator // math.gcd(den, f.denominator)
        content = Fraction(num, den)
        if fracs[-1] < 0:
            content = -content
        prim = Poly(self.n, {e: _k.norm_coeff(Fraction(c) / content) for e, c in self.d.items()})
        return content, prim

    def to_pairs(self):
        """Canonical serialization: graded-lex sorted (exponents, "p/q")."""
        items = sorted(self.d.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        return [[list(e), coeff_str(c)] for e, c in items]

    @classmethod
    def from_pairs(cls, n, pairs) -> "Poly":
        d = {}
        for e, c in pairs:
            c = _coeff(c)
            if c:
                d[tuple(int(x) for x in e)] = c
        return cls(n, d)

    def __repr__(self):
        if not self.d:
            return "Poly(0)"
        parts = []
        for e, c in sorted(self.d.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mono = "*".join(
                f"x{i}" if p == 1 else f"x{i}^{p}" for i, p in enumerate(e) if p
            )
            parts.append(f"{coeff_str(c)}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(parts) + ")"


class RatFun:
    """Unreduced fraction of polynomials; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, reduce: bool = True):
        if den is None:
            den = Poly.const(num.n, 1)
        if den.is_zero():
            raise DivisionByZeroDenominator("zero denominator")
        if num.is_zero():
            den = Poly.const(num.n, 1)
        elif reduce:
            if den.is_constant():
                if den.constant_value() != 1:
                    num = num * (Fraction(1) / Fraction(den.constant_value()))
                    den = Poly.const(num.n, 1)
            else:
                q = num.divexact(den)
                if q is not None:
                    num = q
                    den = Poly.const(num.n, 1)
        self.num = num
        self.den = den

    @classmethod
    def from_scalar(cls, n, c) -> "RatFun":
        return cls(Poly.const(n, c))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFun(other if isinstance(other, Poly) else Poly.const(self.num.n, other))
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RatFun is unhashable (no canonical form)")

    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFun(self.num * other, self.den, reduce=False)
        other = self._coerce(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            raise DivisionByZeroDenominator("division by zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __pow__(self, m: int):
        if m == 0:
            return RatFun.from_scalar(self.num.n, 1)
        if m < 0:
            if self.num.is_zero():
                raise DivisionByZeroDenominator("negative power of zero")
            return RatFun(self.den ** (-m), self.num ** (-m))
        return RatFun(self.num ** m, self.den ** m, reduce=False)

    def _coerce(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            return other
        if isinstance(other, Poly):
            return RatFun(other)
        if isinstance(other, (int, Fraction)):
            return RatFun(Poly.const(self.num.n, other))
        raise TypeError(f"cannot coerce {other!r}")

    def substitute_linear(self, matrix) -> "RatFun":
        return RatFun(self.num.substitute_linear(matrix), self.den.substitute_linear(matrix))

    def is_polynomial(self) -> bool:
        return self.num.divexact(self.den) is not None

    def as_poly(self) -> Poly:
        q = self.num.divexact(self.den)
        if q is None:
            raise InternalDivisibilityFailure(f"not a polynomial: {self!r}")
        return q

    def is_homogeneous(self) -> bool:
        return self.num.is_homogeneous() and self.den.is_homogeneous()

    def degree(self) -> int:
        """num degree minus den degree; meaningful for homogeneous values."""
        return self.num.degree() - self.den.degree()

    def artifact_degree(self) -> int:
        return 2 * self.degree()

    def display(self) -> str:
        """Content-stripped display form (display only; values stay unreduced)."""
        if self.is_zero():
            return "0"
        cn, pn = self.num.content_primitive()
        cd, pd = self.den.content_primitive()
        scale = coeff_str(cn / cd)
        if pd == Poly.const(pd.n, 1):
            return f"{scale} * {pn!r}"
        return f"{scale} * ({pn!r}) / ({pd!r})"

    def __repr__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return f"RatFun({self.num!r})"
        return f"RatFun({self.num!r} / {self.den!r})"


def weyl_poly_action(matrix, f: Poly) -> Poly:
    return f.substitute_linear(matrix)


def demazure(datum, k: int, f: Poly) -> Poly:
    """Divided-difference operator of the k-th simple reflection.

    delta_k(f) = (s_k(f) - f) / alpha_k; the numerator vanishes on the
    reflection hyperplane so the division is always exact.
    """
    s = datum.simple_reflection_matrix(k)
    alpha = Poly.linear(datum.simple_roots[k])
    g = f.substitute_linear(s) - f
    q = g.divexact(alpha)
    if q is None:
        raise InternalDivisibilityFailure("divided difference did not divide")
    return q


def demazure_word(datum, word, f: Poly) -> Poly:
    for k in reversed(tuple(word)):
        f = demazure(datum, k, f)
    return f


def demazure_product_rule_check(datum, k: int, x: Poly, f: Poly) -> bool:
    """delta_k(x*f) == delta_k(x)*f + s_k(x)*delta_k(f), exactly."""
    s = datum.simple_reflection_matrix(k)
    lhs = demazure(datum, k, x * f)
    rhs = demazure(datum, k, x) * f + x.substitute_linear(s) * demazure(datum, k, f)
    return lhs == rhs
