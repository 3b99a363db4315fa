"""Exact coefficients: rationals, sparse polynomials in named parameters,
their fraction field (optionally with i, i^2 = -1) and truncated series in t.

Rationals are ``fractions.Fraction``.  Polynomials are immutable maps from
monomials to rationals, a monomial being a name-sorted tuple of
``(name, exponent)`` pairs.  Terms print in graded-lex order with variables
ranked alphabetically, so the canonical text of a value does not depend on
declaration order.  Multivariate gcd is delegated to sympy's sparse rings.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Callable, Iterable, Mapping

from .errors import DivisionByZero, OrderMismatch, ParseError

IMAG = "i"  # reserved name of the Gaussian unit

__all__ = [
    "IMAG", "MPoly", "CoeffExpr", "TruncSeries", "ZERO", "ONE", "I",
    "coeff", "param", "params", "parse_coeff", "parse_with", "is_zero",
]


# ---------------------------------------------------------------- monomials

def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for v, e in m2:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def _mono_deg(m):
    return sum(e for _, e in m)


def _grlex_cmp(m1, m2):
    d1, d2 = _mono_deg(m1), _mono_deg(m2)
    if d1 != d2:
        return -1 if d1 < d2 else 1
    for (v1, e1), (v2, e2) in zip(m1, m2):
        if v1 != v2:
            # the alphabetically smaller name is the larger variable
            return 1 if v1 < v2 else -1
        if e1 != e2:
            return 1 if e1 > e2 else -1
    return 0


GRLEX = cmp_to_key(_grlex_cmp)


def _mono_str(m):
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


# ------------------------------------------------------------- polynomials

class MPoly:
    """Sparse polynomial over Q in named variables; immutable."""

    __slots__ = ("terms", "_hash", "_vars")

    def __init__(self, terms=None):
        self.terms = {} if terms is None else terms
        self._hash = None
        self._vars = None

    @staticmethod
    def const(c) -> "MPoly":
        c = Fraction(c)
        return MPoly({(): c}) if c else MPoly()

    @staticmethod
    def var(name: str) -> "MPoly":
        return MPoly({((name, 1),): Fraction(1)})

    # -- queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((), Fraction(0))

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(()) == 1

    def variables(self) -> frozenset:
        if self._vars is None:
            self._vars = frozenset(v for m in self.terms for v, _ in m)
        return self._vars

    def total_degree(self) -> int:
        return max((_mono_deg(m) for m in self.terms), default=-1)

    def leading(self):
        m = max(self.terms, key=GRLEX)
        return m, self.terms[m]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: GRLEX(kv[0]), reverse=True)

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return MPoly.const(other) - self

    def scale(self, c) -> "MPoly":
        if not c:
            return MPoly()
        if c == 1:
            return self
        return MPoly({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scale(Fraction(other))
        if not self.terms or not other.terms:
            return MPoly()
        if len(other.terms) == 1 and () in other.terms:
            return self.scale(other.terms[()])
        if len(self.terms) == 1 and () in self.terms:
            return other.scale(self.terms[()])
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = MPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MPoly.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- Gaussian reduction
    def reduce_imag(self) -> "MPoly":
        """Rewrite modulo i^2 + 1."""
        if not any(v == IMAG and e > 1 for m in self.terms for v, e in m):
            return self
        out = {}
        for m, c in self.terms.items():
            rest, k = [], 0
            for v, e in m:
                if v == IMAG:
                    k = e
                else:
                    rest.append((v, e))
            if k % 4 >= 2:
                c = -c
            if k % 2:
                rest.append((IMAG, 1))
                rest.sort()
            m2 = tuple(rest)
            s = out.get(m2, 0) + c
            if s:
                out[m2] = s
            else:
                out.pop(m2, None)
        return MPoly(out)

    def conj(self) -> "MPoly":
        """Complex conjugate, assuming the polynomial is reduced."""
        out = {}
        for m, c in self.terms.items():
            out[m] = -c if any(v == IMAG for v, _ in m) else c
        return MPoly(out)

    # -- evaluation
    def subs(self, values: Mapping[str, object]):
        """Substitute values (anything supporting ring arithmetic)."""
        if not any(v in values for v in self.variables()):
            return CoeffExpr(self)
        total = ZERO
        powers: dict = {}
        for m, c in self.terms.items():
            term = CoeffExpr.const(c)
            for v, e in m:
                if v in values:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = coeff(values[v]) ** e
                    term = term * powers[key]
                else:
                    term = term * CoeffExpr(MPoly({((v, e),): Fraction(1)}))
            total = total + term
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            if not m:
                s = str(c)
            elif c == 1:
                s = _mono_str(m)
            elif c == -1:
                s = "-" + _mono_str(m)
            else:
                s = f"{c}*{_mono_str(m)}"
            if parts:
                parts.append(" - " + s[1:] if s.startswith("-") else " + " + s)
            else:
                parts.append(s)
        return "".join(parts)

    def __repr__(self):
        return f"MPoly({self})"


# ----------------------------------------------------------------- gcd

@lru_cache(maxsize=256)
def _sympy_ring(names: tuple):
    from sympy import Symbol
    from sympy.polys.domains import QQ
    from sympy.polys.rings import ring
    return ring([Symbol(n) for n in names], QQ)[0]


def _to_sympy(R, index, p: MPoly):
    from sympy.polys.domains import QQ
    n = len(index)
    d = {}
    for m, c in p.terms.items():
        e = [0] * n
        for v, k in m:
            e[index[v]] = k
        d[tuple(e)] = QQ(c.numerator, c.denominator)
    return R.from_dict(d)


def _from_sympy(names, sp) -> MPoly:
    out = {}
    for e, c in sp.items():
        m = tuple((names[i], k) for i, k in enumerate(e) if k)
        out[m] = Fraction(int(c.numerator), int(c.denominator))
    return MPoly(out)


def _monomial_gcd(polys) -> tuple:
    common = None
    for p in polys:
        for m in p.terms:
            d = dict(m)
            if common is None:
                common = d
            else:
                common = {v: min(e, d[v]) for v, e in common.items() if v in d}
            if not common:
                return ()
    return tuple(sorted(common.items())) if common else ()


def _div_monomial(p: MPoly, g) -> MPoly:
    if not g:
        return p
    gd = dict(g)
    out = {}
    for m, c in p.terms.items():
        nm = tuple((v, e - gd.get(v, 0)) for v, e in m if e - gd.get(v, 0))
        out[nm] = c
    return MPoly(out)


def _cancel(num: MPoly, den: MPoly):
    """Divide num and den by their gcd."""
    if len(num.terms) == 1 or len(den.terms) == 1:
        g = _monomial_gcd((num, den))
        return _div_monomial(num, g), _div_monomial(den, g)
    names = tuple(sorted(num.variables() | den.variables()))
    R = _sympy_ring(names)
    index = {n: i for i, n in enumerate(names)}
    _, cf, cg = _to_sympy(R, index, num).cofactors(_to_sympy(R, index, den))
    return _from_sympy(names, cf), _from_sympy(names, cg)


def irreducible_factors(p: MPoly) -> list:
    """Distinct monic irreducible factors over Q (i treated as a symbol)."""
    if p.is_const():
        return []
    names = tuple(sorted(p.variables()))
    R = _sympy_ring(names)
    index = {n: i for i, n in enumerate(names)}
    _, facs = _to_sympy(R, index, p).factor_list()
    out = []
    for f, _ in facs:
        q = _from_sympy(names, f)
        lead = q.leading()[1]
        out.append(q.scale(1 / lead))
    return sorted(set(out), key=str)


# ------------------------------------------------------------ fractions

_RAW = object()


class CoeffExpr:
    """Element of Q(params) or Q(i)(params) in canonical reduced form.

    The denominator is i-free, coprime to the numerator and has leading
    coefficient 1, which makes structural equality decide field equality.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=None, den=None, _tag=None):
        if num is None:
            num = MPoly()
        elif not isinstance(num, MPoly):
            num = MPoly.const(num)
        if _tag is _RAW:
            self.num, self.den = num, den
        else:
            self.num, self.den = _normalize(num, MPoly.const(1) if den is None else den)
        self._hash = None

    @staticmethod
    def const(c) -> "CoeffExpr":
        c = Fraction(c)
        if not c:
            return ZERO
        return CoeffExpr(MPoly({(): c}), _ONE_POLY, _RAW)

    @staticmethod
    def var(name: str) -> "CoeffExpr":
        return CoeffExpr(MPoly.var(name), _ONE_POLY, _RAW)

    # -- queries
    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_one()

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"{self} depends on parameters")
        return self.num.const_value()

    def variables(self) -> frozenset:
        return self.num.variables() | self.den.variables()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    # -- arithmetic
    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den.is_one() and other.den.is_one():
            return CoeffExpr(self.num + other.num, _ONE_POLY, _RAW)
        if self.den == other.den:
            return CoeffExpr(self.num + other.num, self.den)
        return CoeffExpr(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return CoeffExpr(-self.num, self.den, _RAW)

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num.terms or not other.num.terms:
            return ZERO
        if other.den.is_one() and other.num.is_const():
            c = other.num.terms[()]
            return self if c == 1 else CoeffExpr(self.num.scale(c), self.den, _RAW)
        if self.den.is_one() and self.num.is_const():
            c = self.num.terms[()]
            return other if c == 1 else CoeffExpr(other.num.scale(c), other.den, _RAW)
        if self.den.is_one() and other.den.is_one():
            num = self.num * other.num
            if IMAG in self.num.variables() and IMAG in other.num.variables():
                num = num.reduce_imag()
            return CoeffExpr(num, _ONE_POLY, _RAW)
        return CoeffExpr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "CoeffExpr":
        if not self.num.terms:
            raise DivisionByZero("division by zero coefficient")
        return CoeffExpr(self.den, self.num)

    def __truediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num.terms:
            raise DivisionByZero(f"division of {self} by zero")
        if other.is_const():
            return CoeffExpr(self.num.scale(1 / other.num.const_value()), self.den, _RAW) \
                if self.den.is_one() else CoeffExpr(self.num, self.den.scale(other.num.const_value()))
        return CoeffExpr(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- evaluation
    def subs(self, values: Mapping[str, object]) -> "CoeffExpr":
        """Substitute parameter values; raises DivisionByZero at a pole."""
        num = self.num.subs(values)
        den = self.den.subs(values)
        if den.is_zero():
            at = ", ".join(f"{k}={values[k]}" for k in sorted(values))
            raise DivisionByZero(f"denominator {self.den} vanishes at {at}")
        return num / den

    def monic(self) -> "CoeffExpr":
        """Numerator scaled to leading coefficient 1 (for constraint lists)."""
        if not self.num.terms:
            return ZERO
        _, lc = self.num.leading()
        return CoeffExpr(self.num.scale(1 / lc), _ONE_POLY, _RAW)

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"CoeffExpr({self})"


_ONE_POLY = MPoly({(): Fraction(1)})


def _normalize(num: MPoly, den: MPoly):
    if not den.terms:
        raise DivisionByZero("zero denominator")
    if not num.terms:
        return MPoly(), _ONE_POLY
    if IMAG in num.variables() or IMAG in den.variables():
        num, den = num.reduce_imag(), den.reduce_imag()
        if IMAG in den.variables():
            c = den.conj()
            num, den = (num * c).reduce_imag(), (den * c).reduce_imag()
            if not den.terms:
                raise DivisionByZero("zero denominator")
    if den.is_const():
        return num.scale(1 / den.const_value()), _ONE_POLY
    num, den = _cancel(num, den)
    _, lc = den.leading()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return num, den


def _lift(x):
    if isinstance(x, CoeffExpr):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return CoeffExpr.const(x)
    if isinstance(x, MPoly):
        return CoeffExpr(x)
    return NotImplemented


ZERO = CoeffExpr(MPoly(), _ONE_POLY, _RAW)
ONE = CoeffExpr(_ONE_POLY, _ONE_POLY, _RAW)
I = CoeffExpr.var(IMAG)


def coeff(x) -> CoeffExpr:
    """Coerce ints, Fractions, polynomials or strings to a CoeffExpr."""
    if isinstance(x, str):
        return parse_coeff(x)
    y = _lift(x)
    if y is NotImplemented:
        raise TypeError(f"cannot use {x!r} as a coefficient")
    return y


def is_zero(x) -> bool:
    return coeff(x).is_zero()


def param(name: str) -> CoeffExpr:
    return CoeffExpr.var(name)


def params(names: str):
    """``a, b = params("a b")``"""
    return tuple(CoeffExpr.var(n) for n in names.replace(",", " ").split())


# ------------------------------------------------------------------ parsing

def parse_with(text: str, resolve: Callable[[str], object]):
    """Evaluate an arithmetic expression with ``+ - * / ^ **`` and integer
    literals; names are looked up through ``resolve``."""
    try:
        # "^" must bind like "**", not like Python's xor
        tree = ast.parse(str(text).strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _walk(tree.body, resolve, text)


def _walk(node, resolve, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        raise ParseError(f"unsupported literal {node.value!r} in {text!r}")
    if isinstance(node, ast.Name):
        return resolve(node.id)
    if isinstance(node, ast.UnaryOp):
        val = _walk(node.operand, resolve, text)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _walk(node.left, resolve, text)
            exp = _walk(node.right, resolve, text)
            if not isinstance(exp, Fraction) or exp.denominator != 1:
                raise ParseError(f"exponent must be an integer literal in {text!r}")
            n = int(exp)
            if isinstance(base, Fraction):
                return base ** n
            if n < 0:
                return (1 / base) ** (-n)
            return base ** n
        left = _walk(node.left, resolve, text)
        right = _walk(node.right, resolve, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            try:
                return left / right
            except ZeroDivisionError as exc:
                raise DivisionByZero(f"division by zero in {text!r}") from exc
    raise ParseError(f"unsupported syntax in {text!r}")


def parse_coeff(text: str, names: Iterable[str] | None = None, gaussian: bool = True) -> CoeffExpr:
    """Parse canonical (or hand-written) coefficient text.

    ``names`` restricts the admissible parameters; ``i`` is accepted only when
    ``gaussian`` is true.
    """
    allowed = None if names is None else set(names)

    def resolve(name):
        if name == IMAG:
            if not gaussian:
                raise ParseError(f"imaginary unit used in {text!r} but the field is Q")
            return I
        if allowed is not None and name not in allowed:
            raise ParseError(f"undeclared parameter {name!r} in {text!r}")
        return CoeffExpr.var(name)

    return coeff(parse_with(text, resolve))


# ------------------------------------------------------------------ series

class TruncSeries:
    """Power series in t modulo t^(order+1) over any ring of coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order: int, zero=None):
        coeffs = list(coeffs)[: order + 1]
        if len(coeffs) < order + 1:
            if zero is None:
                if not coeffs:
                    raise ValueError("zero element needed to pad an empty series")
                zero = coeffs[0] * 0
            coeffs += [zero] * (order + 1 - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            raise TypeError("series arithmetic needs two series")
        if other.order != self.order:
            raise OrderMismatch(f"orders {self.order} and {other.order} differ")
        a, b = getattr(self.coeffs[0], "ring", None), getattr(other.coeffs[0], "ring", None)
        if a is not None and b is not None and a != b:
            raise OrderMismatch("series coefficients live in different rings")

    def __add__(self, other):
        self._check(other)
        return TruncSeries([f + g for f, g in zip(self.coeffs, other.coeffs)], self.order)

    def __sub__(self, other):
        self._check(other)
        return TruncSeries([f - g for f, g in zip(self.coeffs, other.coeffs)], self.order)

    def __neg__(self):
        return TruncSeries([-f for f in self.coeffs], self.order)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries([f * other for f in self.coeffs], self.order)
        self._check(other)
        out = []
        for s in range(self.order + 1):
            acc = self.coeffs[0] * other.coeffs[s]
            for i in range(1, s + 1):
                acc = acc + self.coeffs[i] * other.coeffs[s - i]
            out.append(acc)
        return TruncSeries(out, self.order)

    def map(self, fn) -> "TruncSeries":
        return TruncSeries([fn(c) for c in self.coeffs], self.order)

    def __getitem__(self, s):
        return self.coeffs[s]

    def is_zero(self) -> bool:
        return all(_is_zero_any(c) for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and (self - other).is_zero()

    __hash__ = None

    def __str__(self):
        terms = []
        for s, c in enumerate(self.coeffs):
            if _is_zero_any(c):
                continue
            tag = "" if s == 0 else ("t" if s == 1 else f"t^{s}")
            terms.append(f"({c})" + (f"*{tag}" if tag else ""))
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"TruncSeries({self}, order={self.order})"


def _is_zero_any(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0
