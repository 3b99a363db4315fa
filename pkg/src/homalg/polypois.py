"""Polynomial Poisson structures given by bivectors, endomorphisms given by
generator images, and the morphism and Jacobian residuals built on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .coeff import IMAG, ONE, ZERO, CoeffExpr, coeff, parse_with
from .errors import DegreeTooHigh, ParseError


# ------------------------------------------------------------------ ring

@dataclass(frozen=True)
class PolyRing:
    names: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise ValueError("a polynomial ring needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("ring variable names must be distinct")
        if IMAG in self.names:
            raise ValueError("'i' is reserved for the imaginary unit")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def gens(self):
        return tuple(self.gen(k) for k in range(self.nvars))

    def gen(self, k) -> "RingPoly":
        e = [0] * self.nvars
        e[k] = 1
        return RingPoly(self, {tuple(e): ONE})

    def one(self) -> "RingPoly":
        return RingPoly(self, {(0,) * self.nvars: ONE})

    def zero(self) -> "RingPoly":
        return RingPoly(self, {})

    def const(self, c) -> "RingPoly":
        c = coeff(c)
        return RingPoly(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exps) -> "RingPoly":
        return RingPoly(self, {tuple(exps): ONE})

    def monomials(self, max_degree: int):
        """Exponent tuples of total degree <= max_degree, by degree then grlex."""
        out = []
        for d in range(max_degree + 1):
            out.extend(sorted(_compositions(d, self.nvars), reverse=True))
        return out

    def parse(self, text, params=(), gaussian=True) -> "RingPoly":
        index = {n: k for k, n in enumerate(self.names)}
        allowed = set(params)
        clash = allowed & set(self.names)
        if clash:
            raise ParseError(f"names {sorted(clash)} are both parameters and ring variables")

        def resolve(name):
            if name in index:
                return self.gen(index[name])
            if name == IMAG:
                if not gaussian:
                    raise ParseError(f"imaginary unit used in {text!r} but the field is Q")
                return self.const(CoeffExpr.var(IMAG))
            if name in allowed:
                return self.const(CoeffExpr.var(name))
            raise ParseError(f"undeclared symbol {name!r} in {text!r}")

        val = parse_with(text, resolve)
        return val if isinstance(val, RingPoly) else self.const(val)


def _compositions(d, n):
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


class RingPoly:
    """Polynomial in the ring variables with CoeffExpr coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- queries
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps) -> CoeffExpr:
        return self.terms.get(tuple(exps), ZERO)

    def homogeneous(self, d) -> "RingPoly":
        return RingPoly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def params(self) -> frozenset:
        out = frozenset()
        for c in self.terms.values():
            out |= c.variables()
        return out

    # -- arithmetic
    def _lift(self, other):
        if isinstance(other, RingPoly):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return RingPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, s) -> "RingPoly":
        s = coeff(s)
        if not s:
            return self.ring.zero()
        return RingPoly(self.ring, {e: c * s for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, RingPoly):
            return self.scale(other)
        other = self._lift(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return RingPoly(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, RingPoly):
            if other.degree() > 0:
                raise ValueError("division by a non-constant polynomial")
            other = other.coefficient((0,) * self.ring.nvars)
        return self.scale(1 / coeff(other))

    def __rtruediv__(self, other):
        if self.degree() > 0:
            raise ValueError("division by a non-constant polynomial")
        return self.ring.const(coeff(other) / self.coefficient((0,) * self.ring.nvars))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result, base = self.ring.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, k: int, times: int = 1) -> "RingPoly":
        """times-fold partial derivative in variable k."""
        if times == 0:
            return self
        out = {}
        for e, c in self.terms.items():
            if e[k] < times:
                continue
            f = 1
            for j in range(times):
                f *= e[k] - j
            ne = e[:k] + (e[k] - times,) + e[k + 1:]
            out[ne] = c * f
        return RingPoly(self.ring, out)

    def map_coeffs(self, fn) -> "RingPoly":
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                out[e] = v
        return RingPoly(self.ring, out)

    def subs_params(self, values) -> "RingPoly":
        return self.map_coeffs(lambda c: c.subs(values))

    def __eq__(self, other):
        if isinstance(other, RingPoly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self == self.ring.const(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k)
            text = str(c)
            atomic = c.den.is_one() and len(c.num.terms) == 1
            if not (atomic or text.startswith("(")):
                text = f"({text})"
            if not mono:
                s = text
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{text}*{mono}"
            if parts:
                parts.append(" - " + s[1:] if s.startswith("-") else " + " + s)
            else:
                parts.append(s)
        return "".join(parts)

    def __repr__(self):
        return f"RingPoly({self})"


# ------------------------------------------------------------- structures

@dataclass(frozen=True)
class Bivector:
    ring: PolyRing
    matrix: tuple  # n x n of RingPoly

    def __post_init__(self):
        n = self.ring.nvars
        m = tuple(tuple(row) for row in self.matrix)
        if len(m) != n or any(len(r) != n for r in m):
            raise ValueError("bivector must be an n x n matrix")
        for i in range(n):
            if not m[i][i].is_zero():
                raise ValueError(f"bivector diagonal entry {i + 1} is nonzero")
            for j in range(i + 1, n):
                if not (m[i][j] + m[j][i]).is_zero():
                    raise ValueError(f"bivector is not antisymmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_upper(cls, ring, upper: dict) -> "Bivector":
        """Build from {(i, j): entry} with i < j."""
        n = ring.nvars
        m = [[ring.zero() for _ in range(n)] for _ in range(n)]
        for (i, j), p in upper.items():
            p = p if isinstance(p, RingPoly) else ring.const(p)
            m[i][j], m[j][i] = p, -p
        return cls(ring, m)

    @classmethod
    def symplectic(cls, ring) -> "Bivector":
        """{x_1, x_2} = 1, pairs (1,2), (3,4), ..."""
        if ring.nvars % 2:
            raise ValueError("symplectic bivector needs an even number of variables")
        return cls.from_upper(ring, {(2 * k, 2 * k + 1): ring.one() for k in range(ring.nvars // 2)})

    @classmethod
    def constant(cls, ring, tau) -> "Bivector":
        n = ring.nvars
        return cls(ring, [[ring.const(tau[i][j]) for j in range(n)] for i in range(n)])

    def entry(self, i, j) -> RingPoly:
        return self.matrix[i][j]

    def map_entries(self, fn) -> "Bivector":
        return Bivector(self.ring, [[fn(p) for p in row] for row in self.matrix])


@dataclass(frozen=True)
class PolyEndo:
    ring: PolyRing
    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        if len(imgs) != self.ring.nvars:
            raise ValueError("one image per ring variable is required")
        object.__setattr__(self, "images", tuple(p if isinstance(p, RingPoly) else self.ring.const(p)
                                                 for p in imgs))

    @classmethod
    def identity(cls, ring) -> "PolyEndo":
        return cls(ring, ring.gens())

    @classmethod
    def diagonal(cls, ring, scalars) -> "PolyEndo":
        return cls(ring, [g.scale(s) for g, s in zip(ring.gens(), scalars)])

    def then(self, other: "PolyEndo") -> "PolyEndo":
        """other o self as substitution: x_i -> other(self(x_i))."""
        return PolyEndo(self.ring, [apply_endo(other, g) for g in self.images])

    def compose(self, other: "PolyEndo") -> "PolyEndo":
        """self o other"""
        return other.then(self)

    def is_identity(self) -> bool:
        return self.images == self.ring.gens()


# ------------------------------------------------------------- operations

def bracket(f: RingPoly, g: RingPoly, pi: Bivector) -> RingPoly:
    """sum_{ij} pi_ij d_i f d_j g"""
    n = pi.ring.nvars
    df = [f.diff(i) for i in range(n)]
    dg = [g.diff(j) for j in range(n)]
    out = pi.ring.zero()
    for i in range(n):
        if df[i].is_zero():
            continue
        for j in range(n):
            if i != j and not dg[j].is_zero() and not pi.matrix[i][j].is_zero():
                out = out + pi.matrix[i][j] * df[i] * dg[j]
    return out


def jacobi_residuals(pi: Bivector) -> list:
    """{x_i,{x_j,x_k}} + cyclic for i < j < k, as (triple, polynomial)."""
    g = pi.ring.gens()
    out = []
    for i, j, k in combinations(range(pi.ring.nvars), 3):
        r = (bracket(g[i], pi.matrix[j][k], pi) + bracket(g[j], pi.matrix[k][i], pi)
             + bracket(g[k], pi.matrix[i][j], pi))
        out.append(((i, j, k), r))
    return out


def is_poisson(pi: Bivector) -> bool:
    return all(r.is_zero() for _, r in jacobi_residuals(pi))


class _PowerCache:
    def __init__(self, alpha):
        self.images = alpha.images
        self.cache = {}

    def power(self, k, e):
        key = (k, e)
        if key not in self.cache:
            self.cache[key] = self.images[k] ** e
        return self.cache[key]


def apply_endo(alpha: PolyEndo, f: RingPoly, _cache=None) -> RingPoly:
    """Substitute x_i -> alpha(x_i) and expand."""
    cache = _cache or _PowerCache(alpha)
    ring = alpha.ring
    out = ring.zero()
    for e, c in f.terms.items():
        term = ring.const(c)
        for k, ek in enumerate(e):
            if ek:
                term = term * cache.power(k, ek)
        out = out + term
    return out


def endo_applier(alpha: PolyEndo):
    """A reusable substitution function sharing one power cache."""
    cache = _PowerCache(alpha)
    return lambda f: apply_endo(alpha, f, cache)


def bracket_morphism_residual(alpha: PolyEndo, pi: Bivector) -> dict:
    """alpha({x_i,x_j}) - {alpha(x_i), alpha(x_j)} for i < j (nonzero only)."""
    out = {}
    for i, j in combinations(range(pi.ring.nvars), 2):
        r = apply_endo(alpha, pi.matrix[i][j]) - bracket(alpha.images[i], alpha.images[j], pi)
        if not r.is_zero():
            out[(i, j)] = r
    return out


def twisted_bracket_table(alpha: PolyEndo, pi: Bivector) -> Bivector:
    """Generator brackets of {,}_alpha = alpha o {,}."""
    return pi.map_entries(lambda p: apply_endo(alpha, p))


def jacobian_determinant(alpha: PolyEndo) -> RingPoly:
    if alpha.ring.nvars != 2:
        raise ValueError("the eq_alpha condition is stated for two variables")
    g1, g2 = alpha.images
    return g1.diff(0) * g2.diff(1) - g1.diff(1) * g2.diff(0)


def eq_alpha_residual(alpha: PolyEndo) -> RingPoly:
    """d_x a(x) d_y a(y) - d_y a(x) d_x a(y) - 1"""
    return jacobian_determinant(alpha) - 1


def degree1_constraint(alpha: PolyEndo) -> CoeffExpr:
    """a10 b01 - a01 b10 - 1 for images of degree <= 1."""
    if any(g.degree() > 1 for g in alpha.images):
        raise DegreeTooHigh("degree-1 constraint needs images of total degree at most 1")
    r = eq_alpha_residual(alpha)
    if r.degree() > 0:
        raise DegreeTooHigh("Jacobian of a degree-1 map must be constant")
    return r.coefficient((0, 0))


# ------------------------------------------------------------ truncation

def truncation_basis(ring: PolyRing, cap: int):
    return ring.monomials(cap)


def truncated_algebra(ring: PolyRing, cap: int, *, bracket_fn=None, alpha: PolyEndo | None = None,
                      mult_fn=None):
    """Finite-dimensional Hom-algebra on the monomials of degree <= cap.

    Products are evaluated in the polynomial ring, twisted by ``alpha`` when
    given (mu_alpha = alpha o mu, {,}_alpha = alpha o {,}), and projected onto
    the capped basis.  Returns (algebra, basis, dropped) where ``dropped``
    lists the basis pairs whose exact value had out-of-cap terms.
    """
    from .fdhom import HomAlgebra, LinMap, MultTable

    basis = truncation_basis(ring, cap)
    index = {e: k for k, e in enumerate(basis)}
    polys = [ring.monomial(e) for e in basis]
    apply = endo_applier(alpha) if alpha is not None else (lambda f: f)
    dropped = set()

    def project(p, where):
        vec = {}
        for e, c in p.terms.items():
            if e in index:
                vec[index[e]] = c
            else:
                dropped.add(where)
        return vec

    def table(fn, label):
        out = {}
        for a, pa in enumerate(polys):
            for b, pb in enumerate(polys):
                val = apply(fn(pa, pb))
                for k, c in project(val, (label, a, b)).items():
                    out[(a, b, k)] = c
        return MultTable(len(basis), out)

    mult = table(mult_fn or (lambda f, g: f * g), "mult")
    br = table(bracket_fn, "bracket") if bracket_fn is not None else None
    tw = {}
    for a, pa in enumerate(polys):
        for k, c in project(apply(pa), ("alpha", a, a)).items():
            tw[(a, k)] = c
    flags = ("antisymmetric",) if br is not None else ()
    A = HomAlgebra(dim=len(basis), mult=mult, twist=LinMap(len(basis), tw), bracket=br, flags=flags)
    return A, basis, sorted(dropped)


def degree_domain(basis, cap: int):
    """Accept basis input tuples whose total degree is <= cap."""
    degs = [sum(e) for e in basis]
    return lambda idx: sum(degs[k] for k in idx) <= cap


# --------------------------------------------------------------- JSON

def poly_from_text(ring, text, params=(), gaussian=True) -> RingPoly:
    return ring.parse(str(text), params, gaussian)


def bivector_from_json(ring, rows, params=(), gaussian=True) -> Bivector:
    return Bivector(ring, [[poly_from_text(ring, t, params, gaussian) for t in row] for row in rows])


def endo_from_json(ring, images, params=(), gaussian=True) -> PolyEndo:
    return PolyEndo(ring, [poly_from_text(ring, t, params, gaussian) for t in images])


def bivector_to_json(pi: Bivector):
    return [[str(p) for p in row] for row in pi.matrix]


def endo_to_json(alpha: PolyEndo):
    return [str(p) for p in alpha.images]


def binomial(n, k) -> Fraction:
    return Fraction(comb(n, k))
