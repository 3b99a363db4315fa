"""Twisting, commutators, polarization and duality."""

from __future__ import annotations

from fractions import Fraction

from ..coeff import ZERO
from ..errors import MissingTable, NotComorphism, NotMultiplicative
from . import laws
from .tables import HomAlgebra, HomBialgebra, HomCoalgebra, LinMap, MultTable


def post_compose(table: MultTable, beta: LinMap) -> MultTable:
    """beta o mu"""
    out = {}
    for (i, j, p), c in table.entries.items():
        for k, b in beta.row(p).items():
            out[(i, j, k)] = out.get((i, j, k), ZERO) + c * b
    return MultTable(table.dim, out)


def pre_compose(table: MultTable, beta: LinMap) -> MultTable:
    """Delta o beta, tensor read as a coproduct"""
    out = {}
    for (k, p), b in beta.entries.items():
        for (i, j), c in table.coproduct(p).items():
            out[(i, j, k)] = out.get((i, j, k), ZERO) + b * c
    return MultTable(table.dim, out)


def _strip(flags, *names):
    return tuple(f for f in flags if f not in names)


def twist_algebra(A: HomAlgebra, beta: LinMap, weak: bool = False) -> HomAlgebra:
    """(A, beta o mu, beta o alpha), brackets twisted alongside."""
    if beta.dim != A.dim:
        raise ValueError("twist map dimension differs from the algebra")
    if not weak:
        probe = A.with_(twist=beta, flags=_strip(A.flags, "multiplicative"))
        for name, table in (("multiplicativity", A.mult), ("bracket_multiplicativity", A.bracket)):
            if table is not None:
                r = laws.check_law(probe, name)
                if not r.holds:
                    raise NotMultiplicative(r)
    return HomAlgebra(
        dim=A.dim,
        mult=None if A.mult is None else post_compose(A.mult, beta),
        twist=A.twist.then(beta),
        unit=A.unit,
        bracket=None if A.bracket is None else post_compose(A.bracket, beta),
        flags=_strip(A.flags, "multiplicative"),
    )


def comorphism_residuals(C: HomCoalgebra, beta: LinMap) -> list:
    probe = C.with_(twist=beta, flags=_strip(C.flags, "multiplicative"))
    out = []
    for name, table in (("comultiplicativity", C.coproduct), ("cobracket_comultiplicativity", C.cobracket)):
        if table is not None:
            out.append(laws.check_law(probe, name))
    return out


def twist_coalgebra(C: HomCoalgebra, beta: LinMap) -> HomCoalgebra:
    """(A, Delta o beta, alpha o beta), counit kept."""
    if beta.dim != C.dim:
        raise ValueError("twist map dimension differs from the coalgebra")
    for r in comorphism_residuals(C, beta):
        if not r.holds:
            raise NotComorphism(r)
    return HomCoalgebra(
        dim=C.dim,
        coproduct=None if C.coproduct is None else pre_compose(C.coproduct, beta),
        twist=beta.then(C.twist),
        counit=C.counit,
        cobracket=None if C.cobracket is None else pre_compose(C.cobracket, beta),
        flags=_strip(C.flags, "multiplicative"),
    )


def commutator_hlie(A: HomAlgebra) -> HomAlgebra:
    """Attach [x, y] = xy - yx as bracket."""
    if A.mult is None:
        raise MissingTable("commutator", "mult")
    return A.with_(bracket=A.mult - A.mult.opposite(), flags=tuple(set(A.flags) | {"antisymmetric"}))


def polarize(A: HomAlgebra) -> HomAlgebra:
    """x . y  ->  (x.y + y.x, x.y - y.x)"""
    if A.mult is None:
        raise MissingTable("polarize", "mult")
    op = A.mult.opposite()
    return HomAlgebra(dim=A.dim, mult=A.mult + op, twist=A.twist, unit=A.unit,
                      bracket=A.mult - op, flags=("antisymmetric", "commutative"))


def depolarize(A: HomAlgebra) -> HomAlgebra:
    """(a . b, {a, b})  ->  x . y = (x . y + {x, y}) / 2"""
    if A.mult is None or A.bracket is None:
        raise MissingTable("depolarize", "mult" if A.mult is None else "bracket")
    half = Fraction(1, 2)
    return HomAlgebra(dim=A.dim, mult=(A.mult + A.bracket).scale(half), twist=A.twist, unit=A.unit)


_FLAG_DUAL = {"commutative": "cocommutative", "cocommutative": "commutative",
              "antisymmetric": "antisymmetric", "multiplicative": "multiplicative"}


def dualize(X):
    """Finite-dimensional dual: the same tensors read the other way round,
    twist transposed, unit and counit exchanged."""
    if isinstance(X, HomBialgebra):
        return HomBialgebra(algebra=dualize(X.coalgebra), coalgebra=dualize(X.algebra))
    flags = tuple(_FLAG_DUAL[f] for f in X.flags)
    if isinstance(X, HomAlgebra):
        return HomCoalgebra(dim=X.dim, coproduct=X.mult, twist=X.twist.transpose(),
                            counit=X.unit, cobracket=X.bracket, flags=flags)
    if isinstance(X, HomCoalgebra):
        return HomAlgebra(dim=X.dim, mult=X.coproduct, twist=X.twist.transpose(),
                          unit=X.counit, bracket=X.cobracket, flags=flags)
    raise TypeError(f"cannot dualize {type(X).__name__}")
