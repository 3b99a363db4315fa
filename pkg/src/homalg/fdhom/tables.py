"""Structure-constant containers and residual tensors.

Indices are 0-based internally and 1-based in every serialized form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..coeff import ONE, ZERO, CoeffExpr, coeff


def _clean(entries: Mapping) -> dict:
    out = {}
    for key in sorted(entries):
        c = coeff(entries[key])
        if c:
            out[key] = c
    return out


class MultTable:
    """Rank-3 tensor C[i][j][k]; as a product e_i e_j = sum_k C[i][j][k] e_k,
    as a coproduct Delta(e_k) = sum_{i,j} C[i][j][k] e_i (x) e_j."""

    __slots__ = ("dim", "entries", "_by_pair", "_by_out")

    def __init__(self, dim: int, entries: Mapping[tuple, object] | None = None):
        self.dim = dim
        self.entries = _clean(entries or {})
        for i, j, k in self.entries:
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise IndexError(f"index ({i},{j},{k}) outside dimension {dim}")
        self._by_pair = None
        self._by_out = None

    @classmethod
    def zero(cls, dim: int) -> "MultTable":
        return cls(dim)

    @classmethod
    def from_dense(cls, dense) -> "MultTable":
        n = len(dense)
        return cls(n, {(i, j, k): dense[i][j][k]
                       for i in range(n) for j in range(n) for k in range(n)})

    def get(self, i, j, k) -> CoeffExpr:
        return self.entries.get((i, j, k), ZERO)

    def dense(self):
        n = self.dim
        return [[[self.get(i, j, k) for k in range(n)] for j in range(n)] for i in range(n)]

    def product(self, i, j) -> dict:
        """Sparse image of e_i (x) e_j under the product."""
        if self._by_pair is None:
            by = {}
            for (a, b, k), c in self.entries.items():
                by.setdefault((a, b), {})[k] = c
            self._by_pair = by
        return self._by_pair.get((i, j), {})

    def coproduct(self, k) -> dict:
        """Sparse image of e_k under the coproduct, keyed by (i, j)."""
        if self._by_out is None:
            by = {}
            for (a, b, kk), c in self.entries.items():
                by.setdefault(kk, {})[(a, b)] = c
            self._by_out = by
        return self._by_out.get(k, {})

    def opposite(self) -> "MultTable":
        return MultTable(self.dim, {(j, i, k): c for (i, j, k), c in self.entries.items()})

    def map_entries(self, fn) -> "MultTable":
        return MultTable(self.dim, {key: fn(c) for key, c in self.entries.items()})

    def scale(self, s) -> "MultTable":
        s = coeff(s)
        return self.map_entries(lambda c: c * s)

    def __add__(self, other: "MultTable") -> "MultTable":
        out = dict(self.entries)
        for key, c in other.entries.items():
            out[key] = out.get(key, ZERO) + c
        return MultTable(self.dim, out)

    def __sub__(self, other: "MultTable") -> "MultTable":
        return self + other.scale(-1)

    def variables(self) -> frozenset:
        out = frozenset()
        for c in self.entries.values():
            out |= c.variables()
        return out

    def __eq__(self, other):
        return isinstance(other, MultTable) and self.dim == other.dim and self.entries == other.entries

    def __hash__(self):
        return hash((self.dim, tuple(self.entries.items())))

    def __repr__(self):
        inner = ", ".join(f"{i+1}{j+1}->{k+1}: {c}" for (i, j, k), c in self.entries.items())
        return f"MultTable(dim={self.dim}, {{{inner}}})"


class LinMap:
    """Square matrix A[i][s] with alpha(e_i) = sum_s A[i][s] e_s."""

    __slots__ = ("dim", "entries", "_rows")

    def __init__(self, dim: int, entries: Mapping[tuple, object] | None = None):
        self.dim = dim
        self.entries = _clean(entries or {})
        for i, s in self.entries:
            if not (0 <= i < dim and 0 <= s < dim):
                raise IndexError(f"index ({i},{s}) outside dimension {dim}")
        self._rows = None

    @classmethod
    def identity(cls, dim: int) -> "LinMap":
        return cls(dim, {(i, i): ONE for i in range(dim)})

    @classmethod
    def diagonal(cls, values) -> "LinMap":
        values = list(values)
        return cls(len(values), {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def from_dense(cls, rows) -> "LinMap":
        n = len(rows)
        return cls(n, {(i, s): rows[i][s] for i in range(n) for s in range(n)})

    def get(self, i, s) -> CoeffExpr:
        return self.entries.get((i, s), ZERO)

    def dense(self):
        return [[self.get(i, s) for s in range(self.dim)] for i in range(self.dim)]

    def row(self, i) -> dict:
        if self._rows is None:
            rows = {}
            for (a, s), c in self.entries.items():
                rows.setdefault(a, {})[s] = c
            self._rows = rows
        return self._rows.get(i, {})

    def apply(self, vec: Mapping[int, CoeffExpr]) -> dict:
        out = {}
        for i, c in vec.items():
            for s, a in self.row(i).items():
                out[s] = out.get(s, ZERO) + c * a
        return {s: c for s, c in out.items() if c}

    def then(self, other: "LinMap") -> "LinMap":
        """other o self: apply self first."""
        out = {}
        for (i, p), a in self.entries.items():
            for s, b in other.row(p).items():
                out[(i, s)] = out.get((i, s), ZERO) + a * b
        return LinMap(self.dim, out)

    def transpose(self) -> "LinMap":
        return LinMap(self.dim, {(s, i): c for (i, s), c in self.entries.items()})

    def power(self, n: int) -> "LinMap":
        out = LinMap.identity(self.dim)
        for _ in range(n):
            out = out.then(self)
        return out

    def is_identity(self) -> bool:
        return self == LinMap.identity(self.dim)

    def map_entries(self, fn) -> "LinMap":
        return LinMap(self.dim, {key: fn(c) for key, c in self.entries.items()})

    def variables(self) -> frozenset:
        out = frozenset()
        for c in self.entries.values():
            out |= c.variables()
        return out

    def __eq__(self, other):
        return isinstance(other, LinMap) and self.dim == other.dim and self.entries == other.entries

    def __hash__(self):
        return hash((self.dim, tuple(self.entries.items())))

    def __repr__(self):
        inner = ", ".join(f"{i+1}->{s+1}: {c}" for (i, s), c in self.entries.items())
        return f"LinMap(dim={self.dim}, {{{inner}}})"


def _vector(dim, values):
    if values is None:
        return None
    values = tuple(coeff(v) for v in values)
    if len(values) != dim:
        raise ValueError(f"vector of length {len(values)} in dimension {dim}")
    return values


@dataclass(frozen=True, eq=True)
class HomAlgebra:
    """(A, mu, alpha) with optional unit and optional bracket.

    Flags are claims checked on construction: ``antisymmetric`` (bracket),
    ``commutative`` (mult) and ``multiplicative`` (alpha for every operation
    present).
    """

    dim: int
    mult: MultTable | None = None
    twist: LinMap | None = None
    unit: tuple | None = None
    bracket: MultTable | None = None
    flags: tuple = ()

    def __post_init__(self):
        if self.twist is None:
            object.__setattr__(self, "twist", LinMap.identity(self.dim))
        object.__setattr__(self, "unit", _vector(self.dim, self.unit))
        object.__setattr__(self, "flags", tuple(sorted(set(self.flags))))
        for t in (self.mult, self.bracket, self.twist):
            if t is not None and t.dim != self.dim:
                raise ValueError("table dimension differs from the algebra dimension")
        from . import laws  # local import: laws depend on this module
        from ..errors import NotAntisymmetric, NotMultiplicative
        if "antisymmetric" in self.flags:
            r = laws.antisymmetry(self)
            if not r.holds:
                raise NotAntisymmetric(r)
        if "commutative" in self.flags:
            r = laws.commutativity(self)
            if not r.holds:
                raise ValueError(f"product flagged commutative fails at {r.first_witness()}")
        if "multiplicative" in self.flags:
            for name in ("multiplicativity", "bracket_multiplicativity"):
                needs = "mult" if name == "multiplicativity" else "bracket"
                if getattr(self, needs) is not None:
                    r = laws.check_law(self, name)
                    if not r.holds:
                        raise NotMultiplicative(r)

    def with_(self, **changes) -> "HomAlgebra":
        data = dict(dim=self.dim, mult=self.mult, twist=self.twist, unit=self.unit,
                    bracket=self.bracket, flags=self.flags)
        data.update(changes)
        return HomAlgebra(**data)

    def variables(self) -> frozenset:
        out = self.twist.variables()
        for t in (self.mult, self.bracket):
            if t is not None:
                out |= t.variables()
        for c in self.unit or ():
            out |= c.variables()
        return out


@dataclass(frozen=True, eq=True)
class HomCoalgebra:
    """(A, Delta, alpha) with optional counit and optional cobracket."""

    dim: int
    coproduct: MultTable | None = None
    twist: LinMap | None = None
    counit: tuple | None = None
    cobracket: MultTable | None = None
    flags: tuple = ()

    def __post_init__(self):
        if self.twist is None:
            object.__setattr__(self, "twist", LinMap.identity(self.dim))
        object.__setattr__(self, "counit", _vector(self.dim, self.counit))
        object.__setattr__(self, "flags", tuple(sorted(set(self.flags))))
        for t in (self.coproduct, self.cobracket, self.twist):
            if t is not None and t.dim != self.dim:
                raise ValueError("table dimension differs from the coalgebra dimension")
        from . import laws
        from ..errors import NotAntisymmetric, NotComorphism
        if "antisymmetric" in self.flags:
            r = laws.coantisymmetry(self)
            if not r.holds:
                raise NotAntisymmetric(r, what="cobracket")
        if "cocommutative" in self.flags:
            r = laws.cocommutativity(self)
            if not r.holds:
                raise ValueError(f"coproduct flagged cocommutative fails at {r.first_witness()}")
        if "multiplicative" in self.flags and self.coproduct is not None:
            r = laws.check_law(self, "comultiplicativity")
            if not r.holds:
                raise NotComorphism(r)

    def with_(self, **changes) -> "HomCoalgebra":
        data = dict(dim=self.dim, coproduct=self.coproduct, twist=self.twist, counit=self.counit,
                    cobracket=self.cobracket, flags=self.flags)
        data.update(changes)
        return HomCoalgebra(**data)

    def variables(self) -> frozenset:
        out = self.twist.variables()
        for t in (self.coproduct, self.cobracket):
            if t is not None:
                out |= t.variables()
        for c in self.counit or ():
            out |= c.variables()
        return out


@dataclass(frozen=True, eq=True)
class HomBialgebra:
    """Algebra and coalgebra data on one space; the two twists may differ."""

    algebra: HomAlgebra
    coalgebra: HomCoalgebra

    def __post_init__(self):
        if self.algebra.dim != self.coalgebra.dim:
            raise ValueError("algebra and coalgebra dimensions differ")

    @property
    def dim(self):
        return self.algebra.dim

    def variables(self) -> frozenset:
        return self.algebra.variables() | self.coalgebra.variables()


@dataclass(frozen=True)
class Residual:
    """Sparse defect tensor of a law, keyed by (inputs..., outputs...)."""

    law: str
    n_in: int
    n_out: int
    entries: Mapping[tuple, CoeffExpr] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", {k: self.entries[k] for k in sorted(self.entries)
                                             if self.entries[k]})

    @property
    def holds(self) -> bool:
        return not self.entries

    def is_zero(self) -> bool:
        return not self.entries

    @property
    def shape(self) -> int:
        return self.n_in + self.n_out

    def __len__(self):
        return len(self.entries)

    def get(self, *idx) -> CoeffExpr:
        return self.entries.get(tuple(idx), ZERO)

    def first_witness(self):
        if not self.entries:
            return None
        key = next(iter(self.entries))
        return tuple(k + 1 for k in key), str(self.entries[key])

    def witnesses(self, limit: int | None = None):
        """(1-based index tuple, canonical text) pairs in sorted order."""
        items = list(self.entries.items())
        if limit is not None:
            items = items[:limit]
        return [(tuple(k + 1 for k in key), str(c)) for key, c in items]

    def transposed(self) -> "Residual":
        n = self.n_in
        return Residual(self.law, self.n_out, self.n_in,
                        {key[n:] + key[:n]: c for key, c in self.entries.items()})

    def renamed(self, law: str) -> "Residual":
        return Residual(law, self.n_in, self.n_out, self.entries)

    def subs(self, values) -> "Residual":
        return Residual(self.law, self.n_in, self.n_out,
                        {k: c.subs(values) for k, c in self.entries.items()})

    def constraints(self) -> list:
        """Distinct nonzero entries up to a scalar, in canonical order."""
        seen = {}
        for c in self.entries.values():
            m = c.monic()
            seen.setdefault(str(m), m)
        return [seen[k] for k in sorted(seen)]

    def to_json(self, limit: int | None = None) -> dict:
        return {
            "law": self.law,
            "arity": [self.n_in, self.n_out],
            "entries": [list(k) + [c] for k, c in self.witnesses(limit)],
        }


def basis_tuples(dim: int, arity: int) -> Iterable[tuple]:
    from itertools import product
    return product(range(dim), repeat=arity)
