"""JSON form of algebras and coalgebras (1-based indices, canonical text)."""

from __future__ import annotations

from ..coeff import parse_coeff
from ..errors import SchemaError
from .tables import HomAlgebra, HomBialgebra, HomCoalgebra, LinMap, MultTable

ALGEBRA_KEYS = {"dim", "params", "mult", "bracket", "alpha", "unit", "flags"}
COALGEBRA_KEYS = {"dim", "params", "coproduct", "cobracket", "alpha", "counit", "flags"}
BIALGEBRA_KEYS = ALGEBRA_KEYS | COALGEBRA_KEYS | {"beta"}

ALGEBRA_FLAGS = {"antisymmetric", "commutative", "multiplicative"}
COALGEBRA_FLAGS = {"antisymmetric", "cocommutative", "multiplicative"}


class _Reader:
    def __init__(self, obj, params, gaussian):
        self.dim = obj.get("dim")
        if not isinstance(self.dim, int) or self.dim < 0:
            raise SchemaError("dim must be a non-negative integer")
        names = list(obj.get("params", [])) + list(params or [])
        self.names = set(names)
        self.gaussian = gaussian

    def c(self, text):
        try:
            return parse_coeff(str(text), self.names, self.gaussian)
        except ValueError as exc:
            raise SchemaError(str(exc)) from None

    def idx(self, k):
        if not isinstance(k, int) or not 1 <= k <= self.dim:
            raise SchemaError(f"index {k!r} outside 1..{self.dim}")
        return k - 1

    def table(self, rows):
        if rows is None:
            return None
        out = {}
        for row in rows:
            if len(row) != 4:
                raise SchemaError(f"table entry {row!r} must be [i, j, k, coeff]")
            key = (self.idx(row[0]), self.idx(row[1]), self.idx(row[2]))
            if key in out:
                raise SchemaError(f"duplicate table entry {row[:3]!r}")
            out[key] = self.c(row[3])
        return MultTable(self.dim, out)

    def linmap(self, rows):
        if rows is None:
            return None
        out = {}
        for row in rows:
            if len(row) != 3:
                raise SchemaError(f"map entry {row!r} must be [i, s, coeff]")
            key = (self.idx(row[0]), self.idx(row[1]))
            if key in out:
                raise SchemaError(f"duplicate map entry {row[:2]!r}")
            out[key] = self.c(row[2])
        return LinMap(self.dim, out)

    def vector(self, rows):
        if rows is None:
            return None
        vec = [self.c(0)] * self.dim
        for row in rows:
            if len(row) != 2:
                raise SchemaError(f"vector entry {row!r} must be [k, coeff]")
            vec[self.idx(row[0])] = self.c(row[1])
        return tuple(vec)


def _flags(obj, allowed):
    flags = obj.get("flags", {})
    bad = set(flags) - allowed
    if bad:
        raise SchemaError(f"unknown flags {sorted(bad)}")
    return tuple(sorted(k for k, v in flags.items() if v))


def _keys(obj, allowed, what):
    bad = set(obj) - allowed
    if bad:
        raise SchemaError(f"unknown {what} fields {sorted(bad)}")


def algebra_from_json(obj, params=None, gaussian=True) -> HomAlgebra:
    _keys(obj, ALGEBRA_KEYS, "algebra")
    r = _Reader(obj, params, gaussian)
    return HomAlgebra(dim=r.dim, mult=r.table(obj.get("mult")), twist=r.linmap(obj.get("alpha")),
                      unit=r.vector(obj.get("unit")), bracket=r.table(obj.get("bracket")),
                      flags=_flags(obj, ALGEBRA_FLAGS))


def coalgebra_from_json(obj, params=None, gaussian=True) -> HomCoalgebra:
    _keys(obj, COALGEBRA_KEYS, "coalgebra")
    r = _Reader(obj, params, gaussian)
    return HomCoalgebra(dim=r.dim, coproduct=r.table(obj.get("coproduct")),
                        twist=r.linmap(obj.get("alpha")), counit=r.vector(obj.get("counit")),
                        cobracket=r.table(obj.get("cobracket")), flags=_flags(obj, COALGEBRA_FLAGS))


def bialgebra_from_json(obj, params=None, gaussian=True) -> HomBialgebra:
    _keys(obj, BIALGEBRA_KEYS, "bialgebra")
    r = _Reader(obj, params, gaussian)
    alpha = r.linmap(obj.get("alpha"))
    beta = r.linmap(obj.get("beta")) if "beta" in obj else alpha
    flags = obj.get("flags", {})
    return HomBialgebra(
        algebra=HomAlgebra(dim=r.dim, mult=r.table(obj.get("mult")), twist=alpha,
                           unit=r.vector(obj.get("unit")), bracket=r.table(obj.get("bracket")),
                           flags=_flags({"flags": {k: v for k, v in flags.items() if k in ALGEBRA_FLAGS}},
                                        ALGEBRA_FLAGS)),
        coalgebra=HomCoalgebra(dim=r.dim, coproduct=r.table(obj.get("coproduct")), twist=beta,
                               counit=r.vector(obj.get("counit")), cobracket=r.table(obj.get("cobracket")),
                               flags=_flags({"flags": {k: v for k, v in flags.items() if k in COALGEBRA_FLAGS}},
                                            COALGEBRA_FLAGS)),
    )


def load_structure(obj, params=None, gaussian=True, kind=None):
    """Pick the reader from ``kind`` or from the keys present."""
    if kind is None:
        has_alg = any(k in obj for k in ("mult", "bracket", "unit"))
        has_co = any(k in obj for k in ("coproduct", "cobracket", "counit"))
        kind = "hom_bialgebra" if has_alg and has_co else ("hom_coalgebra" if has_co else "hom_algebra")
    reader = {"hom_algebra": algebra_from_json, "hom_coalgebra": coalgebra_from_json,
              "hom_bialgebra": bialgebra_from_json}[kind]
    return reader(obj, params, gaussian)


# ----------------------------------------------------------------- writing

def _table_rows(t):
    return [[i + 1, j + 1, k + 1, str(c)] for (i, j, k), c in t.entries.items()]


def _map_rows(m):
    return [[i + 1, s + 1, str(c)] for (i, s), c in m.entries.items()]


def _vec_rows(v):
    return [[k + 1, str(c)] for k, c in enumerate(v) if c]


def _params(X):
    return sorted(v for v in X.variables() if v != "i")


def algebra_to_json(A: HomAlgebra, params=None) -> dict:
    out = {"dim": A.dim, "params": sorted(params) if params is not None else _params(A)}
    if A.mult is not None:
        out["mult"] = _table_rows(A.mult)
    if A.bracket is not None:
        out["bracket"] = _table_rows(A.bracket)
    out["alpha"] = _map_rows(A.twist)
    if A.unit is not None:
        out["unit"] = _vec_rows(A.unit)
    if A.flags:
        out["flags"] = {f: True for f in A.flags}
    return out


def coalgebra_to_json(C: HomCoalgebra, params=None) -> dict:
    out = {"dim": C.dim, "params": sorted(params) if params is not None else _params(C)}
    if C.coproduct is not None:
        out["coproduct"] = _table_rows(C.coproduct)
    if C.cobracket is not None:
        out["cobracket"] = _table_rows(C.cobracket)
    out["alpha"] = _map_rows(C.twist)
    if C.counit is not None:
        out["counit"] = _vec_rows(C.counit)
    if C.flags:
        out["flags"] = {f: True for f in C.flags}
    return out


def bialgebra_to_json(B: HomBialgebra, params=None) -> dict:
    a = algebra_to_json(B.algebra, params)
    c = coalgebra_to_json(B.coalgebra, params)
    out = dict(a)
    for k, v in c.items():
        if k == "alpha":
            if B.coalgebra.twist != B.algebra.twist:
                out["beta"] = v
        elif k == "flags":
            out["flags"] = {**a.get("flags", {}), **v}
        elif k == "params":
            out["params"] = sorted(set(a["params"]) | set(v))
        else:
            out[k] = v
    return out


def structure_to_json(X, params=None) -> dict:
    if isinstance(X, HomBialgebra):
        return bialgebra_to_json(X, params)
    if isinstance(X, HomCoalgebra):
        return coalgebra_to_json(X, params)
    return algebra_to_json(X, params)
