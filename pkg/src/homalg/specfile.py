"""Input files: schema validation, digests, loading and instantiation."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from .coeff import IMAG, coeff, parse_coeff
from .errors import ParseError, SchemaError
from .fdhom import HomAlgebra, HomBialgebra, HomCoalgebra, LinMap, load_structure
from .fdhom.io import _Reader
from .polypois import PolyEndo, PolyRing, bivector_from_json, endo_from_json

KINDS = ("hom_algebra", "hom_coalgebra", "hom_bialgebra", "poly_poisson", "moyal_config",
         "deformation", "morphism")
FIELDS = {"Q": False, "Q(i)": True}
FIELD_ALIASES = {"Q": "Q", "Qi": "Q(i)", "Q(i)": "Q(i)"}


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    text = resources.files("homalg.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(obj, name: str):
    try:
        jsonschema.validate(obj, schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{name}: {exc.message} at {where}") from None


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


@dataclass
class SpecFile:
    kind: str
    field: str
    params: list
    payload: dict
    unknowns: list = field(default_factory=list)
    description: str = ""
    origin: dict | None = None

    @property
    def gaussian(self) -> bool:
        return FIELDS[self.field]

    @property
    def all_params(self) -> list:
        return sorted(set(self.params) | set(self.payload.get("params", [])))

    def to_json(self) -> dict:
        out = {"kind": self.kind, "field": self.field, "params": list(self.params), "payload": self.payload}
        if self.unknowns:
            out["unknowns"] = list(self.unknowns)
        if self.description:
            out["description"] = self.description
        if self.origin is not None:
            out["origin"] = self.origin
        return out

    def digest(self) -> str:
        return digest(self.to_json())


def parse_spec(obj) -> SpecFile:
    validate(obj, "specfile")
    kind = obj["kind"]
    validate(obj["payload"], kind)
    spec = SpecFile(kind=kind, field=obj["field"], params=list(obj["params"]), payload=obj["payload"],
                    unknowns=list(obj.get("unknowns", [])), description=obj.get("description", ""),
                    origin=obj.get("origin"))
    names = set(spec.all_params)
    if IMAG in names:
        raise SchemaError("'i' is reserved for the imaginary unit and cannot be a parameter")
    missing = set(spec.unknowns) - names
    if missing:
        raise SchemaError(f"unknowns {sorted(missing)} are not declared parameters")
    return spec


def read_spec(path) -> SpecFile:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None
    return parse_spec(obj)


def with_field(spec: SpecFile, field_name: str | None) -> SpecFile:
    if field_name is None:
        return spec
    if field_name not in FIELD_ALIASES:
        raise SchemaError(f"unknown field {field_name!r}")
    spec.field = FIELD_ALIASES[field_name]
    return spec


# ------------------------------------------------------------ structures

def build_structure(spec: SpecFile):
    try:
        if spec.kind in ("hom_algebra", "hom_coalgebra", "hom_bialgebra"):
            return load_structure(spec.payload, spec.all_params, spec.gaussian, spec.kind)
        if spec.kind == "poly_poisson":
            return build_poly(spec)
        if spec.kind == "morphism":
            return build_morphism(spec)
    except ParseError as exc:
        raise SchemaError(str(exc)) from None
    raise SchemaError(f"kind {spec.kind!r} has no structure reader")


def build_poly(spec: SpecFile):
    p = spec.payload
    ring = PolyRing(tuple(p["vars"]))
    pi = bivector_from_json(ring, p["bivector"], spec.all_params, spec.gaussian)
    alpha = endo_from_json(ring, p["alpha"], spec.all_params, spec.gaussian) if "alpha" in p else None
    return ring, pi, alpha


def build_morphism(spec: SpecFile):
    p = spec.payload
    if "images" in p:
        ring = PolyRing(tuple(p["vars"]))
        return endo_from_json(ring, p["images"], spec.all_params, spec.gaussian)
    if "dim" not in p:
        raise SchemaError("morphism payload needs either dim/alpha or vars/images")
    reader = _Reader(p, spec.all_params, spec.gaussian)
    return reader.linmap(p.get("alpha", [])) or LinMap(p["dim"], {})


def parse_instantiation(items, spec: SpecFile | None = None) -> dict:
    """["a=2", "b=-1/3"] -> {"a": Fraction(2), ...}; values may be rational
    expressions (and use i over Q(i))."""
    out = {}
    for item in items or ():
        if "=" not in item:
            raise SchemaError(f"instantiation {item!r} must look like name=value")
        name, value = (s.strip() for s in item.split("=", 1))
        if spec is not None and name not in spec.all_params:
            raise SchemaError(f"cannot instantiate undeclared parameter {name!r}")
        try:
            val = parse_coeff(value, (), spec.gaussian if spec else True)
        except ParseError as exc:
            raise SchemaError(str(exc)) from None
        out[name] = val.const_value() if val.is_const() else val
    return out


def _subs_vec(v, values):
    return None if v is None else tuple(c.subs(values) for c in v)


def _subs_table(t, values):
    return None if t is None else t.map_entries(lambda c: c.subs(values))


def instantiate(X, values):
    """Substitute parameter values into any loaded structure."""
    if not values:
        return X
    if isinstance(X, HomAlgebra):
        return HomAlgebra(dim=X.dim, mult=_subs_table(X.mult, values),
                          twist=X.twist.map_entries(lambda c: c.subs(values)),
                          unit=_subs_vec(X.unit, values), bracket=_subs_table(X.bracket, values),
                          flags=X.flags)
    if isinstance(X, HomCoalgebra):
        return HomCoalgebra(dim=X.dim, coproduct=_subs_table(X.coproduct, values),
                            twist=X.twist.map_entries(lambda c: c.subs(values)),
                            counit=_subs_vec(X.counit, values), cobracket=_subs_table(X.cobracket, values),
                            flags=X.flags)
    if isinstance(X, HomBialgebra):
        return HomBialgebra(instantiate(X.algebra, values), instantiate(X.coalgebra, values))
    if isinstance(X, LinMap):
        return X.map_entries(lambda c: c.subs(values))
    if isinstance(X, PolyEndo):
        return PolyEndo(X.ring, [g.subs_params(values) for g in X.images])
    if isinstance(X, tuple) and len(X) == 3:
        ring, pi, alpha = X
        return ring, pi.map_entries(lambda p: p.subs_params(values)), instantiate(alpha, values) \
            if alpha is not None else None
    raise TypeError(f"cannot instantiate {type(X).__name__}")


def rational_text(v) -> str:
    return str(coeff(v)) if not isinstance(v, Fraction) else str(coeff(v))
