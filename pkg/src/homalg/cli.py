"""Command-line front end.

    homalg check SPEC [--law L ...]
    homalg twist SPEC MORPHISM [--weak] [-o OUT]
    homalg solve-poisson SPEC
    homalg moyal CONFIG [--harness assoc|intertwine|families]

Reports are JSON objects {"report": ..., "timing": ...}; the report body is
a pure function of the inputs and options.  Exit status: 0 every law holds,
1 some law fails, 2 conditional on parameter constraints, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from itertools import combinations

from . import __version__
from .coeff import CoeffExpr
from .errors import HomAlgError, MissingTable, SchemaError, UnsupportedLaw
from .fdhom import (Deformation, HomAlgebra, HomBialgebra, HomCoalgebra, LinMap, check_deformation,
                    check_law, expand_laws, quasi_classical_limit, structure_to_json, twist_algebra)
from .fdhom.constructions import comorphism_residuals
from .fdhom.io import _Reader, algebra_from_json
from .homsolve import find_poisson_products
from .moyal import (FAMILIES, MoyalConfig, associator, family_report, intertwine_residual, sigma_from_tau,
                    twisted_hom_associator)
from .polypois import (PolyEndo, PolyRing, bivector_to_json, bracket, bracket_morphism_residual,
                       degree_domain, endo_from_json, endo_to_json, eq_alpha_residual, jacobi_residuals,
                       truncated_algebra)
from .specfile import (SpecFile, build_structure, canonical_json, instantiate, parse_instantiation, read_spec,
                       with_field)

EXIT = {"holds": 0, "fails": 1, "conditional": 2}
EXIT_INPUT = 3
WITNESS_LIMIT = 10
CONSTRAINT_LIMIT = 25
TEXT_WIDTH = 160


# ---------------------------------------------------------------- status

class Options:
    def __init__(self, unknowns=(), order=None, degree=None, weak=False):
        self.unknowns = frozenset(unknowns)
        self.order = order
        self.degree = degree
        self.weak = weak


def _involves(v, unknowns) -> bool:
    if isinstance(v, CoeffExpr):
        return bool(v.variables() & unknowns)
    return bool(v.params() & unknowns)


def _constraints(values) -> list:
    seen = set()
    for v in values:
        if isinstance(v, CoeffExpr):
            seen.add(v.monic())
        else:
            for c in v.terms.values():
                seen.add(c.monic())
    return [str(c) for c in sorted(seen, key=str)]


def result(law, entries, opts: Options, extra=None) -> dict:
    """entries: sorted list of (index tuple or label, value) nonzero only."""
    if not entries:
        status = "holds"
    elif opts.unknowns and all(_involves(v, opts.unknowns) for _, v in entries):
        status = "conditional"
    else:
        status = "fails"
    out = {"law": law, "status": status, "nonzero": len(entries)}
    if entries:
        out["witnesses"] = [{"index": list(k) if isinstance(k, tuple) else k, "value": str(v)}
                            for k, v in entries[:WITNESS_LIMIT]]
        cons = _constraints([v for _, v in entries])
        out["constraints"] = cons[:CONSTRAINT_LIMIT]
        if len(cons) > CONSTRAINT_LIMIT:
            out["constraints_total"] = len(cons)
    if extra:
        out.update(extra)
    return out


def residual_result(law, r, opts, extra=None):
    entries = [(tuple(i + 1 for i in k), v) for k, v in r.entries.items()]
    return result(law, entries, opts, extra)


def overall(results) -> str:
    statuses = {r["status"] for r in results}
    if "fails" in statuses:
        return "fails"
    if "conditional" in statuses:
        return "conditional"
    return "holds"


# ------------------------------------------------------------ structures

def default_laws(X) -> list:
    if isinstance(X, HomBialgebra):
        laws = ["hom_bialgebra"]
        if X.algebra.bracket is not None and X.coalgebra.cobracket is not None:
            laws.append("hom_lie_bialgebra")
        return laws
    if isinstance(X, HomAlgebra):
        laws = []
        if X.mult is not None and X.bracket is not None:
            laws.append("hom_poisson")
        elif X.mult is not None:
            laws.append("hom_assoc")
        elif X.bracket is not None:
            laws.append("hom_lie")
        if X.unit is not None:
            laws.append("unitality")
        return laws or ["hom_assoc"]
    if isinstance(X, HomCoalgebra):
        laws = []
        if X.coproduct is not None and X.cobracket is not None:
            laws.append("hom_copoisson")
        elif X.coproduct is not None:
            laws.append("hom_coassoc")
        elif X.cobracket is not None:
            laws += ["coantisymmetry", "hom_cojacobi"]
        if X.counit is not None:
            laws.append("counitality")
        return laws or ["hom_coassoc"]
    raise TypeError(type(X).__name__)


def check_fd(X, laws, opts) -> list:
    out = []
    for law in expand_laws(laws):
        try:
            r = check_law(X, law)
        except MissingTable as exc:
            raise UnsupportedLaw(f"{law}: {exc}") from None
        out.append(residual_result(law, r, opts))
    return out


POLY_LAWS = ("jacobi", "bracket_morphism", "eq_alpha", "twisted_brackets", "truncated_hom_poisson")


def check_poly(structure, laws, opts, cap_default) -> tuple:
    ring, pi, alpha = structure
    laws = list(laws or (["jacobi"] + (["bracket_morphism"] if alpha is not None else [])))
    out, details = [], {}
    for law in laws:
        if law not in POLY_LAWS:
            raise UnsupportedLaw(f"unknown polynomial law {law!r}; choose from {', '.join(POLY_LAWS)}")
        if law != "jacobi" and alpha is None:
            raise UnsupportedLaw(f"{law} needs a twisting map (payload field alpha)")
        if law == "jacobi":
            entries = [(tuple(k + 1 for k in t), r) for t, r in jacobi_residuals(pi) if not r.is_zero()]
            out.append(result(law, entries, opts))
        elif law == "bracket_morphism":
            res = bracket_morphism_residual(alpha, pi)
            out.append(result(law, [((i + 1, j + 1), r) for (i, j), r in sorted(res.items())], opts))
        elif law == "eq_alpha":
            if ring.nvars != 2:
                raise UnsupportedLaw("eq_alpha needs two ring variables")
            r = eq_alpha_residual(alpha)
            out.append(result(law, [] if r.is_zero() else [("jacobian - 1", r)], opts))
        elif law == "twisted_brackets":
            from .polypois import apply_endo
            table = {f"{i + 1},{j + 1}": str(apply_endo(alpha, pi.matrix[i][j]))
                     for i, j in combinations(range(ring.nvars), 2)}
            details["twisted_brackets"] = table
            out.append(result(law, [], opts, {"table": table}))
        else:
            cap = opts.degree if opts.degree is not None else cap_default
            A, basis, dropped = truncated_algebra(ring, cap, bracket_fn=lambda f, g: bracket(f, g, pi),
                                                  alpha=alpha)
            dom = degree_domain(basis, cap)
            for sub in expand_laws(["hom_poisson"]):
                r = check_law(A, sub, dom)
                out.append(residual_result(f"truncated_{sub}", r, opts,
                                           {"degree_cap": cap, "basis_size": len(basis)}))
            details["truncation"] = {"degree_cap": cap, "basis_size": len(basis),
                                     "out_of_cap_products": len(dropped)}
    return out, details


def build_deformation(spec: SpecFile, values):
    p = spec.payload
    base = instantiate(algebra_from_json(p["base"], spec.all_params, spec.gaussian), values)
    reader = _Reader({"dim": base.dim}, spec.all_params, spec.gaussian)
    cochains = [instantiate_table(reader.table(rows), values) for rows in p["cochains"]]
    D = Deformation(base, cochains)
    domain = None
    if "basis_degrees" in p:
        degs = p["basis_degrees"]
        cap = p.get("degree_cap", max(degs, default=0))
        domain = lambda idx: sum(degs[k] for k in idx) <= cap
    return D, domain


def instantiate_table(t, values):
    return t if not values else t.map_entries(lambda c: c.subs(values))


def check_deformation_spec(spec, laws, opts, values) -> tuple:
    D, domain = build_deformation(spec, values)
    laws = list(laws or ["deformation", "quasi_classical"])
    out, details = [], {}
    for law in laws:
        if law == "deformation":
            for r in check_deformation(D, domain):
                out.append(residual_result(r.law, r, opts))
        elif law == "quasi_classical":
            P = quasi_classical_limit(D, domain, verify=False)
            details["quasi_classical_bracket"] = [[i + 1, j + 1, k + 1, str(c)]
                                                  for (i, j, k), c in P.bracket.entries.items()]
            for sub in expand_laws(["hom_poisson"]):
                out.append(residual_result(f"quasi_classical_{sub}", check_law(P, sub, domain), opts))
        else:
            raise UnsupportedLaw(f"unknown deformation law {law!r}; choose deformation or quasi_classical")
    return out, details


# -------------------------------------------------------------- moyal

def moyal_config(spec: SpecFile, opts: Options) -> tuple:
    p = spec.payload
    ring = PolyRing(tuple(p["vars"]))
    if "sigma" in p and "tau" in p:
        raise SchemaError("give either sigma or tau, not both")
    reader = lambda rows: [[CoeffExpr.const(0) if v in (0, "0") else _const(v, spec) for v in row] for row in rows]
    if "sigma" in p:
        sigma = reader(p["sigma"])
    elif "tau" in p:
        sigma = sigma_from_tau(reader(p["tau"]), p.get("split", "half"))
    elif ring.nvars == 2:
        sigma = ((0, 1), (0, 0))
    else:
        raise SchemaError("sigma or tau is required beyond two variables")
    order = opts.order if opts.order is not None else p.get("order", 4)
    cap = opts.degree if opts.degree is not None else p.get("degree_cap", 5)
    cfg = MoyalConfig(ring, sigma, order, cap)
    alpha = endo_from_json(ring, p["alpha"], spec.all_params, spec.gaussian) if "alpha" in p else None
    return cfg, alpha


def _const(v, spec):
    from .coeff import parse_coeff
    return parse_coeff(str(v), spec.all_params, spec.gaussian)


def run_moyal(spec: SpecFile, harness, opts: Options, values) -> tuple:
    cfg, alpha = moyal_config(spec, opts)
    if alpha is not None and values:
        alpha = instantiate(alpha, values)
    harness = harness or spec.payload.get("harness", "assoc")
    ring = cfg.ring
    details = {"harness": harness, "order": cfg.order, "degree_cap": cfg.degree_cap,
               "sigma": [[str(v) for v in row] for row in cfg.sigma]}
    out = []
    if harness == "assoc":
        tdeg = spec.payload.get("triple_degree", 4)
        if opts.degree is not None:
            tdeg = min(tdeg, opts.degree)
        basis = ring.monomials(tdeg)
        entries = []
        for p in basis:
            for q in basis:
                for r in basis:
                    if sum(p) + sum(q) + sum(r) > tdeg:
                        continue
                    f, g, h = ring.monomial(p), ring.monomial(q), ring.monomial(r)
                    s = associator(f, g, h, cfg) if alpha is None else twisted_hom_associator(alpha, f, g, h, cfg)
                    for k, c in enumerate(s.coeffs):
                        if not c.is_zero():
                            entries.append(((list(p), list(q), list(r), k), c))
        law = "star_associativity" if alpha is None else "twisted_star_hom_associativity"
        out.append(result(law, [(_key(k), v) for k, v in entries], opts, {"triple_degree": tdeg}))
    elif harness == "intertwine":
        if alpha is None:
            raise SchemaError("the intertwine harness needs alpha")
        for m in range(cfg.order + 1):
            res = intertwine_residual(alpha, m, cfg)
            out.append(result(f"intertwine_mu{m}", [((list(p), list(q)), r) for p, q, r in res], opts))
    elif harness == "families":
        names = spec.payload.get("families")
        if names is None:
            deg = spec.payload.get("family_degree")
            names = [n for n, f in FAMILIES.items() if deg is None or f.degree == deg]
        unknown = [n for n in names if n not in FAMILIES]
        if unknown:
            raise SchemaError(f"unknown families {unknown}; choose from {sorted(FAMILIES)}")
        reports = []
        for n in names:
            rep = family_report(FAMILIES[n], cfg)
            fam_alpha = FAMILIES[n].endo(ring)
            reports.append(rep)
            eq = eq_alpha_residual(fam_alpha)
            out.append(result(f"{n}:eq_alpha", [] if eq.is_zero() else [("jacobian - 1", eq)], opts))
            if "degree1_constraint" in rep:
                from .polypois import degree1_constraint
                c = degree1_constraint(fam_alpha)
                out.append(result(f"{n}:degree1", [] if c.is_zero() else [("constraint", c)], opts))
            from .moyal import star_hom_associator
            P, Q, R = (ring.parse(s) for s in rep["triple"])
            ha = star_hom_associator(fam_alpha, P, Q, R, cfg)
            entries = [((f"t^{k}",), c) for k, c in enumerate(ha.coeffs) if not c.is_zero()]
            out.append(result(f"{n}:hom_assoc_{''.join(rep['triple'])}", entries, opts))
        details["families"] = reports
    else:
        raise SchemaError(f"unknown harness {harness!r}")
    return out, details


def _key(k):
    p, q, r, order = k
    return (str(p), str(q), str(r), f"t^{order}")


# -------------------------------------------------------------- commands

def _header(command, spec: SpecFile, opts, values, laws):
    return {"tool": "homalg", "version": __version__, "command": command, "input_digest": spec.digest(),
            "kind": spec.kind, "field": spec.field, "params": spec.all_params,
            "unknowns": sorted(opts.unknowns), "instantiate": {k: str(v) for k, v in sorted(values.items())},
            "laws": list(laws)}


def cmd_check(spec: SpecFile, laws=None, opts: Options | None = None, values=None) -> dict:
    opts = opts or Options(spec.unknowns)
    values = values or {}
    details = {}
    if spec.kind in ("hom_algebra", "hom_coalgebra", "hom_bialgebra"):
        X = instantiate(build_structure(spec), values)
        laws = list(laws or default_laws(X))
        results = check_fd(X, laws, opts)
    elif spec.kind == "poly_poisson":
        structure = instantiate(build_structure(spec), values)
        results, details = check_poly(structure, laws, opts, spec.payload.get("degree_cap", 2))
        laws = [r["law"] for r in results]
    elif spec.kind == "deformation":
        results, details = check_deformation_spec(spec, laws, opts, values)
        laws = [r["law"] for r in results]
    elif spec.kind == "moyal_config":
        results, details = run_moyal(spec, None, opts, values)
        laws = [r["law"] for r in results]
    else:
        raise UnsupportedLaw(f"nothing to check for kind {spec.kind!r}")
    body = _header("check", spec, opts, values, laws)
    body["results"] = results
    body["status"] = overall(results)
    if details:
        body["details"] = details
    return body


def cmd_moyal(spec: SpecFile, harness=None, opts=None, values=None) -> dict:
    if spec.kind != "moyal_config":
        raise SchemaError("moyal needs a moyal_config spec")
    opts = opts or Options(spec.unknowns)
    values = values or {}
    results, details = run_moyal(spec, harness, opts, values)
    body = _header("moyal", spec, opts, values, [r["law"] for r in results])
    body["results"] = results
    body["status"] = overall(results)
    body["details"] = details
    return body


def cmd_solve_poisson(spec: SpecFile, opts=None, values=None, method="bareiss") -> dict:
    if spec.kind != "hom_algebra":
        raise SchemaError("solve-poisson needs a hom_algebra spec with a bracket")
    opts = opts or Options(spec.unknowns)
    values = values or {}
    L = instantiate(build_structure(spec), values)
    if L.bracket is None:
        raise UnsupportedLaw("solve-poisson needs a bracket table")
    pre = check_fd(L, ["antisymmetry", "hom_jacobi"], opts)
    search = find_poisson_products(L, method=method)
    free = frozenset(search.space.free_params)
    con_opts = Options(opts.unknowns | free)
    cons = [(("R", k + 1), c) for k, c in enumerate(search.constraints)]
    results = pre + [result("hom_associativity_constraints", cons, con_opts)]
    body = _header("solve-poisson", spec, opts, values, [r["law"] for r in results])
    body["results"] = results
    body["status"] = overall(results)
    body["details"] = search.to_json()
    return body


def _twist_fd(X, beta: LinMap, weak: bool):
    """Returns (twisted structure or None, failing results)."""
    if beta.dim != X.dim:
        raise SchemaError(f"morphism dimension {beta.dim} differs from the structure ({X.dim})")
    opts = Options()
    if isinstance(X, HomAlgebra):
        if not weak:
            fails = [residual_result(n, check_law(X.with_(twist=beta, flags=()), n), opts)
                     for n, t in (("multiplicativity", X.mult), ("bracket_multiplicativity", X.bracket))
                     if t is not None]
            fails = [f for f in fails if f["status"] != "holds"]
            if fails:
                return None, fails
        return twist_algebra(X, beta, weak=True), []
    if isinstance(X, HomCoalgebra):
        fails = [residual_result(r.law, r, opts) for r in comorphism_residuals(X, beta) if not r.holds]
        if fails and not weak:
            return None, fails
        return _twist_co_weak(X, beta), []
    if isinstance(X, HomBialgebra):
        a, fa = _twist_fd(X.algebra, beta, weak)
        c, fc = _twist_fd(X.coalgebra, beta, weak)
        if fa or fc:
            return None, fa + fc
        return HomBialgebra(a, c), []
    raise TypeError(type(X).__name__)


def _twist_co_weak(C, beta):
    from .fdhom import pre_compose
    return HomCoalgebra(dim=C.dim, coproduct=None if C.coproduct is None else pre_compose(C.coproduct, beta),
                        twist=beta.then(C.twist), counit=C.counit,
                        cobracket=None if C.cobracket is None else pre_compose(C.cobracket, beta),
                        flags=tuple(f for f in C.flags if f != "multiplicative"))


def cmd_twist(spec: SpecFile, morph: SpecFile, weak=False, laws=None, opts=None, values=None) -> tuple:
    """Returns (twisted spec json or None, report body)."""
    if morph.kind != "morphism":
        raise SchemaError("the second argument must be a morphism spec")
    opts = opts or Options(spec.unknowns)
    values = values or {}
    beta = instantiate(build_structure(morph), values)
    params = sorted(set(spec.all_params) | set(morph.all_params))
    field = "Q(i)" if "Q(i)" in (spec.field, morph.field) else "Q"
    origin = {"source_digest": spec.digest(), "morphism_digest": morph.digest(), "weak": bool(weak)}
    if spec.kind in ("hom_algebra", "hom_coalgebra", "hom_bialgebra"):
        if not isinstance(beta, LinMap):
            raise SchemaError("structure twists need a linear morphism (dim/alpha)")
        X = instantiate(build_structure(spec), values)
        T, fails = _twist_fd(X, beta, weak)
        if T is None:
            body = _header("twist", spec, opts, values, [f["law"] for f in fails])
            body.update(results=fails, status="fails")
            return None, body
        if beta.is_identity() and not values:
            payload = dict(spec.payload)
        else:
            payload = structure_to_json(T)
            payload["params"] = sorted(set(payload.get("params", [])) | set(spec.payload.get("params", []))
                                       | set(morph.payload.get("params", [])))
        out = SpecFile(spec.kind, field, [p for p in params if p not in payload["params"]], payload,
                       list(spec.unknowns), spec.description)
        laws = list(laws or default_laws(T))
        T2 = build_structure(out)
        results = check_fd(T2, laws, opts)
    elif spec.kind == "poly_poisson":
        if not isinstance(beta, PolyEndo):
            raise SchemaError("polynomial twists need images (vars/images)")
        ring, pi, alpha = instantiate(build_structure(spec), values)
        if beta.ring != ring:
            raise SchemaError("morphism variables differ from the ring")
        if not weak:
            res = bracket_morphism_residual(beta, pi)
            if res:
                fails = [result("bracket_morphism", [((i + 1, j + 1), r) for (i, j), r in sorted(res.items())],
                                Options())]
                body = _header("twist", spec, opts, values, ["bracket_morphism"])
                body.update(results=fails, status="fails")
                return None, body
        new_alpha = beta if alpha is None else alpha.then(beta)
        payload = dict(spec.payload)
        if not beta.is_identity() or values:
            payload["bivector"] = bivector_to_json(pi)
            payload["alpha"] = endo_to_json(new_alpha)
        out = SpecFile("poly_poisson", field, params, payload, list(spec.unknowns), spec.description)
        laws = list(laws or ["jacobi", "bracket_morphism", "twisted_brackets"])
        results, _ = check_poly(build_structure(out), laws, opts, payload.get("degree_cap", 2))
        laws = [r["law"] for r in results]
    else:
        raise SchemaError(f"cannot twist a {spec.kind} spec")
    origin["results"] = results
    out.origin = origin
    body = _header("twist", spec, opts, values, laws)
    body["results"] = results
    body["status"] = overall(results)
    body["output_digest"] = out.digest()
    return out.to_json(), body


# ------------------------------------------------------------------ text

def render_text(body: dict) -> str:
    lines = [f"{body['command']} {body['kind']} [{body['field']}] -> {body['status']}"]
    if body.get("instantiate"):
        lines.append("  at " + ", ".join(f"{k}={v}" for k, v in body["instantiate"].items()))
    for r in body.get("results", []):
        line = f"  {r['law']}: {r['status']}"
        if r.get("witnesses"):
            w = r["witnesses"][0]
            idx = w["index"]
            idx = ",".join(str(i) for i in idx) if isinstance(idx, list) else idx
            value = w["value"] if len(w["value"]) <= TEXT_WIDTH else w["value"][:TEXT_WIDTH] + " ..."
            line += f"  ({r['nonzero']} nonzero; first at ({idx}) = {value})"
        lines.append(line)
        if r["status"] == "conditional":
            for c in r.get("constraints", []):
                lines.append(f"      {c[:TEXT_WIDTH]} = 0")
    det = body.get("details", {})
    if "solution_space" in det:
        sp = det["solution_space"]
        lines.append(f"  solution space: dimension {sp['dimension']}, free parameters {', '.join(sp['free_params'])}")
        for i, j, k, c in det["product"]:
            if j >= i:
                lines.append(f"      e{i}.e{j} += ({c}) e{k}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------- main

def _parser():
    p = argparse.ArgumentParser(prog="homalg", description="Exact checks for Hom-algebraic structures.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--field", choices=["Q", "Qi", "Q(i)"], help="override the coefficient field")
        sp.add_argument("--instantiate", action="append", default=[], metavar="NAME=VALUE",
                        help="substitute a rational value for a parameter (repeatable)")
        sp.add_argument("--unknowns", action="append", default=[], metavar="NAMES",
                        help="parameters treated as unknowns (comma separated, repeatable)")
        sp.add_argument("--order", type=int, help="truncation order N")
        sp.add_argument("--degree", type=int, help="degree cap D")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
        fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="plain-text summary")
        sp.add_argument("-o", "--output", help="write the report (twist: the twisted spec) to this file")
        sp.add_argument("--no-timing", action="store_true", help="omit the timing block")

    c = sub.add_parser("check", help="evaluate law residuals")
    c.add_argument("spec")
    c.add_argument("--law", action="append", default=[], help="law or bundle name (repeatable, comma lists ok)")
    c.add_argument("--weak", action="store_true", help=argparse.SUPPRESS)
    common(c)

    t = sub.add_parser("twist", help="twist a structure by a morphism")
    t.add_argument("spec")
    t.add_argument("morphism")
    t.add_argument("--weak", action="store_true", help="skip the morphism check")
    t.add_argument("--law", action="append", default=[])
    t.add_argument("--report", help="also write the report to this file")
    common(t)

    s = sub.add_parser("solve-poisson", help="find commutative products making a Hom-Poisson algebra")
    s.add_argument("spec")
    s.add_argument("--method", choices=["bareiss", "fraction"], default="bareiss")
    common(s)

    m = sub.add_parser("moyal", help="run a Moyal harness")
    m.add_argument("spec")
    m.add_argument("--harness", choices=["assoc", "intertwine", "families"])
    common(m)
    return p


def _split(items):
    out = []
    for item in items:
        out.extend(x.strip() for x in item.split(",") if x.strip())
    return out


def _emit(body, timing, args, stream):
    if (args.fmt or "json") == "text":
        return render_text(body)
    doc = {"report": body}
    if not args.no_timing:
        doc["timing"] = timing
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        spec = with_field(read_spec(args.spec), args.field)
        unknowns = set(spec.unknowns) | set(_split(args.unknowns))
        bad = unknowns - set(spec.all_params)
        if bad:
            raise SchemaError(f"unknowns {sorted(bad)} are not declared parameters")
        opts = Options(unknowns, args.order, args.degree, getattr(args, "weak", False))
        values = parse_instantiation(args.instantiate, spec)
        t_load = time.perf_counter()
        out_spec = None
        if args.command == "check":
            body = cmd_check(spec, _split(args.law) or None, opts, values)
        elif args.command == "solve-poisson":
            body = cmd_solve_poisson(spec, opts, values, args.method)
        elif args.command == "moyal":
            body = cmd_moyal(spec, args.harness, opts, values)
        else:
            morph = with_field(read_spec(args.morphism), args.field)
            values.update(parse_instantiation([i for i in args.instantiate if i.split("=")[0].strip()
                                               in morph.all_params and i.split("=")[0].strip()
                                               not in spec.all_params], morph))
            out_spec, body = cmd_twist(spec, morph, args.weak, _split(args.law) or None, opts, values)
    except (HomAlgError, OSError) as exc:
        sys.stderr.write(f"homalg: error: {exc}\n")
        return EXIT_INPUT
    t1 = time.perf_counter()
    timing = {"load_seconds": round(t_load - t0, 6), "compute_seconds": round(t1 - t_load, 6)}
    text = _emit(body, timing, args, sys.stdout)
    if args.command == "twist":
        if out_spec is not None:
            spec_text = json.dumps(out_spec, indent=2, sort_keys=True) + "\n"
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(spec_text)
            else:
                sys.stdout.write(spec_text)
        if args.report:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(text)
        sys.stdout.write(text) if args.output or out_spec is None else None
    elif args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT[body["status"]]


def canonical_body(body) -> str:
    return canonical_json(body)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
