"""Residual tensors of every identity, built as compositions of sparse maps."""

from __future__ import annotations

from typing import Callable

from ..coeff import ONE, ZERO, CoeffExpr
from ..errors import MissingTable, NotAntisymmetric, UnsupportedLaw
from . import ops
from .tables import HomAlgebra, HomBialgebra, HomCoalgebra, Residual, basis_tuples

Domain = Callable[[tuple], bool] | None


def residual_of(law: str, op: ops.Op, domain: Domain = None) -> Residual:
    """Evaluate ``op`` on every basis input tuple accepted by ``domain``."""
    entries = {}
    for idx in basis_tuples(op.dim, op.n_in):
        if domain is not None and not domain(idx):
            continue
        for out, c in op(idx).items():
            if c:
                entries[idx + out] = c
    return Residual(law, op.n_in, op.n_out, entries)


# ----------------------------------------------------------- ingredients

def _need(x, attr, law, label=None):
    t = getattr(x, attr, None)
    if t is None:
        raise MissingTable(law, label or attr)
    return t


def _alg(x, law) -> HomAlgebra:
    if isinstance(x, HomBialgebra):
        return x.algebra
    if not isinstance(x, HomAlgebra):
        raise UnsupportedLaw(f"law {law!r} applies to algebras")
    return x


def _coalg(x, law) -> HomCoalgebra:
    if isinstance(x, HomBialgebra):
        return x.coalgebra
    if not isinstance(x, HomCoalgebra):
        raise UnsupportedLaw(f"law {law!r} applies to coalgebras")
    return x


def _bialg(x, law) -> HomBialgebra:
    if not isinstance(x, HomBialgebra):
        raise UnsupportedLaw(f"law {law!r} applies to bialgebras")
    return x


def _twist(x, ident=False) -> ops.Op:
    return ops.identity(x.dim) if ident else ops.from_linmap(x.twist)


# ------------------------------------------------------ generic builders

def _assoc_op(mu, al):
    return mu @ (ops.tensor(mu, al) - ops.tensor(al, mu))


def _jacobi_op(br, al, dim):
    cyc = ops.identity(dim, 3) + ops.sigma(dim) + ops.sigma(dim) @ ops.sigma(dim)
    return br @ ops.tensor(al, br) @ cyc


def _leibniz_op(mu, br, al, dim):
    lhs = br @ ops.tensor(mu, al)
    rhs = mu @ (ops.tensor(al, br) + ops.tensor(br, al) @ ops.tau23(dim))
    return lhs - rhs


def _coassoc_op(de, al):
    return ops.tensor(de, al) @ de - ops.tensor(al, de) @ de


def _cojacobi_op(de, al, dim):
    cyc = ops.identity(dim, 3) + ops.sigma(dim) + ops.sigma(dim) @ ops.sigma(dim)
    return cyc @ ops.tensor(al, de) @ de


def _coleibniz_op(de, cb, al, dim):
    return (ops.tensor(de, al) @ cb - ops.tensor(al, cb) @ de
            - ops.tau23(dim) @ ops.tensor(cb, al) @ de)


# ------------------------------------------------------- algebra laws

def hom_associator(A, domain: Domain = None, *, identity_twist=False, law="hom_assoc") -> Residual:
    A = _alg(A, law)
    mu = ops.from_product(_need(A, "mult", law))
    return residual_of(law, _assoc_op(mu, _twist(A, identity_twist)), domain)


def hom_jacobian(A, domain: Domain = None, *, identity_twist=False, law="hom_jacobi") -> Residual:
    A = _alg(A, law)
    br_t = _need(A, "bracket", law)
    anti = antisymmetry(A)
    if not anti.holds:
        raise NotAntisymmetric(anti)
    br = ops.from_product(br_t)
    return residual_of(law, _jacobi_op(br, _twist(A, identity_twist), A.dim), domain)


def hom_leibniz(A, domain: Domain = None, *, identity_twist=False, law="hom_leibniz") -> Residual:
    A = _alg(A, law)
    mu = ops.from_product(_need(A, "mult", law))
    br = ops.from_product(_need(A, "bracket", law))
    return residual_of(law, _leibniz_op(mu, br, _twist(A, identity_twist), A.dim), domain)


def commutativity(A, domain: Domain = None) -> Residual:
    A = _alg(A, "commutativity")
    mu = ops.from_product(_need(A, "mult", "commutativity"))
    return residual_of("commutativity", mu - mu @ ops.tau12(A.dim), domain)


def antisymmetry(A, domain: Domain = None) -> Residual:
    A = _alg(A, "antisymmetry")
    br = ops.from_product(_need(A, "bracket", "antisymmetry"))
    return residual_of("antisymmetry", br + br @ ops.tau12(A.dim), domain)


def multiplicativity(A, domain: Domain = None, *, which="mult") -> Residual:
    law = "multiplicativity" if which == "mult" else "bracket_multiplicativity"
    A = _alg(A, law)
    mu = ops.from_product(_need(A, which, law))
    al = _twist(A)
    return residual_of(law, al @ mu - mu @ ops.tensor(al, al), domain)


def one_op(A, domain: Domain = None) -> Residual:
    """3 as(x,y,z) - (xz)a(y) - (yz)a(x) + (yx)a(z) + (zx)a(y)"""
    A = _alg(A, "one_op")
    n = A.dim
    mu = ops.from_product(_need(A, "mult", "one_op"))
    al = _twist(A)
    tail = mu @ ops.tensor(mu, al)
    perms = (ops.tau23(n) + ops.sigma(n) @ ops.sigma(n)
             - ops.permutation(n, (1, 0, 2)) - ops.sigma(n))
    return residual_of("one_op", _assoc_op(mu, al).scale(3) - tail @ perms, domain)


def flexible_leibniz(A, domain: Domain = None) -> Residual:
    """{a(x), y.z} - {x,y}.a(z) - a(y).{x,z}"""
    A = _alg(A, "flexible_leibniz")
    n = A.dim
    mu = ops.from_product(_need(A, "mult", "flexible_leibniz"))
    br = ops.from_product(_need(A, "bracket", "flexible_leibniz"))
    al = _twist(A)
    op = (br @ ops.tensor(al, mu) - mu @ ops.tensor(br, al)
          - mu @ ops.tensor(al, br) @ ops.permutation(n, (1, 0, 2)))
    return residual_of("flexible_leibniz", op, domain)


def unit_law(A, side: str, domain: Domain = None) -> Residual:
    law = f"unit_{side}"
    A = _alg(A, law)
    mu = ops.from_product(_need(A, "mult", law))
    eta = ops.from_vector(A.dim, _need(A, "unit", law))
    idn = ops.identity(A.dim)
    placed = ops.tensor(eta, idn) if side == "left" else ops.tensor(idn, eta)
    return residual_of(law, mu @ placed - _twist(A), domain)


# ------------------------------------------------------------ flexibility

def _xi(i):
    return f"_xi{i + 1}"


def _vec_mul(table, u, v):
    out = {}
    for i, a in u.items():
        for j, b in v.items():
            ab = a * b
            for k, c in table.product(i, j).items():
                out[k] = out.get(k, ZERO) + ab * c
    return {k: c for k, c in out.items() if c}


def _split_quadratic(vec, j, n):
    """Coefficient of xi_i xi_k (i <= k) in each output coordinate."""
    from ..coeff import MPoly
    entries = {}
    for s, c in vec.items():
        num = c.num  # polynomial in the xi variables, denominators free of xi
        pieces = {}
        for m, v in num.terms.items():
            xs = [(name, e) for name, e in m if name.startswith("_xi")]
            rest = tuple(p for p in m if not p[0].startswith("_xi"))
            key = tuple(sorted(int(name[3:]) - 1 for name, e in xs for _ in range(e)))
            pieces.setdefault(key, {})[rest] = v
        for key, terms in pieces.items():
            i, k = key
            entries[(i, j, k, s)] = CoeffExpr(MPoly(terms), c.den)
    return entries


def flexibility(A, domain: Domain = None) -> Residual:
    """Direct form: (x y) a(x) - a(x) (y x) with x generic."""
    A = _alg(A, "flexibility")
    mult = _need(A, "mult", "flexibility")
    n = A.dim
    x = {i: CoeffExpr.var(_xi(i)) for i in range(n)}
    ax = A.twist.apply(x)
    entries = {}
    for j in range(n):
        y = {j: ONE}
        lhs = _vec_mul(mult, _vec_mul(mult, x, y), ax)
        rhs = _vec_mul(mult, ax, _vec_mul(mult, y, x))
        diff = {s: lhs.get(s, ZERO) - rhs.get(s, ZERO) for s in set(lhs) | set(rhs)}
        entries.update(_split_quadratic({s: c for s, c in diff.items() if c}, j, n))
    if domain is not None:
        entries = {k: c for k, c in entries.items() if domain(k[:3])}
    return Residual("flexibility", 3, 1, entries)


def flexibility_criteria(A) -> dict:
    """The three equivalent flexibility tests, each as a residual."""
    A = _alg(A, "flexibility")
    asr = hom_associator(A)
    # as(x, y, x) with x generic, read off the associator tensor
    contracted = {}
    for (i, j, k, s), c in asr.entries.items():
        a, b = min(i, k), max(i, k)
        key = (a, j, b, s)
        contracted[key] = contracted.get(key, ZERO) + c
    skew = {}
    for (i, j, k, s), c in asr.entries.items():
        skew[(i, j, k, s)] = skew.get((i, j, k, s), ZERO) + c
        skew[(k, j, i, s)] = skew.get((k, j, i, s), ZERO) + c
    return {
        "direct": flexibility(A),
        "associator": Residual("flexibility_associator", 3, 1, contracted),
        "skew": Residual("flexibility_skew", 3, 1, skew),
    }


# ------------------------------------------------------- coalgebra laws

def hom_coassociator(C, domain: Domain = None, *, identity_twist=False, law="hom_coassoc") -> Residual:
    C = _coalg(C, law)
    de = ops.from_coproduct(_need(C, "coproduct", law))
    return residual_of(law, _coassoc_op(de, _twist(C, identity_twist)), domain)


def cocommutativity(C, domain: Domain = None) -> Residual:
    C = _coalg(C, "cocommutativity")
    de = ops.from_coproduct(_need(C, "coproduct", "cocommutativity"))
    return residual_of("cocommutativity", de - ops.tau12(C.dim) @ de, domain)


def coantisymmetry(C, domain: Domain = None) -> Residual:
    C = _coalg(C, "coantisymmetry")
    de = ops.from_coproduct(_need(C, "cobracket", "coantisymmetry"))
    return residual_of("coantisymmetry", de + ops.tau12(C.dim) @ de, domain)


def coproduct_antisymmetry(C, domain: Domain = None) -> Residual:
    C = _coalg(C, "coproduct_antisymmetry")
    de = ops.from_coproduct(_need(C, "coproduct", "coproduct_antisymmetry"))
    return residual_of("coproduct_antisymmetry", de + ops.tau12(C.dim) @ de, domain)


def hom_lie_coalg(C, domain: Domain = None) -> Residual:
    C = _coalg(C, "hom_lie_coalg")
    de = ops.from_coproduct(_need(C, "coproduct", "hom_lie_coalg"))
    return residual_of("hom_lie_coalg", _cojacobi_op(de, _twist(C), C.dim), domain)


def hom_cojacobi(C, domain: Domain = None, *, identity_twist=False, law="hom_cojacobi") -> Residual:
    C = _coalg(C, law)
    cb = ops.from_coproduct(_need(C, "cobracket", law))
    return residual_of(law, _cojacobi_op(cb, _twist(C, identity_twist), C.dim), domain)


def hom_coleibniz(C, domain: Domain = None, *, identity_twist=False, law="hom_coleibniz") -> Residual:
    C = _coalg(C, law)
    de = ops.from_coproduct(_need(C, "coproduct", law))
    cb = ops.from_coproduct(_need(C, "cobracket", law))
    return residual_of(law, _coleibniz_op(de, cb, _twist(C, identity_twist), C.dim), domain)


def comultiplicativity(C, domain: Domain = None, *, which="coproduct") -> Residual:
    law = "comultiplicativity" if which == "coproduct" else "cobracket_comultiplicativity"
    C = _coalg(C, law)
    de = ops.from_coproduct(_need(C, which, law))
    al = _twist(C)
    return residual_of(law, ops.tensor(al, al) @ de - de @ al, domain)


def counit_law(C, side: str, domain: Domain = None) -> Residual:
    law = f"counit_{side}"
    C = _coalg(C, law)
    de = ops.from_coproduct(_need(C, "coproduct", law))
    eps = ops.from_covector(C.dim, _need(C, "counit", law))
    idn = ops.identity(C.dim)
    placed = ops.tensor(eps, idn) if side == "left" else ops.tensor(idn, eps)
    return residual_of(law, placed @ de - _twist(C), domain)


# ------------------------------------------------------- bialgebra laws

def bialg_compat(B, domain: Domain = None) -> Residual:
    """Delta(x y) = Delta(x) . Delta(y)"""
    B = _bialg(B, "bialg_compat")
    n = B.dim
    mu = ops.from_product(_need(B.algebra, "mult", "bialg_compat"))
    de = ops.from_coproduct(_need(B.coalgebra, "coproduct", "bialg_compat"))
    op = de @ mu - ops.tensor(mu, mu) @ ops.tau23_4(n) @ ops.tensor(de, de)
    return residual_of("bialg_compat", op, domain)


def bialg_unit(B, domain: Domain = None) -> Residual:
    """Delta(e) = e (x) e"""
    B = _bialg(B, "bialg_unit")
    n = B.dim
    eta = ops.from_vector(n, _need(B.algebra, "unit", "bialg_unit"))
    de = ops.from_coproduct(_need(B.coalgebra, "coproduct", "bialg_unit"))
    return residual_of("bialg_unit", de @ eta - ops.tensor(eta, eta), domain)


def bialg_counit_unit(B, domain: Domain = None) -> Residual:
    """eps(e) = 1"""
    B = _bialg(B, "bialg_counit_unit")
    n = B.dim
    eta = ops.from_vector(n, _need(B.algebra, "unit", "bialg_counit_unit"))
    eps = ops.from_covector(n, _need(B.coalgebra, "counit", "bialg_counit_unit"))
    return residual_of("bialg_counit_unit", eps @ eta - ops.scalar(n), domain)


def bialg_counit_mult(B, domain: Domain = None) -> Residual:
    """eps(x y) = eps(x) eps(y)"""
    B = _bialg(B, "bialg_counit_mult")
    n = B.dim
    mu = ops.from_product(_need(B.algebra, "mult", "bialg_counit_mult"))
    eps = ops.from_covector(n, _need(B.coalgebra, "counit", "bialg_counit_mult"))
    return residual_of("bialg_counit_mult", eps @ mu - ops.tensor(eps, eps), domain)


def bialg_counit_twist(B, domain: Domain = None) -> Residual:
    """eps o alpha = eps"""
    B = _bialg(B, "bialg_counit_twist")
    n = B.dim
    eps = ops.from_covector(n, _need(B.coalgebra, "counit", "bialg_counit_twist"))
    return residual_of("bialg_counit_twist", eps @ ops.from_linmap(B.algebra.twist) - eps, domain)


def _ad_op(br, beta, n):
    """a (x) y1 (x) y2 -> [a,y1] (x) b(y2) + b(y1) (x) [a,y2]"""
    return ops.tensor(br, beta) + ops.tensor(beta, br) @ ops.permutation(n, (1, 0, 2))


def lie_bialg_compat(B, domain: Domain = None) -> Residual:
    """delta([x,y]) - ad_{a(x)} delta(y) + ad_{a(y)} delta(x)"""
    B = _bialg(B, "lie_bialg_compat")
    n = B.dim
    br = ops.from_product(_need(B.algebra, "bracket", "lie_bialg_compat"))
    co = B.coalgebra.cobracket if B.coalgebra.cobracket is not None else B.coalgebra.coproduct
    if co is None:
        raise MissingTable("lie_bialg_compat", "cobracket")
    cb = ops.from_coproduct(co)
    al = ops.from_linmap(B.algebra.twist)
    beta = ops.from_linmap(B.coalgebra.twist)
    term = _ad_op(br, beta, n) @ ops.tensor(al, cb)
    op = cb @ br - term + term @ ops.tau12(n)
    return residual_of("lie_bialg_compat", op, domain)


def poisson_bialg(B, domain: Domain = None) -> Residual:
    """Delta({a,b}) = {Delta(a), Delta(b)}"""
    B = _bialg(B, "poisson_bialg")
    n = B.dim
    mu = ops.from_product(_need(B.algebra, "mult", "poisson_bialg"))
    br = ops.from_product(_need(B.algebra, "bracket", "poisson_bialg"))
    de = ops.from_coproduct(_need(B.coalgebra, "coproduct", "poisson_bialg"))
    op = de @ br - (ops.tensor(br, mu) + ops.tensor(mu, br)) @ ops.tau23_4(n) @ ops.tensor(de, de)
    return residual_of("poisson_bialg", op, domain)


def copoisson_bialg(B, domain: Domain = None) -> Residual:
    """delta o mu = (mu (x) mu) o tau23 o (delta (x) Delta + Delta (x) delta)"""
    B = _bialg(B, "copoisson_bialg")
    n = B.dim
    mu = ops.from_product(_need(B.algebra, "mult", "copoisson_bialg"))
    de = ops.from_coproduct(_need(B.coalgebra, "coproduct", "copoisson_bialg"))
    cb = ops.from_coproduct(_need(B.coalgebra, "cobracket", "copoisson_bialg"))
    op = cb @ mu - ops.tensor(mu, mu) @ ops.tau23_4(n) @ (ops.tensor(cb, de) + ops.tensor(de, cb))
    return residual_of("copoisson_bialg", op, domain)


# --------------------------------------------------------------- registry

LAWS = {
    # algebra
    "commutativity": commutativity,
    "antisymmetry": antisymmetry,
    "hom_assoc": hom_associator,
    "associativity": lambda A, domain=None: hom_associator(A, domain, identity_twist=True, law="associativity"),
    "hom_jacobi": hom_jacobian,
    "jacobi": lambda A, domain=None: hom_jacobian(A, domain, identity_twist=True, law="jacobi"),
    "hom_leibniz": hom_leibniz,
    "leibniz": lambda A, domain=None: hom_leibniz(A, domain, identity_twist=True, law="leibniz"),
    "flexibility": flexibility,
    "flexible_leibniz": flexible_leibniz,
    "one_op": one_op,
    "multiplicativity": multiplicativity,
    "bracket_multiplicativity": lambda A, domain=None: multiplicativity(A, domain, which="bracket"),
    "unit_left": lambda A, domain=None: unit_law(A, "left", domain),
    "unit_right": lambda A, domain=None: unit_law(A, "right", domain),
    # coalgebra
    "cocommutativity": cocommutativity,
    "coantisymmetry": coantisymmetry,
    "coproduct_antisymmetry": coproduct_antisymmetry,
    "hom_coassoc": hom_coassociator,
    "coassociativity": lambda C, domain=None: hom_coassociator(C, domain, identity_twist=True, law="coassociativity"),
    "hom_lie_coalg": hom_lie_coalg,
    "hom_cojacobi": hom_cojacobi,
    "hom_coleibniz": hom_coleibniz,
    "comultiplicativity": comultiplicativity,
    "cobracket_comultiplicativity": lambda C, domain=None: comultiplicativity(C, domain, which="cobracket"),
    "counit_left": lambda C, domain=None: counit_law(C, "left", domain),
    "counit_right": lambda C, domain=None: counit_law(C, "right", domain),
    # bialgebra
    "bialg_compat": bialg_compat,
    "bialg_unit": bialg_unit,
    "bialg_counit_unit": bialg_counit_unit,
    "bialg_counit_mult": bialg_counit_mult,
    "bialg_counit_twist": bialg_counit_twist,
    "lie_bialg_compat": lie_bialg_compat,
    "poisson_bialg": poisson_bialg,
    "copoisson_bialg": copoisson_bialg,
}

ALGEBRA_LAWS = frozenset({
    "commutativity", "antisymmetry", "hom_assoc", "associativity", "hom_jacobi", "jacobi",
    "hom_leibniz", "leibniz", "flexibility", "flexible_leibniz", "one_op", "multiplicativity",
    "bracket_multiplicativity", "unit_left", "unit_right",
})
COALGEBRA_LAWS = frozenset({
    "cocommutativity", "coantisymmetry", "coproduct_antisymmetry", "hom_coassoc", "coassociativity",
    "hom_lie_coalg", "hom_cojacobi", "hom_coleibniz", "comultiplicativity",
    "cobracket_comultiplicativity", "counit_left", "counit_right",
})
BIALGEBRA_LAWS = frozenset(LAWS) - ALGEBRA_LAWS - COALGEBRA_LAWS

BUNDLES = {
    "hom_poisson": ("commutativity", "hom_assoc", "antisymmetry", "hom_jacobi", "hom_leibniz"),
    "hom_copoisson": ("cocommutativity", "hom_coassoc", "coantisymmetry", "hom_cojacobi", "hom_coleibniz"),
    "hom_lie": ("antisymmetry", "hom_jacobi"),
    "hom_lie_coalgebra": ("coproduct_antisymmetry", "hom_lie_coalg"),
    "unitality": ("unit_left", "unit_right"),
    "counitality": ("counit_left", "counit_right"),
    "hom_bialgebra": ("hom_assoc", "unit_left", "unit_right", "hom_coassoc", "counit_left",
                      "counit_right", "bialg_compat", "bialg_unit", "bialg_counit_unit",
                      "bialg_counit_mult", "bialg_counit_twist"),
    "hom_lie_bialgebra": ("antisymmetry", "hom_jacobi", "coantisymmetry", "hom_cojacobi",
                          "lie_bialg_compat"),
}

# law on X  <->  law on dualize(X)
DUAL_LAW = {
    "commutativity": "cocommutativity",
    "antisymmetry": "coantisymmetry",
    "hom_assoc": "hom_coassoc",
    "associativity": "coassociativity",
    "hom_jacobi": "hom_cojacobi",
    "hom_leibniz": "hom_coleibniz",
    "multiplicativity": "comultiplicativity",
    "bracket_multiplicativity": "cobracket_comultiplicativity",
    "unit_left": "counit_left",
    "unit_right": "counit_right",
    "poisson_bialg": "copoisson_bialg",
    "bialg_compat": "bialg_compat",
}
DUAL_LAW.update({v: k for k, v in list(DUAL_LAW.items())})
DUAL_BUNDLE = {"hom_poisson": "hom_copoisson", "hom_copoisson": "hom_poisson"}


def expand_laws(names) -> list:
    out = []
    for name in names:
        if name in BUNDLES:
            out.extend(BUNDLES[name])
        elif name in LAWS:
            out.append(name)
        else:
            raise UnsupportedLaw(f"unknown law {name!r}")
    seen = set()
    return [n for n in out if not (n in seen or seen.add(n))]


def check_law(X, law: str, domain: Domain = None) -> Residual:
    if law not in LAWS:
        raise UnsupportedLaw(f"unknown law {law!r}")
    return LAWS[law](X, domain)


def check_bundle(X, bundle: str, domain: Domain = None) -> dict:
    return {name: check_law(X, name, domain) for name in expand_laws([bundle])}


def bundle_holds(X, bundle: str, domain: Domain = None) -> bool:
    return all(r.holds for r in check_bundle(X, bundle, domain).values())
