"""Truncated Moyal-Weyl star products and their twists.

The cochains are mu_m(f, g) = (1/m!) sum sigma_{i1 j1}...sigma_{im jm}
d_{i1..im} f d_{j1..jm} g.  Since the derivative only depends on the
multiset of index pairs, the sum runs over multisets weighted by
prod sigma_p^k_p / k_p!, which equals the sequence sum divided by m!.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from functools import lru_cache
from math import factorial

from .coeff import ONE, ZERO, TruncSeries, coeff, params
from .polypois import (Bivector, PolyEndo, PolyRing, RingPoly, apply_endo, bracket, degree1_constraint,
                       endo_applier, eq_alpha_residual)
from .errors import DegreeTooHigh


@dataclass(frozen=True)
class MoyalConfig:
    ring: PolyRing = field(default_factory=lambda: PolyRing(("x", "y")))
    sigma: tuple = ((0, 1), (0, 0))
    order: int = 4
    degree_cap: int = 5

    def __post_init__(self):
        n = self.ring.nvars
        sig = tuple(tuple(coeff(v) for v in row) for row in self.sigma)
        if len(sig) != n or any(len(r) != n for r in sig):
            raise ValueError("sigma must be an n x n matrix over the ring variables")
        if self.order < 0 or self.degree_cap < 0:
            raise ValueError("order and degree cap must be non-negative")
        object.__setattr__(self, "sigma", sig)

    @classmethod
    def standard(cls, order=4, degree_cap=5) -> "MoyalConfig":
        return cls(PolyRing(("x", "y")), ((0, 1), (0, 0)), order, degree_cap)

    @classmethod
    def from_tau(cls, ring, tau, order=4, degree_cap=5, split="half") -> "MoyalConfig":
        return cls(ring, sigma_from_tau(tau, split), order, degree_cap)

    @property
    def tau(self):
        n = self.ring.nvars
        return tuple(tuple(self.sigma[i][j] - self.sigma[j][i] for j in range(n)) for i in range(n))

    def poisson_bivector(self) -> Bivector:
        return Bivector.constant(self.ring, self.tau)

    def support(self):
        n = self.ring.nvars
        return [((i, j), self.sigma[i][j]) for i in range(n) for j in range(n) if self.sigma[i][j]]


def sigma_from_tau(tau, split: str = "half"):
    """A sigma with sigma - sigma^T = tau: tau/2, or the strict upper part."""
    n = len(tau)
    t = [[coeff(v) for v in row] for row in tau]
    for i in range(n):
        for j in range(n):
            if t[i][j] + t[j][i]:
                raise ValueError("tau must be antisymmetric")
    if split == "half":
        return tuple(tuple(t[i][j] / 2 for j in range(n)) for i in range(n))
    if split == "upper":
        return tuple(tuple(t[i][j] if j > i else ZERO for j in range(n)) for i in range(n))
    raise ValueError(f"unknown split {split!r}")


# --------------------------------------------------------------- cochains

def _d(f: RingPoly, counts) -> RingPoly:
    for k, c in enumerate(counts):
        if c:
            f = f.diff(k, c)
            if f.is_zero():
                break
    return f


@lru_cache(maxsize=64)
def _patterns(sigma, m: int):
    """[(left counts, right counts, weight)] for cochain m, equal
    derivative patterns merged."""
    n = len(sigma)
    supp = [((i, j), sigma[i][j]) for i in range(n) for j in range(n) if sigma[i][j]]
    acc = {}
    for combo in combinations_with_replacement(range(len(supp)), m):
        mult = {}
        for p in combo:
            mult[p] = mult.get(p, 0) + 1
        weight = ONE
        left, right = [0] * n, [0] * n
        for p, k in mult.items():
            (i, j), s = supp[p]
            weight = weight * s ** k / factorial(k)
            left[i] += k
            right[j] += k
        key = (tuple(left), tuple(right))
        acc[key] = acc.get(key, ZERO) + weight
    return [(l, r, w) for (l, r), w in sorted(acc.items()) if w]


def moyal_term(f: RingPoly, g: RingPoly, m: int, cfg: MoyalConfig) -> RingPoly:
    if m == 0:
        return f * g
    out = cfg.ring.zero()
    dfs, dgs = {}, {}
    for left, right, weight in _patterns(cfg.sigma, m):
        df = dfs.get(left)
        if df is None:
            df = dfs[left] = _d(f, left)
        if df.is_zero():
            continue
        dg = dgs.get(right)
        if dg is None:
            dg = dgs[right] = _d(g, right)
        if dg.is_zero():
            continue
        out = out + (df * dg).scale(weight)
    return out


def series(coeffs, cfg: MoyalConfig) -> TruncSeries:
    return TruncSeries(coeffs, cfg.order, zero=cfg.ring.zero())


def as_series(f, cfg):
    if isinstance(f, TruncSeries):
        return f
    return series([f], cfg)


def cochain_product(F, G, cfg: MoyalConfig, term=None) -> TruncSeries:
    """sum_{a+b+m <= N} term_m(F_a, G_b) t^(a+b+m), t-bilinear."""
    term = term or (lambda f, g, m: moyal_term(f, g, m, cfg))
    F, G = as_series(F, cfg), as_series(G, cfg)
    N = cfg.order
    out = [cfg.ring.zero() for _ in range(N + 1)]
    for a, fa in enumerate(F.coeffs):
        if fa.is_zero():
            continue
        for b in range(N + 1 - a):
            gb = G.coeffs[b]
            if gb.is_zero():
                continue
            for m in range(N + 1 - a - b):
                out[a + b + m] = out[a + b + m] + term(fa, gb, m)
    return series(out, cfg)


def star(f, g, cfg: MoyalConfig) -> TruncSeries:
    return cochain_product(f, g, cfg)


def twisted_star(alpha: PolyEndo, f, g, cfg: MoyalConfig) -> TruncSeries:
    """alpha o star, applied coefficientwise."""
    app = endo_applier(alpha)
    return star(f, g, cfg).map(app)


def argument_twisted_cochain(alpha: PolyEndo, cfg: MoyalConfig, app=None):
    """mu_{m,alpha}(f, g) = mu_m(alpha(f), alpha(g))."""
    app = app or endo_applier(alpha)
    return lambda f, g, m: moyal_term(app(f), app(g), m, cfg)


def series_map(fn, F, cfg):
    return as_series(F, cfg).map(fn)


def associator(f, g, h, cfg: MoyalConfig) -> TruncSeries:
    """(f*g)*h - f*(g*h) for the plain star product."""
    return star(star(f, g, cfg), h, cfg) - star(f, star(g, h, cfg), cfg)


def twisted_associator(alpha, f, g, h, cfg) -> TruncSeries:
    """Plain associator of alpha o star."""
    app = endo_applier(alpha)
    s = lambda u, v: star(u, v, cfg).map(app)
    return s(s(f, g), h) - s(f, s(g, h))


def twisted_hom_associator(alpha, f, g, h, cfg) -> TruncSeries:
    """Hom-associator of (alpha o star, alpha)."""
    app = endo_applier(alpha)
    s = lambda u, v: star(u, v, cfg).map(app)
    return s(s(f, g), series_map(app, h, cfg)) - s(series_map(app, f, cfg), s(g, h))


def star_hom_associator(alpha: PolyEndo, P, Q, R, cfg: MoyalConfig) -> TruncSeries:
    """Hom-associator of the cochains mu_{m,alpha} = mu_m o alpha^(x)2:

    sum_p sum_n mu_{p-n,alpha}(mu_{n,alpha}(P,Q), alpha(R))
                - mu_{p-n,alpha}(alpha(P), mu_{n,alpha}(Q,R))
    """
    app = endo_applier(alpha)
    term = argument_twisted_cochain(alpha, cfg, app)
    prod = lambda u, v: cochain_product(u, v, cfg, term)
    return prod(prod(P, Q), app(R)) - prod(app(P), prod(Q, R))


def intertwine_residual(alpha: PolyEndo, m: int, cfg: MoyalConfig, basis=None) -> list:
    """Nonzero alpha(mu_m(p,q)) - mu_m(alpha(p), alpha(q)) over basis pairs;
    entries are (p exponents, q exponents, residual)."""
    if m > cfg.order:
        raise ValueError(f"cochain {m} exceeds the truncation order {cfg.order}")
    ring = cfg.ring
    basis = ring.monomials(cfg.degree_cap) if basis is None else basis
    app = endo_applier(alpha)
    images = {e: app(ring.monomial(e)) for e in basis}
    out = []
    for p in basis:
        fp = ring.monomial(p)
        for q in basis:
            r = app(moyal_term(fp, ring.monomial(q), m, cfg)) - moyal_term(images[p], images[q], m, cfg)
            if not r.is_zero():
                out.append((p, q, r))
    return out


def series_json(S: TruncSeries) -> list:
    return [str(c) for c in S.coeffs]


# ---------------------------------------------------------------- families

@dataclass(frozen=True)
class Family:
    name: str
    degree: int
    gamma: tuple  # polynomial texts for alpha(x), alpha(y)
    params: tuple
    note: str = ""

    def endo(self, ring=None) -> PolyEndo:
        ring = ring or PolyRing(("x", "y"))
        return PolyEndo(ring, [ring.parse(g, self.params) for g in self.gamma])


DEGREE1_FAMILIES = (
    Family("deg1_i", 1, ("a10*x + a01*y", "-1/a10*x"), ("a10", "a01"),
           "first printed form of case (i)"),
    Family("deg1_i_alt", 1, ("a10*x + a01*y", "-1/a01*x"), ("a10", "a01"),
           "second printed form of case (i)"),
    Family("deg1_ii", 1, ("(1 + a01*b10)/b01*x + a01*y", "b10*x + b01*y"), ("a01", "b10", "b01")),
    Family("deg1_ii_b10_zero", 1, ("1/b01*x + a01*y", "b01*y"), ("a01", "b01")),
    Family("affine", 1, ("a*x + b", "1/a*y + c"), ("a", "b", "c")),
)

DEGREE2_FAMILIES = (
    Family("deg2_i", 2, ("(1 + a01*b10)/b01*x + a01*y", "b10*x + b01*y"), ("a01", "b10", "b01")),
    Family("deg2_ii", 2, ("1/b01*x", "b20*x^2 + b10*x + b01*y"), ("b01", "b10", "b20")),
    Family("deg2_iii", 2, ("a10*x + 2*a10*b02/b11*y", "1/a01*y + b11^2/(4*b02)*x^2 + b11*x*y + b02*y^2"),
           ("a10", "a01", "b11", "b02"), "as printed"),
    Family("deg2_iii_fixed", 2, ("a10*x + 2*a10*b02/b11*y", "1/a10*y + b11^2/(4*b02)*x^2 + b11*x*y + b02*y^2"),
           ("a10", "b11", "b02"), "linear y coefficient 1/a10"),
    Family("deg2_iv", 2, ("a10*x + 2*a10*b02/b11*y",
                          "b10*x + (2*a10*b02*b10 + b11)/(a10*b11)*y + b11^2/(4*b02)*x^2 + b11*x*y + b02*y^2"),
           ("a10", "b02", "b10", "b11")),
)

FAMILIES = {f.name: f for f in DEGREE1_FAMILIES + DEGREE2_FAMILIES}

WITNESS_TRIPLE = ("x", "y", "y")


def family_report(fam: Family, cfg: MoyalConfig | None = None, triple=WITNESS_TRIPLE) -> dict:
    cfg = cfg or MoyalConfig.standard()
    ring = cfg.ring
    alpha = fam.endo(ring)
    P, Q, R = (ring.parse(s) for s in triple)
    eq = eq_alpha_residual(alpha)
    out = {"family": fam.name, "degree": fam.degree, "alpha": [str(g) for g in alpha.images],
           "eq_alpha_residual": str(eq), "eq_alpha_holds": eq.is_zero()}
    if fam.note:
        out["note"] = fam.note
    try:
        out["degree1_constraint"] = str(degree1_constraint(alpha))
    except DegreeTooHigh:
        pass
    ha = star_hom_associator(alpha, P, Q, R, cfg)
    out["triple"] = list(triple)
    out["hom_associator"] = series_json(ha)
    nz = [k for k, c in enumerate(ha.coeffs) if not c.is_zero()]
    out["first_nonzero_order"] = nz[0] if nz else None
    out["hom_associative_on_triple"] = not nz
    return out


def families_harness(cfg: MoyalConfig | None = None, names=None) -> list:
    names = names or list(FAMILIES)
    return [family_report(FAMILIES[n], cfg) for n in names]


def conjecture_probe(samples: int = 20, seed: int = 0, cfg: MoyalConfig | None = None) -> list:
    """Sample rational non-affine solutions of the eq_alpha condition and
    record whether the argument-twisted cochains are Hom-associative on the
    witness triple.  A pass for a non-affine sample would falsify the
    conjectured characterisation."""
    cfg = cfg or MoyalConfig(order=2, degree_cap=3)
    rng = random.Random(seed)
    ring = cfg.ring
    out = []
    pool = [FAMILIES["deg1_ii"], FAMILIES["deg2_ii"], FAMILIES["deg2_iii_fixed"], FAMILIES["deg2_iv"]]
    for _ in range(samples):
        fam = rng.choice(pool)
        values = {p: Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3])) for p in fam.params}
        alpha = fam.endo(ring)
        alpha = PolyEndo(ring, [g.subs_params(values) for g in alpha.images])
        affine = (alpha.images[0].coefficient((0, 1)).is_zero() and alpha.images[1].coefficient((1, 0)).is_zero()
                  and all(g.degree() <= 1 for g in alpha.images))
        P, Q, R = (ring.parse(s) for s in WITNESS_TRIPLE)
        ha = star_hom_associator(alpha, P, Q, R, cfg)
        passes = ha.is_zero()
        out.append({"family": fam.name, "values": {k: str(v) for k, v in sorted(values.items())},
                    "affine": affine, "passes": passes, "counterexample": passes and not affine})
    return out


__all__ = [
    "MoyalConfig", "sigma_from_tau", "moyal_term", "star", "twisted_star", "cochain_product",
    "associator", "twisted_associator", "twisted_hom_associator", "star_hom_associator",
    "intertwine_residual", "Family", "FAMILIES", "DEGREE1_FAMILIES", "DEGREE2_FAMILIES",
    "family_report", "families_harness", "conjecture_probe", "params", "bracket", "apply_endo",
]
