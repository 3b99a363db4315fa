"""Exact linear algebra and the product search for Hom-Poisson structures.

Given a Hom-Lie algebra (A, [,], alpha), a commutative product M compatible
with the bracket through the Hom-Leibniz identity is a solution of a linear
system in the structure constants M_ij^l (i <= j).  The system is solved
exactly; the remaining Hom-associativity conditions are quadratic in the
free parameters of the solution and are returned as polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as _product

from .coeff import ONE, ZERO, CoeffExpr, coeff, irreducible_factors
from .fdhom import HomAlgebra, LinMap, MultTable
from .errors import MissingTable

PIVOT_RULE = "first nonzero entry in column order, rows scanned top to bottom"


# ---------------------------------------------------------------- systems

@dataclass
class LinSystem:
    """Homogeneous (or augmented) sparse linear system.

    ``rows[r]`` maps unknown index to coefficient; ``rhs[r]`` is the
    constant right-hand side (zero for the Leibniz system).
    """

    unknowns: list
    rows: list
    provenance: list
    rhs: list = field(default_factory=list)

    def __post_init__(self):
        if not self.rhs:
            self.rhs = [ZERO] * len(self.rows)

    @property
    def shape(self):
        return len(self.rows), len(self.unknowns)

    def nonzero_rows(self):
        return [r for r, row in enumerate(self.rows) if row or self.rhs[r]]

    def evaluate(self, values) -> list:
        """Row residuals sum_c row[c]*values[c] - rhs at a full assignment."""
        out = []
        for row, b in zip(self.rows, self.rhs):
            s = -b
            for c, a in row.items():
                s = s + a * values[c]
            out.append(s)
        return out

    def dense(self):
        n = len(self.unknowns)
        return [[row.get(c, ZERO) for c in range(n)] for row in self.rows]

    def permuted(self, order) -> "LinSystem":
        return LinSystem(list(self.unknowns), [self.rows[r] for r in order],
                         [self.provenance[r] for r in order], [self.rhs[r] for r in order])

    def subs(self, values) -> "LinSystem":
        rows = [{c: a.subs(values) for c, a in row.items()} for row in self.rows]
        rows = [{c: a for c, a in row.items() if a} for row in rows]
        return LinSystem(list(self.unknowns), rows, list(self.provenance),
                         [b.subs(values) for b in self.rhs])

    @classmethod
    def from_dense(cls, matrix, unknowns=None, rhs=None) -> "LinSystem":
        n = len(matrix[0]) if matrix else len(unknowns or ())
        rows = [{c: coeff(a) for c, a in enumerate(r) if coeff(a)} for r in matrix]
        return cls(list(unknowns or [f"u{c + 1}" for c in range(n)]), rows,
                   [(r + 1,) for r in range(len(rows))],
                   [coeff(b) for b in rhs] if rhs is not None else [])


def unknown_index(dim: int) -> dict:
    """(i, j, l) with i <= j  ->  position in the unknown list."""
    index = {}
    for i in range(dim):
        for j in range(i, dim):
            for l in range(dim):
                index[(i, j, l)] = len(index)
    return index


def unknown_name(i, j, l) -> str:
    return f"M{i + 1}{j + 1}_{l + 1}" if max(i, j, l) < 9 else f"M{i + 1},{j + 1}_{l + 1}"


def _mkey(p, q, l):
    return (p, q, l) if p <= q else (q, p, l)


def build_leibniz_system(L: HomAlgebra) -> LinSystem:
    """One row per (i,j,k,s):

    S_ijks = M_ij^p a_k^q C_pq^s - (a_i^p C_jk^q + C_ik^p a_j^q) M_pq^s
    """
    if L.bracket is None:
        raise MissingTable("hom_leibniz", "bracket")
    n = L.dim
    index = unknown_index(n)
    C, alpha = L.bracket, L.twist
    arow = [alpha.row(i) for i in range(n)]
    prod = {(p, q): C.product(p, q) for p in range(n) for q in range(n)}
    rows, prov = [], []
    for i, j, k in _product(range(n), repeat=3):
        acc = [dict() for _ in range(n)]  # acc[s][unknown] = coefficient

        def add(s, key, c):
            u = index[key]
            v = acc[s].get(u, ZERO) + c
            if v:
                acc[s][u] = v
            else:
                acc[s].pop(u, None)

        # {e_i e_j, alpha(e_k)}: M_ij^p a_k^q C_pq^s
        for q, a in arow[k].items():
            for p in range(n):
                for s, c in prod[(p, q)].items():
                    add(s, _mkey(i, j, p), a * c)
        # alpha(e_i) . {e_j, e_k}
        for p, a in arow[i].items():
            for q, c in prod[(j, k)].items():
                for s in range(n):
                    add(s, _mkey(p, q, s), -(a * c))
        # {e_i, e_k} . alpha(e_j)
        for p, c in prod[(i, k)].items():
            for q, a in arow[j].items():
                for s in range(n):
                    add(s, _mkey(p, q, s), -(c * a))
        for s in range(n):
            rows.append(acc[s])
            prov.append((i, j, k, s))
    unknowns = [unknown_name(*key) for key in sorted(index, key=index.get)]
    return LinSystem(unknowns, rows, prov)


# ------------------------------------------------------------ elimination

@dataclass
class AffineSolutionSpace:
    unknowns: list
    particular: list
    basis: list
    free_params: list
    rank: int
    pivots: list  # (row, column, pivot value) in elimination order
    feasible: bool = True
    method: str = "bareiss"

    @property
    def dimension(self) -> int:
        return len(self.basis) if self.feasible else -1

    def general(self) -> list:
        """particular + sum lam_r basis_r with symbolic lam_r."""
        lams = [CoeffExpr.var(p) for p in self.free_params]
        return self.point(lams)

    def point(self, values) -> list:
        """Evaluate at a list of values, or a mapping keyed by free parameter name."""
        if isinstance(values, dict):
            missing = [p for p in self.free_params if p not in values]
            if missing:
                raise ValueError(f"no value for {', '.join(missing)}")
            values = [values[p] for p in self.free_params]
        vals = [coeff(v) for v in values]
        if len(vals) != len(self.basis):
            raise ValueError(f"expected {len(self.basis)} parameter values, got {len(vals)}")
        out = list(self.particular)
        for lam, vec in zip(vals, self.basis):
            if lam:
                out = [o + lam * v for o, v in zip(out, vec)]
        return out

    def genericity_conditions(self) -> list:
        """Irreducible factors of the pivots, all assumed nonzero."""
        seen = set()
        for _, _, p in self.pivots:
            for part in (p.num, p.den):
                seen.update(irreducible_factors(part))
        return [CoeffExpr(f) for f in sorted(seen, key=str)]

    def to_json(self) -> dict:
        return {
            "unknowns": list(self.unknowns),
            "feasible": self.feasible,
            "rank": self.rank,
            "dimension": self.dimension,
            "free_params": list(self.free_params),
            "particular": [str(v) for v in self.particular],
            "basis": [[str(v) for v in vec] for vec in self.basis],
            "pivot_rule": PIVOT_RULE,
            "pivot_columns": [self.unknowns[c] for _, c, _ in self.pivots],
            "nonzero_assumptions": [str(p) for p in self.genericity_conditions()],
        }


def _clear_denominators(row):
    """Scale a sparse row so every entry is a polynomial."""
    scale = ONE
    for a in row.values():
        if not a.den.is_const():
            scale = scale * CoeffExpr(a.den)
    if scale == ONE:
        return row
    return {c: a * scale for c, a in row.items()}


def _echelon_bareiss(matrix, ncols):
    """Fraction-free forward elimination; every division is exact."""
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    pivots = []
    prev = ONE
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((k for k in range(r, nrows) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        top = rows[r]
        p = top[c]
        pivots.append((r, c, p))
        for k in range(r + 1, nrows):
            rk = rows[k]
            f = rk[c]
            for m in range(c + 1, ncols):
                v = p * rk[m]
                if f and top[m]:
                    v = v - f * top[m]
                rk[m] = v / prev if v and prev != ONE else v
            rk[c] = ZERO
        prev = p
        r += 1
    return rows, pivots


def _echelon_fraction(matrix, ncols):
    """Gauss-Jordan over the fraction field, pivots normalised to 1."""
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((k for k in range(r, nrows) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        pivots.append((r, c, p))
        inv = 1 / p
        rows[r] = [v * inv if v else v for v in rows[r]]
        for k in range(nrows):
            if k != r and rows[k][c]:
                f = rows[k][c]
                rows[k] = [a - f * b if b else a for a, b in zip(rows[k], rows[r])]
        r += 1
    return rows, pivots


def _back_substitute(rows, pivots, ncols):
    """Solve an echelon form for the pivot variables.

    Column ``ncols`` is the right-hand side.  Returns {pivot column: expr}
    with expr a dict over free columns plus the key ``ncols`` for the
    constant, so that x_c = expr[ncols] + sum expr[f] x_f.
    """
    reduced = {}
    for r, c, _ in reversed(pivots):
        row = rows[r]
        p = row[c]
        expr = {ncols: row[ncols]} if row[ncols] else {}
        for m in range(c + 1, ncols):
            v = row[m]
            if not v:
                continue
            sub = reduced.get(m, {m: ONE})
            for col, w in sub.items():
                expr[col] = expr.get(col, ZERO) - v * w
        reduced[c] = {col: w / p for col, w in expr.items() if w}
    return reduced


def nullspace(S: LinSystem, method: str = "bareiss", param_prefix: str = "lam",
              avoid=frozenset()) -> AffineSolutionSpace:
    """Exact parametrisation of the solution set of S.

    ``method`` is ``"bareiss"`` (fraction-free forward elimination, used for
    polynomial coefficients) or ``"fraction"`` (Gauss-Jordan over the
    fraction field).  Both use the same pivot rule.
    """
    ncols = len(S.unknowns)
    use = S.nonzero_rows()
    matrix = []
    for r in use:
        row = dict(S.rows[r])
        if S.rhs[r]:
            row[ncols] = S.rhs[r]
        if method == "bareiss":
            row = _clear_denominators(row)
        matrix.append([row.get(c, ZERO) for c in range(ncols + 1)])
    if method == "bareiss":
        rows, pivots = _echelon_bareiss(matrix, ncols + 1)
    elif method == "fraction":
        rows, pivots = _echelon_fraction(matrix, ncols + 1)
    else:
        raise ValueError(f"unknown elimination method {method!r}")

    names = _fresh_names(param_prefix, ncols, avoid | _all_vars(S))
    if any(c == ncols for _, c, _ in pivots):
        return AffineSolutionSpace(list(S.unknowns), [], [], [], len(pivots) - 1, pivots,
                                   feasible=False, method=method)
    reduced = _back_substitute(rows, pivots, ncols)
    pivot_cols = {c for _, c, _ in pivots}
    free = [c for c in range(ncols) if c not in pivot_cols]
    particular = [ZERO] * ncols
    for c, expr in reduced.items():
        if ncols in expr:
            particular[c] = expr[ncols]
    basis = []
    for f in free:
        vec = [ZERO] * ncols
        vec[f] = ONE
        for c, expr in reduced.items():
            if f in expr:
                vec[c] = expr[f]
        basis.append(vec)
    return AffineSolutionSpace(list(S.unknowns), particular, basis, names[:len(free)],
                               len(pivots), pivots, method=method)


def _all_vars(S: LinSystem) -> frozenset:
    out = frozenset()
    for row in S.rows:
        for a in row.values():
            out |= a.variables()
    for b in S.rhs:
        out |= b.variables()
    return out


def _fresh_names(prefix, count, avoid):
    while any(n.startswith(prefix) for n in avoid):
        prefix = prefix + "_"
    return [f"{prefix}{k + 1}" for k in range(count)]


# ------------------------------------------------------------ products

def table_from_solution(dim: int, values) -> MultTable:
    """Commutative table from an assignment of the M_ij^l (i <= j)."""
    index = unknown_index(dim)
    out = {}
    for (i, j, l), u in index.items():
        v = values[u]
        if v:
            out[(i, j, l)] = v
            out[(j, i, l)] = v
    return MultTable(dim, out)


def assoc_constraints(M: MultTable, alpha: LinMap) -> list:
    """Distinct monic nonzero

    R_ijks = (M_ij^p a_k^q - a_i^p M_jk^q) M_pq^s
    """
    n = M.dim
    arow = [alpha.row(i) for i in range(n)]
    prod = {(p, q): M.product(p, q) for p in range(n) for q in range(n)}
    seen = set()
    for i, j, k in _product(range(n), repeat=3):
        acc = {}
        for p, m in prod[(i, j)].items():
            for q, a in arow[k].items():
                for s, c in prod[(p, q)].items():
                    acc[s] = acc.get(s, ZERO) + m * a * c
        for p, a in arow[i].items():
            for q, m in prod[(j, k)].items():
                for s, c in prod[(p, q)].items():
                    acc[s] = acc.get(s, ZERO) - a * m * c
        for v in acc.values():
            if v:
                seen.add(v.monic())
    return sorted(seen, key=str)


@dataclass
class PoissonSearch:
    algebra: HomAlgebra
    system: LinSystem
    space: AffineSolutionSpace
    product: MultTable  # general solution in the free parameters
    constraints: list

    def assemble(self, values) -> HomAlgebra:
        """The Hom-Poisson candidate at a point of the solution space."""
        M = table_from_solution(self.algebra.dim, self.space.point(values))
        return self.algebra.with_(mult=M)

    def to_json(self) -> dict:
        live = [k for k, row in enumerate(self.system.rows) if row]
        return {
            "system": {"rows": len(self.system.rows), "nonzero_rows": len(live),
                       "unknowns": len(self.system.unknowns)},
            "solution_space": self.space.to_json(),
            "product": [[i + 1, j + 1, k + 1, str(c)]
                        for (i, j, k), c in sorted(self.product.entries.items())],
            "constraints": [str(c) for c in self.constraints],
        }


def find_poisson_products(L: HomAlgebra, method: str = "bareiss") -> PoissonSearch:
    S = build_leibniz_system(L)
    space = nullspace(S, method=method, avoid=L.variables())
    M = table_from_solution(L.dim, space.general())
    return PoissonSearch(L, S, space, M, assoc_constraints(M, L.twist))
