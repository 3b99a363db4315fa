"""Sparse multilinear maps A^{(x)m} -> A^{(x)l} and their algebra.

A map is known by its values on basis tensors, which are index tuples; a
value is a sparse dict from output tuples to coefficients.  Composition,
tensor products, sums and permutations build every law from the same few
pieces, mirroring how the identities are written as map equations.
"""

from __future__ import annotations

from itertools import product as _product

from ..coeff import ONE, coeff


def _acc(out, key, c):
    s = out.get(key)
    s = c if s is None else s + c
    if s:
        out[key] = s
    else:
        out.pop(key, None)


class Op:
    __slots__ = ("dim", "n_in", "n_out", "_fn", "_cache")

    def __init__(self, dim, n_in, n_out, fn):
        self.dim, self.n_in, self.n_out = dim, n_in, n_out
        self._fn = fn
        self._cache = {}

    def __call__(self, idx: tuple) -> dict:
        v = self._cache.get(idx)
        if v is None:
            v = self._fn(idx)
            self._cache[idx] = v
        return v

    def apply(self, vec: dict) -> dict:
        out = {}
        for idx, c in vec.items():
            for key, d in self(idx).items():
                _acc(out, key, c * d)
        return out

    # -- algebra
    def __matmul__(self, other: "Op") -> "Op":
        """self o other"""
        if other.n_out != self.n_in:
            raise ValueError(f"cannot compose {self.n_in}-ary after {other.n_out}-ary output")
        return Op(self.dim, other.n_in, self.n_out, lambda idx: self.apply(other(idx)))

    def __add__(self, other: "Op") -> "Op":
        _same_type(self, other)

        def fn(idx):
            out = dict(self(idx))
            for key, c in other(idx).items():
                _acc(out, key, c)
            return out
        return Op(self.dim, self.n_in, self.n_out, fn)

    def __neg__(self) -> "Op":
        return self.scale(-1)

    def __sub__(self, other: "Op") -> "Op":
        return self + (-other)

    def scale(self, s) -> "Op":
        s = coeff(s)
        return Op(self.dim, self.n_in, self.n_out,
                  lambda idx: {k: c * s for k, c in self(idx).items()} if s else {})

    def __rmul__(self, s) -> "Op":
        return self.scale(s)


def _same_type(f, g):
    if (f.n_in, f.n_out) != (g.n_in, g.n_out):
        raise ValueError("maps of different arity cannot be added")


def tensor(*ops: Op) -> Op:
    """f (x) g (x) ...: inputs are split by arity, outputs concatenated."""
    dim = ops[0].dim
    n_in = sum(f.n_in for f in ops)
    n_out = sum(f.n_out for f in ops)

    def fn(idx):
        parts, pos = [], 0
        for f in ops:
            img = f(idx[pos:pos + f.n_in])
            if not img:
                return {}
            parts.append(img)
            pos += f.n_in
        out = {}
        for combo in _product(*(p.items() for p in parts)):
            key = ()
            c = ONE
            for k, d in combo:
                key += k
                c = c * d
            _acc(out, key, c)
        return out
    return Op(dim, n_in, n_out, fn)


def identity(dim: int, arity: int = 1) -> Op:
    return Op(dim, arity, arity, lambda idx: {idx: ONE})


def permutation(dim: int, perm: tuple) -> Op:
    """Sends x_1 (x) ... (x) x_m to x_{perm[0]+1} (x) ... (x) x_{perm[m-1]+1}."""
    m = len(perm)
    return Op(dim, m, m, lambda idx: {tuple(idx[p] for p in perm): ONE})


def sigma(dim):
    """x (x) y (x) z -> z (x) x (x) y"""
    return permutation(dim, (2, 0, 1))


def tau12(dim):
    return permutation(dim, (1, 0))


def tau23(dim):
    return permutation(dim, (0, 2, 1))


def tau23_4(dim):
    """x1 (x) x2 (x) x3 (x) x4 -> x1 (x) x3 (x) x2 (x) x4"""
    return permutation(dim, (0, 2, 1, 3))


def from_product(table) -> Op:
    return Op(table.dim, 2, 1, lambda idx: {(k,): c for k, c in table.product(*idx).items()})


def from_coproduct(table) -> Op:
    return Op(table.dim, 1, 2, lambda idx: dict(table.coproduct(idx[0])))


def from_linmap(lin) -> Op:
    return Op(lin.dim, 1, 1, lambda idx: {(s,): c for s, c in lin.row(idx[0]).items()})


def from_vector(dim, vec) -> Op:
    """K -> A, 1 |-> vec"""
    img = {(k,): c for k, c in enumerate(vec) if c}
    return Op(dim, 0, 1, lambda idx: img)


def from_covector(dim, vec) -> Op:
    """A -> K"""
    return Op(dim, 1, 0, lambda idx: {(): vec[idx[0]]} if vec[idx[0]] else {})


def scalar(dim, value=ONE) -> Op:
    value = coeff(value)
    return Op(dim, 0, 0, lambda idx: {(): value} if value else {})


def zero(dim, n_in, n_out) -> Op:
    return Op(dim, n_in, n_out, lambda idx: {})
