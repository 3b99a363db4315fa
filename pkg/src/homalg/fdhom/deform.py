"""Formal deformations mu_t = sum mu_i t^i with a fixed twist."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import BaseNotCommutative, NotADeformation
from . import laws, ops
from .tables import HomAlgebra, HomCoalgebra, MultTable, Residual


@dataclass(frozen=True)
class Deformation:
    """Cochains mu_0..mu_N over a fixed base; mu_0 is the base operation.

    The base may be a coalgebra, in which case the cochains are coproducts.
    """

    base: HomAlgebra | HomCoalgebra
    cochains: tuple

    def __post_init__(self):
        object.__setattr__(self, "cochains", tuple(self.cochains))
        first = self.base.mult if isinstance(self.base, HomAlgebra) else self.base.coproduct
        if not self.cochains or self.cochains[0] != first:
            raise ValueError("the order-0 cochain must equal the base operation")
        if any(c.dim != self.base.dim for c in self.cochains):
            raise ValueError("cochain dimension differs from the base")

    @property
    def order(self) -> int:
        return len(self.cochains) - 1

    @classmethod
    def trivial(cls, base, order: int) -> "Deformation":
        first = base.mult if isinstance(base, HomAlgebra) else base.coproduct
        return cls(base, (first,) + tuple(MultTable.zero(base.dim) for _ in range(order)))


def _order_op(D: Deformation, s: int):
    n = D.base.dim
    al = ops.from_linmap(D.base.twist)
    total = ops.zero(n, 3, 1) if isinstance(D.base, HomAlgebra) else ops.zero(n, 1, 3)
    for i in range(s + 1):
        if isinstance(D.base, HomAlgebra):
            mi, mj = ops.from_product(D.cochains[i]), ops.from_product(D.cochains[s - i])
            # mu_i(a(x), mu_j(y,z)) - mu_i(mu_j(x,y), a(z))
            total = total + mi @ ops.tensor(al, mj) - mi @ ops.tensor(mj, al)
        else:
            di, dj = ops.from_coproduct(D.cochains[i]), ops.from_coproduct(D.cochains[s - i])
            total = total + ops.tensor(al, di) @ dj - ops.tensor(di, al) @ dj
    return total


def check_deformation(D: Deformation, domain=None, orders=None) -> list:
    """One residual per order s: sum_i mu_i o_alpha mu_{s-i}."""
    orders = range(D.order + 1) if orders is None else orders
    return [laws.residual_of(f"deformation_order_{s}", _order_op(D, s), domain) for s in orders]


def quasi_classical_limit(D: Deformation, domain=None, verify: bool = True):
    """Attach mu_1 - mu_1^op (or Delta_1 - Delta_1^op) as bracket/cobracket."""
    base = D.base
    if isinstance(base, HomAlgebra):
        if not laws.commutativity(base).holds:
            raise BaseNotCommutative("base product is not commutative")
    else:
        if not laws.cocommutativity(base).holds:
            raise BaseNotCommutative("base coproduct is not cocommutative")
    if D.order < 1:
        raise ValueError("quasi-classical limit needs the first-order cochain")
    if verify:
        for s, r in enumerate(check_deformation(D, domain, orders=range(min(2, D.order) + 1))):
            if not r.holds:
                raise NotADeformation(s, r)
    m1 = D.cochains[1]
    anti = m1 - m1.opposite()
    flags = tuple(set(base.flags) | {"antisymmetric"})
    if isinstance(base, HomAlgebra):
        return base.with_(bracket=anti, flags=flags)
    return base.with_(cobracket=anti, flags=flags)


__all__ = ["Deformation", "check_deformation", "quasi_classical_limit", "Residual"]
