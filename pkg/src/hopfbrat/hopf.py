"""The function Hopf algebra C[G] of a finite abelian group G.

Elements are sparse vectors over the delta basis, keyed by group elements
(tuples).  Maps H -> X into a multi-matrix algebra X are dicts sending each
group element g to the sparse vector of the image of delta_g.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

from .exactnum import ONE, CycNum
from .linalg import add_into, solve, vec_equal
from .multimatrix import MultiMatrixAlgebra


@dataclass(frozen=True)
class FiniteAbelianGroup:
    factors: tuple

    def __post_init__(self):
        factors = tuple(int(c) for c in self.factors)
        if not factors or any(c < 1 for c in factors):
            raise ValueError(f"bad group factors {self.factors!r}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def parse(cls, text: str) -> FiniteAbelianGroup:
        parts = text.replace(" ", "").split("x")
        if not all(re.fullmatch(r"Z\d+", p) for p in parts):
            raise ValueError(f"bad group spec {text!r}, expected e.g. 'Z3xZ3'")
        return cls(tuple(int(p[1:]) for p in parts))

    def __str__(self) -> str:
        return "x".join(f"Z{c}" for c in self.factors)

    @cached_property
    def elements(self) -> tuple:
        return tuple(product(*(range(c) for c in self.factors)))

    @property
    def order(self) -> int:
        n = 1
        for c in self.factors:
            n *= c
        return n

    @property
    def identity(self) -> tuple:
        return (0,) * len(self.factors)

    def add(self, x: tuple, y: tuple) -> tuple:
        return tuple((a + b) % c for a, b, c in zip(x, y, self.factors))

    def neg(self, x: tuple) -> tuple:
        return tuple((-a) % c for a, c in zip(x, self.factors))

    def sub(self, x: tuple, y: tuple) -> tuple:
        return self.add(x, self.neg(y))

    def normalize(self, x) -> tuple:
        x = tuple(x)
        if len(x) != len(self.factors):
            raise ValueError(f"{x} is not an element of {self}")
        return tuple(a % c for a, c in zip(x, self.factors))


@dataclass(frozen=True)
class FnHopfAlgebra:
    group: FiniteAbelianGroup

    @property
    def basis(self) -> tuple:
        return self.group.elements

    @property
    def dim(self) -> int:
        return self.group.order

    def delta(self, g) -> dict:
        return {self.group.normalize(g): ONE}

    def one(self) -> dict:
        return {g: ONE for g in self.basis}

    def product(self, f: dict, h: dict) -> dict:
        return {g: f[g] * h[g] for g in f if g in h and f[g] * h[g]}

    def coproduct_pairs(self, g) -> list[tuple]:
        """Pairs (x, y) with x y = g."""
        G = self.group
        return [(x, G.sub(g, x)) for x in self.basis]

    def coproduct(self, f: dict) -> dict:
        out: dict = {}
        for g, c in f.items():
            for pair in self.coproduct_pairs(g):
                add_into(out, {pair: c})
        return out

    def triple_coproduct(self, g) -> list[tuple]:
        """Triples (x, y, z) with x y z = g, i.e. (Delta (x) id) Delta delta_g."""
        G = self.group
        return [(x, y, G.sub(G.sub(g, x), y)) for x in self.basis for y in self.basis]

    def antipode(self, f: dict) -> dict:
        return {self.group.neg(g): c for g, c in f.items()}

    def counit(self, f: dict):
        return f.get(self.group.identity, CycNum.rational(0))

    def integral(self, f: dict) -> CycNum:
        """Normalized integral: the average of f over G."""
        total = CycNum.rational(0)
        for c in f.values():
            total = total + c
        return total * Fraction(1, self.group.order)

    def pairing(self, h: dict, g: dict) -> CycNum:
        """b(h, g) = integral(h S(g))."""
        return self.integral(self.product(h, self.antipode(g)))

    def axiom_failures(self) -> list[str]:
        """Exhaustive check of the Hopf algebra laws on the delta basis."""
        G, out = self.group, []
        for g in self.basis:
            dg = self.delta(g)
            left, right = {}, {}
            for (x, y), c in self.coproduct(dg).items():
                for (a, b), d in self.coproduct({x: c}).items():
                    add_into(left, {(a, b, y): d})
                for (a, b), d in self.coproduct({y: c}).items():
                    add_into(right, {(x, a, b): d})
            if not vec_equal(left, right):
                out.append(f"coassociativity fails at {g}")
            cl, cr = {}, {}
            for (x, y), c in self.coproduct(dg).items():
                add_into(cl, {y: c * self.counit(self.delta(x))})
                add_into(cr, {x: c * self.counit(self.delta(y))})
            if not (vec_equal(cl, dg) and vec_equal(cr, dg)):
                out.append(f"counit law fails at {g}")
            eps1 = {h: self.counit(dg) for h in self.basis} if self.counit(dg) else {}
            sl, sr = {}, {}
            for (x, y), c in self.coproduct(dg).items():
                add_into(sl, {k: v * c for k, v in self.product(self.antipode(self.delta(x)), self.delta(y)).items()})
                add_into(sr, {k: v * c for k, v in self.product(self.delta(x), self.antipode(self.delta(y))).items()})
            if not (vec_equal(sl, eps1) and vec_equal(sr, eps1)):
                out.append(f"antipode law fails at {g}")
            inv = {}
            for (x, y), c in self.coproduct(dg).items():
                add_into(inv, {x: c * self.integral(self.delta(y))})
            if not vec_equal(inv, {h: self.integral(dg) for h in self.basis}):
                out.append(f"left-integral invariance fails at {g}")
            if not vec_equal(self.antipode(self.antipode(dg)), dg):
                out.append(f"S^2 != id at {g}")
            if G.neg(G.neg(g)) != g:
                out.append(f"inverse not involutive at {g}")
        if self.integral(self.one()) != 1:
            out.append("integral not normalized")
        return out


def convolve(H: FnHopfAlgebra, phi: dict, psi: dict, X: MultiMatrixAlgebra) -> dict:
    """(phi * psi)(delta_g) = sum over x y = g of phi(delta_x) psi(delta_y)."""
    out = {}
    for g in H.basis:
        acc: dict = {}
        for x, y in H.coproduct_pairs(g):
            a, b = phi.get(x), psi.get(y)
            if a and b:
                add_into(acc, X.mul(a, b))
        out[g] = acc
    return out


def unit_counit(H: FnHopfAlgebra, X: MultiMatrixAlgebra) -> dict:
    """The convolution identity h -> epsilon(h) 1."""
    return {g: (X.one() if g == H.group.identity else {}) for g in H.basis}


def maps_equal(H: FnHopfAlgebra, f: dict, g: dict) -> bool:
    return all(vec_equal(f.get(h, {}), g.get(h, {})) for h in H.basis)


@dataclass
class NotInvertible:
    reason: str

    def __bool__(self) -> bool:
        return False


def convolution_inverse(H: FnHopfAlgebra, phi: dict, X: MultiMatrixAlgebra):
    """Solve phi * psi = epsilon 1 exactly; returns psi or :class:`NotInvertible`."""
    columns = {}
    for y in H.basis:
        for u in X.basis():
            col: dict = {}
            for x in H.basis:
                a = phi.get(x)
                if a:
                    g = H.group.add(x, y)
                    for w, c in X.mul(a, {u: ONE}).items():
                        add_into(col, {(g, w): c})
            columns[(y, u)] = col
    target = {(H.group.identity, w): c for w, c in X.one().items()}
    sol = solve(columns, list(columns), target)
    if sol is None:
        return NotInvertible("convolution system phi * psi = 1 epsilon has no solution")
    psi = {y: {} for y in H.basis}
    for (y, u), c in sol.items():
        add_into(psi[y], {u: c})
    if not maps_equal(H, convolve(H, psi, phi, X), unit_counit(H, X)):
        return NotInvertible("right inverse is not a left inverse")
    return psi
