"""Coactions of C[G], relative tensor products and the Hopf-Galois verdict.

Tensors in P (x) P are sparse dicts keyed by pairs of matrix units
``(u, v)``; tensors in P (x) H are keyed by ``(u, g)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .exactnum import ONE, serialize
from .hopf import FnHopfAlgebra
from .linalg import Echelon, add_into, kernel, vec_equal
from .multimatrix import MultiMatrixAlgebra


class CoactionError(ValueError):
    """An action table that does not define a comodule algebra."""


class StructuralError(RuntimeError):
    """An internal consistency check failed (should not happen)."""


def tensor(x: dict, y: dict) -> dict:
    return {(u, v): a * b for u, a in x.items() for v, b in y.items()}


@dataclass
class Coaction:
    P: MultiMatrixAlgebra
    H: FnHopfAlgebra
    action: dict  # g -> {unit: vector}

    def act(self, g, x: dict) -> dict:
        table = self.action[g]
        out: dict = {}
        for u, c in x.items():
            add_into(out, table[u], c)
        return out

    def delta_r(self, x: dict) -> dict:
        """Delta_R(p) = sum_g (g |> p) (x) delta_g."""
        out = {}
        for g in self.H.basis:
            for u, c in self.act(g, x).items():
                out[(u, g)] = c
        return out

    def validate(self) -> None:
        P, G = self.P, self.H.group
        basis = P.basis()
        for g in self.H.basis:
            if g not in self.action:
                raise CoactionError(f"missing action of {g}")
            if not vec_equal(self.act(g, P.one()), P.one()):
                raise CoactionError(f"action of {g} is not unital")
            for u, v in product(basis, basis):
                lhs = self.act(g, P.mul({u: ONE}, {v: ONE}))
                rhs = P.mul(self.action[g][u], self.action[g][v])
                if not vec_equal(lhs, rhs):
                    raise CoactionError(f"action of {g} is not multiplicative on {u}*{v}")
        for u in basis:
            if not vec_equal(self.action[G.identity][u], {u: ONE}):
                raise CoactionError(f"identity acts nontrivially on {u}")
        for g, h in product(self.H.basis, self.H.basis):
            gh = G.add(g, h)
            for u in basis:
                if not vec_equal(self.act(g, self.action[h][u]), self.action[gh][u]):
                    raise CoactionError(f"not a homomorphism: {g}.({h}.{u}) != {gh}.{u}")


def coaction_from_action(P: MultiMatrixAlgebra, H: FnHopfAlgebra, action) -> Coaction:
    """Build and validate a coaction from a table or callable ``action(g, unit)``."""
    if callable(action):
        table = {g: {u: action(g, u) for u in P.basis()} for g in H.basis}
    else:
        table = action
    c = Coaction(P, H, table)
    c.validate()
    return c


def coinvariants(c: Coaction) -> list[dict]:
    """Basis of A = {p : Delta_R(p) = p (x) 1}, checked to be a unital subalgebra."""
    columns = {}
    for u in c.P.basis():
        col: dict = {}
        for g in c.H.basis:
            diff = add_into(dict(c.action[g][u]), {u: ONE}, -ONE)
            for w, x in diff.items():
                col[(g, w)] = x
        columns[u] = col
    basis = kernel(columns, c.P.basis())
    e = Echelon()
    for a in basis:
        e.insert(a)
    if not e.contains(c.P.one()):
        raise StructuralError("coinvariants do not contain 1")
    for a, b in product(basis, basis):
        if not e.contains(c.P.mul(a, b)):
            raise StructuralError("coinvariants not closed under product")
    return basis


def span_equal(xs: list[dict], ys: list[dict]) -> bool:
    e = Echelon()
    for x in xs:
        e.insert(x)
    f = Echelon()
    for y in ys:
        f.insert(y)
    return e.rank == f.rank and all(e.contains(y) for y in ys)


@dataclass
class RelativeTensor:
    """P (x)_A P as the quotient of P (x) P by span{pa (x) q - p (x) aq}."""

    P: MultiMatrixAlgebra
    A_basis: list
    relations: Echelon
    basis: list  # quotient basis: non-pivot pairs (u, v)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project(self, t: dict) -> dict:
        """Quotient coordinates of a P (x) P tensor (keyed by quotient basis pairs)."""
        return self.relations.residue(t)


def relative_tensor(P: MultiMatrixAlgebra, A_basis: list[dict]) -> RelativeTensor:
    rel = Echelon()
    units = P.basis()
    for a in A_basis:
        right = {u: P.mul({u: ONE}, a) for u in units}  # u a
        left = {v: P.mul(a, {v: ONE}) for v in units}  # a v
        for u, v in product(units, units):
            r = tensor(right[u], {v: ONE})
            add_into(r, tensor({u: ONE}, left[v]), -ONE)
            if r:
                rel.insert(r)
    pivots = set(rel.rows)
    basis = [(u, v) for u in units for v in units if (u, v) not in pivots]
    return RelativeTensor(P, list(A_basis), rel, basis)


def ver_sharp(c: Coaction, t: dict) -> dict:
    """p (x) q -> p q_[0] (x) q_[1] on P (x) P."""
    out: dict = {}
    mul = c.P.mul
    for g in c.H.basis:
        table = c.action[g]
        for (u, v), x in t.items():
            for w, y in mul({u: ONE}, table[v]).items():
                add_into(out, {(w, g): x * y})
    return out


@dataclass
class CanonicalMap:
    coaction: Coaction
    rt: RelativeTensor
    columns: dict  # quotient basis pair -> P (x) H vector

    def __call__(self, coords: dict) -> dict:
        out: dict = {}
        for k, x in coords.items():
            add_into(out, self.columns[k], x)
        return out


def canonical_map(c: Coaction, rt: RelativeTensor) -> CanonicalMap:
    for p, row in rt.relations.rows.items():
        img = ver_sharp(c, row)
        if img:
            raise StructuralError(f"canonical map does not vanish on relation with pivot {p}")
    columns = {k: ver_sharp(c, {k: ONE}) for k in rt.basis}
    return CanonicalMap(c, rt, columns)


@dataclass
class Verdict:
    dims: tuple  # (dim P (x)_A P, dim P (x) H or None)
    rank: int | None
    is_hopf_galois: bool
    obstruction: str | None = None
    preimages: dict = field(default_factory=dict)  # g -> P (x) P tensor mapping to 1 (x) delta_g
    case: str | None = None

    def to_json(self) -> dict:
        out = {
            "case": self.case,
            "dims": list(self.dims),
            "rank": self.rank,
            "is_hopf_galois": self.is_hopf_galois,
        }
        if self.obstruction:
            out["obstruction"] = self.obstruction
        if self.preimages:
            out["preimage_table"] = {
                ",".join(map(str, g)): [[list(u), list(v), serialize(x)] for (u, v), x in sorted(t.items())]
                for g, t in self.preimages.items()
            }
        return out


@dataclass
class SubalgebraInclusion:
    """A inside P with no coaction given; only dimension obstructions apply."""

    P: MultiMatrixAlgebra
    A_basis: list
    H: FnHopfAlgebra | None = None


def galois_verdict(c, case: str | None = None) -> Verdict:
    """Decide whether the canonical map P (x)_A P -> P (x) H is bijective."""
    if isinstance(c, SubalgebraInclusion):
        return _inclusion_verdict(c, case)
    A = coinvariants(c)
    rt = relative_tensor(c.P, A)
    can = canonical_map(c, rt)
    dq, dph = rt.dim, c.P.dim * c.H.dim
    e = Echelon(track=True)
    for k in rt.basis:
        e.insert(can.columns[k], label=k)
    r = e.rank
    ok = dq == dph and r == dq
    obstruction = None
    if dq != dph:
        obstruction = f"dim P(x)_A P = {dq} != {dph} = dim P(x)H"
    elif r < dq:
        obstruction = f"canonical map has rank {r} < {dq}"
    preimages = {}
    if ok:
        for g in c.H.basis:
            target = {(w, g): x for w, x in c.P.one().items()}
            combo = e.express(target)
            preimages[g] = {k: x for k, x in combo.items() if x}
    return Verdict((dq, dph), r, ok, obstruction, preimages, case)


def _inclusion_verdict(inc: SubalgebraInclusion, case) -> Verdict:
    rt = relative_tensor(inc.P, inc.A_basis)
    dq, dp = rt.dim, inc.P.dim
    dph = dp * inc.H.dim if inc.H is not None else None
    if dq % dp:
        return Verdict((dq, dph), None, False, f"{dq} not divisible by {dp}", case=case)
    if dph is not None and dq != dph:
        return Verdict((dq, dph), None, False, f"dim P(x)_A P = {dq} != {dph} = dim P(x)H", case=case)
    return Verdict((dq, dph), None, False, "no coaction supplied; dimension test inconclusive", case=case)


# Explicit descriptions of P (x)_A P for the three elementary cases.  These
# are independent oracles for relative_tensor, not used by it.


def case1_T(lengths, u, v) -> dict:
    """T(E_ij (x) E_ab) = delta_ja E_ib (x) delta_(j)."""
    from .multimatrix import BlockPartition

    part = BlockPartition(tuple(lengths))
    (_, i, j), (_, a, b) = u, v
    if j != a:
        return {}
    return {((0, i, b), (part.block_of(j),)): ONE}


def case2_R(k: int, n: int, u, v) -> dict:
    """R(E_ij (x) E_ab) = E_ib (x) delta_r (x) delta_(a) when j = a + k r mod m."""
    m = k * n
    (_, i, j), (_, a, b) = u, v
    d = (j - a) % m
    if d % k:
        return {}
    return {((0, i, b), (d // k, a // k)): ONE}


def case3_u(block_dims, n: int, u, v) -> dict:
    """u(c_,r (x) b_,t) = (cb)_,r (x) delta_t."""
    s = len(block_dims)
    (p, i, j), (q, a, b) = u, v
    if p % s != q % s or j != a:
        return {}
    return {((p, i, b), (q // s,)): ONE}
