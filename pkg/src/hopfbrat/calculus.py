"""First-order differential calculi on C[G] and the induced calculi on M_n.

Group elements are additive tuples, so right translation by a sends
delta_g to delta_{g - a}.  One-forms on C[G] are dicts keyed by ``(g, a)``
(the coefficient of delta_g e_a); one-forms on P are dicts keyed by
``(unit, a)`` (the P-valued coefficient of the generator e_a).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .bundles import Bundle, build_case2
from .exactnum import ONE, serialize
from .galois import StructuralError
from .hopf import FnHopfAlgebra
from .linalg import Echelon, add_into, kernel, scale, solve, vec_equal
from .multimatrix import commutator


class CalculusError(ValueError):
    pass


@dataclass
class GroupCalculus:
    H: FnHopfAlgebra
    C: tuple  # generators, sorted

    def right_translate(self, f: dict, a) -> dict:
        """R_a(f) = f(( ) a)."""
        G = self.H.group
        return {G.sub(g, a): c for g, c in f.items()}

    def generator(self, a) -> dict:
        """e_a as the left-module element 1 . e_a."""
        return {(g, a): ONE for g in self.H.basis}

    def d(self, f: dict) -> dict:
        out: dict = {}
        for a in self.C:
            for g, c in self.right_translate(f, a).items():
                add_into(out, {(g, a): c})
            for g, c in f.items():
                add_into(out, {(g, a): -c})
        return out

    def left(self, f: dict, form: dict) -> dict:
        return {(g, a): f[g] * c for (g, a), c in form.items() if g in f and f[g] * c}

    def right(self, form: dict, f: dict) -> dict:
        # (delta_g e_a) f = delta_g R_a(f) e_a
        out: dict = {}
        for (g, a), c in form.items():
            x = self.right_translate(f, a).get(g)
            if x:
                add_into(out, {(g, a): c * x})
        return out

    def adjoint(self, a, g) -> dict:
        """e_a <| delta_g = sum_{xy=g} S(delta_x) e_a delta_y."""
        H = self.H
        out: dict = {}
        for x, y in H.coproduct_pairs(g):
            form = self.right(self.generator(a), H.delta(y))
            add_into(out, self.left(H.antipode(H.delta(x)), form))
        return out

    def leibniz_failures(self) -> list:
        H, out = self.H, []
        for x, y in product(H.basis, H.basis):
            f, g = H.delta(x), H.delta(y)
            lhs = self.d(H.product(f, g))
            rhs = add_into(self.right(self.d(f), g), self.left(f, self.d(g)))
            if not vec_equal(lhs, rhs):
                out.append((x, y))
        return out


def group_calculus(H: FnHopfAlgebra, C) -> GroupCalculus:
    G = H.group
    C = tuple(sorted({G.normalize(a) for a in C}))
    if G.identity in C:
        raise CalculusError("the identity element cannot be a generator")
    return GroupCalculus(H, C)


@dataclass
class VerticalMap:
    bundle: Bundle
    calculus: GroupCalculus

    def on_pair(self, p: dict, q: dict) -> dict:
        """ver(p dq) = p q_[0] (x) S(q_[1]) d q_[2], as an element of P (x) Lambda^1."""
        b, gc = self.bundle, self.calculus
        H, G, P = b.H, b.G, b.P
        full: dict = {}  # (unit, h, a): coefficient of unit (x) delta_h e_a
        for x, y in product(G.elements, G.elements):
            g = G.add(x, y)
            pq = P.mul(p, b.coaction.act(g, q))
            if not pq:
                continue
            form = gc.left(H.antipode(H.delta(x)), gc.d(H.delta(y)))
            for w, c in pq.items():
                for (h, a), f in form.items():
                    add_into(full, {(w, h, a): c * f})
        # the result must be left invariant: constant in h
        out: dict = {}
        for (w, h, a), c in full.items():
            out.setdefault((w, a), {})[h] = c
        collapsed = {}
        for key, vals in out.items():
            first = next(iter(vals.values()))
            if len(vals) != len(G.elements) or any(v != first for v in vals.values()):
                raise StructuralError(f"vertical part not left invariant at {key}")
            collapsed[key] = first
        return collapsed

    def on_exact(self, p: dict) -> dict:
        return self.on_pair(self.bundle.P.one(), p)

    def expected_exact(self, p: dict) -> dict:
        """sum_a (a |> p - p) (x) e_a."""
        out: dict = {}
        for a in self.calculus.C:
            diff = add_into(dict(self.bundle.coaction.act(a, p)), p, -ONE)
            for w, c in diff.items():
                out[(w, a)] = c
        return out

    def on_universal(self, xi: dict) -> dict:
        """Extend linearly to P (x) P, read as sum p dq."""
        out: dict = {}
        for (u, v), c in xi.items():
            add_into(out, self.on_pair({u: ONE}, {v: ONE}), c)
        return out


def vertical_on_forms(b: Bundle, gc: GroupCalculus) -> VerticalMap:
    if gc.H != b.H:
        raise CalculusError("calculus and bundle use different Hopf algebras")
    return VerticalMap(b, gc)


def universal_forms(P) -> list[dict]:
    """Basis of the universal calculus: the kernel of multiplication P (x) P -> P."""
    units = P.basis()
    columns = {(u, v): P.mul({u: ONE}, {v: ONE}) for u in units for v in units}
    return kernel(columns, list(columns))


@dataclass
class MatrixCalculus:
    bundle: Bundle
    C: tuple
    pi: dict  # a -> pi(a) as a vector

    @property
    def P(self):
        return self.bundle.P

    @property
    def rank(self) -> int:
        return len(self.C)

    def d(self, p: dict) -> dict:
        """d p = sum_a [pi(a), p] (x) e_a."""
        out = {}
        for a in self.C:
            for w, c in commutator(self.P, self.pi[a], p).items():
                out[(w, a)] = c
        return out

    def left(self, p: dict, form: dict) -> dict:
        out: dict = {}
        for a in self.C:
            part = {w: c for (w, b), c in form.items() if b == a}
            for w, c in self.P.mul(p, part).items():
                add_into(out, {(w, a): c})
        return out

    def right(self, form: dict, q: dict) -> dict:
        out: dict = {}
        for a in self.C:
            part = {w: c for (w, b), c in form.items() if b == a}
            for w, c in self.P.mul(part, q).items():
                add_into(out, {(w, a): c})
        return out

    def untwisted_right(self, form: dict, q: dict) -> dict:
        """(p (x) e_a) q = p (a |> q) (x) e_a on the image of ver."""
        out: dict = {}
        for a in self.C:
            part = {w: c for (w, b), c in form.items() if b == a}
            aq = self.bundle.coaction.act(a, q)
            for w, c in self.P.mul(part, aq).items():
                add_into(out, {(w, a): c})
        return out

    def twist(self, form: dict) -> dict:
        """p (x) e_a -> p pi(a) (x) e_a."""
        out: dict = {}
        for a in self.C:
            part = {w: c for (w, b), c in form.items() if b == a}
            for w, c in self.P.mul(part, self.pi[a]).items():
                add_into(out, {(w, a): c})
        return out

    def leibniz_failures(self) -> list:
        out = []
        units = self.P.basis()
        for u, v in product(units, units):
            p, q = {u: ONE}, {v: ONE}
            lhs = self.d(self.P.mul(p, q))
            rhs = add_into(self.right(self.d(p), q), self.left(p, self.d(q)))
            if not vec_equal(lhs, rhs):
                out.append((u, v))
        return out

    def centrality_failures(self) -> list:
        """Twist intertwines the untwisted right action with plain multiplication."""
        out = []
        units = self.P.basis()
        for a in self.C:
            for u, v in product(units, units):
                form = {(u, a): ONE}
                lhs = self.twist(self.untwisted_right(form, {v: ONE}))
                rhs = self.right(self.twist(form), {v: ONE})
                if not vec_equal(lhs, rhs):
                    out.append((a, u, v))
        return out

    def universal_rank(self) -> int:
        """Rank of sum p (x) q -> sum p dq on the universal calculus."""
        e = Echelon()
        for xi in universal_forms(self.P):
            img: dict = {}
            for (u, v), c in xi.items():
                add_into(img, self.left({u: ONE}, self.d({v: ONE})), c)
            e.insert(img)
        return e.rank


def matrix_calculus(b: Bundle, C) -> MatrixCalculus:
    if not b.projective_rep:
        raise CalculusError("bundle has no projective representation")
    G = b.G
    C = tuple(sorted({G.normalize(a) for a in C}))
    if G.identity in C:
        raise CalculusError("the identity element cannot be a generator")
    return MatrixCalculus(b, C, {a: b.projective_rep[a] for a in C})


def inner_element(mc: MatrixCalculus):
    """Traceless theta_a with d p = sum_a [theta_a, p] (x) e_a, or None if d is not inner."""
    P = mc.P
    units = P.basis()
    n = P.size
    theta = {}
    for a in mc.C:
        columns = {}
        for w in units:
            col: dict = {}
            for v in units:
                for x, c in commutator(P, {w: ONE}, {v: ONE}).items():
                    col[(v, x)] = c
            columns[w] = col
        target: dict = {}
        for v in units:
            for (x, b), c in mc.d({v: ONE}).items():
                if b == a:
                    target[(v, x)] = c
        sol = solve(columns, units, target)
        if sol is None:
            return None
        tr = sum((sol.get((0, i, i), 0) for i in range(n)), 0 * ONE)
        theta[a] = add_into(dict(sol), P.one(), -(tr * Fraction(1, n)))
    return theta


# M_2 with H = C[Z_2 x Z_2]; elements (i, t) stand for g_{i, (-1)^t}
M2_DIAG, M2_SWAP, M2_ROT = (0, 1), (1, 0), (1, 1)


def m2_central_basis(theta: dict) -> dict | None:
    """Inner element in generators f0 = 2 e_(0,-1), f1 = e_(1,1) + e_(1,-1), f2 = e_(1,1) - e_(1,-1)."""
    out = {}
    if M2_DIAG in theta:
        out["f0"] = scale(theta[M2_DIAG], Fraction(1, 2))
    if M2_SWAP in theta and M2_ROT in theta:
        half = Fraction(1, 2)
        out["f1"] = scale(add_into(dict(theta[M2_SWAP]), theta[M2_ROT]), half)
        out["f2"] = scale(add_into(dict(theta[M2_SWAP]), theta[M2_ROT], -ONE), half)
    elif M2_SWAP in theta or M2_ROT in theta:
        return None
    return out


UNIVERSAL_DIM_M2 = 12


@dataclass
class CalculusReport:
    group: str
    subset: tuple
    rank: int
    universal: bool
    description: str
    inner: dict | None
    inner_central_basis: dict | None
    leibniz_ok: bool
    relations: list

    def to_json(self) -> dict:
        out = {
            "group": self.group,
            "subset": [list(a) for a in self.subset],
            "rank": self.rank,
            "universal": self.universal,
            "description": self.description,
            "leibniz": self.leibniz_ok,
            "relations": self.relations,
        }
        if self.inner is not None:
            out["inner_element"] = {",".join(map(str, a)): _vec_json(v) for a, v in self.inner.items()}
        if self.inner_central_basis is not None:
            out["inner_element_central_basis"] = {k: _vec_json(v) for k, v in self.inner_central_basis.items()}
        return out


def _vec_json(v: dict) -> list:
    return [[list(u), serialize(c)] for u, c in sorted(v.items())]


def _unit_name(u) -> str:
    return f"E{u[1]}{u[2]}"


def _describe_vec(v: dict) -> str:
    if not v:
        return "0"
    return " + ".join(f"({c})*{_unit_name(u)}" if c != 1 else _unit_name(u) for u, c in sorted(v.items()))


def calculus_report(b: Bundle, C) -> CalculusReport:
    mc = matrix_calculus(b, C)
    P = mc.P
    theta = inner_element(mc) if mc.C else {}
    urank = mc.universal_rank() if mc.C else 0
    udim = len(universal_forms(P))
    universal = urank == udim and mc.rank * P.dim == udim
    central = m2_central_basis(theta) if (P.size == 2 and theta is not None) else None
    if not mc.C:
        desc = "zero calculus"
    elif universal:
        desc = f"{mc.rank}D universal calculus"
    else:
        desc = f"{mc.rank}D non-universal calculus"
    relations = []
    for a in mc.C[:3]:
        relations.append(f"e_{a} central: p e_{a} = e_{a} p")
    for u in P.basis()[:2]:
        parts = [f"[{_describe_vec(mc.pi[a])}, {_unit_name(u)}] e_{a}" for a in mc.C]
        relations.append(f"d {_unit_name(u)} = " + (" + ".join(parts) if parts else "0"))
    return CalculusReport(
        str(b.G), mc.C, mc.rank, universal, desc, theta, central, not mc.leibniz_failures(), relations
    )


def classify_m2(C=None):
    """Report(s) for subsets of (Z_2 x Z_2) minus e acting on M_2.

    With C given, report that subset; otherwise all eight subsets.
    """
    b = build_case2(1, 2)
    if C is not None:
        return calculus_report(b, C)
    others = [g for g in b.G.elements if g != b.G.identity]
    return [calculus_report(b, sub) for r in range(len(others) + 1) for sub in combinations(others, r)]


def vertical_isomorphism_rank(b: Bundle, gc: GroupCalculus) -> tuple[int, int]:
    """(rank of ver on universal forms, dim P (x) Lambda^1)."""
    vm = vertical_on_forms(b, gc)
    e = Echelon()
    for xi in universal_forms(b.P):
        e.insert(vm.on_universal(xi))
    return e.rank, b.P.dim * len(gc.C)

