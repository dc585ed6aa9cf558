"""Elementary quantum principal bundles and their strong connections.

Case 1: M_m over the block-diagonal subalgebra, H = C[Z_n].
Case 2: M_{nk} over the diagonal copy of M_k, H = C[Z_n x Z_n].
Case 3: B^{+n} over the replicated copy of B, H = C[Z_n].

Roots of unity are stored as exponents: the group element t of Z_n stands
for omega = zeta_n^t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .exactnum import ONE, parse, root_of_unity, serialize
from .galois import Coaction, coaction_from_action, coinvariants, galois_verdict, span_equal, tensor, ver_sharp
from .hopf import FiniteAbelianGroup, FnHopfAlgebra, convolve, convolution_inverse, maps_equal, unit_counit
from .linalg import add_into, first_difference, scale, vec_equal
from .multimatrix import (
    BlockPartition,
    MultiMatrixAlgebra,
    embed_case1,
    embed_case2,
    embed_case3,
)


@dataclass
class Bundle:
    case: int
    P: MultiMatrixAlgebra
    H: FnHopfAlgebra
    coaction: Coaction
    A: list  # basis of the declared base algebra
    params: dict
    projective_rep: dict | None = None  # g -> invertible vector pi(g)
    conductor: int = 1

    @property
    def G(self) -> FiniteAbelianGroup:
        return self.H.group

    def verdict(self):
        return galois_verdict(self.coaction, case=f"case{self.case}")


def _rep_action(P: MultiMatrixAlgebra, rep: dict, rep_inv: dict):
    def act(g, u):
        return P.mul(P.mul(rep[g], {u: ONE}), rep_inv[g])

    return act


def build_case1(lengths) -> Bundle:
    part = BlockPartition(tuple(lengths))
    n, m = part.n, part.m
    P = MultiMatrixAlgebra((m,))
    H = FnHopfAlgebra(FiniteAbelianGroup((n,)))
    # g_omega = diag(omega^(j)); conjugation scales the (s, t) block by omega^(s - t)
    rep = {(t,): {(0, j, j): root_of_unity(n, t * part.block_of(j)) for j in range(m)} for (t,) in H.basis}
    rep_inv = {(t,): {(0, j, j): root_of_unity(n, -t * part.block_of(j)) for j in range(m)} for (t,) in H.basis}
    c = coaction_from_action(P, H, _rep_action(P, rep, rep_inv))
    A = embed_case1(part).image_basis()
    return Bundle(1, P, H, c, A, {"lengths": part.lengths}, rep, conductor=n)


def case1_surjectivity_witness(lengths, xi: int) -> dict:
    """sum_{i,j} (1/l_(j)) xi^((i)-(j)) E_ij (x) E_ji, with xi = zeta_n^xi.

    Its image under the canonical map is n I_m (x) delta_xi.
    """
    part = BlockPartition(tuple(lengths))
    n, m = part.n, part.m
    out: dict = {}
    for i in range(m):
        for j in range(m):
            c = root_of_unity(n, xi * (part.block_of(i) - part.block_of(j))) * Fraction(1, part.lengths[part.block_of(j)])
            out[((0, i, j), (0, j, i))] = c
    return out


def case2_matrix(k: int, n: int, i: int, t: int) -> dict:
    """g_{i,omega} = sum_r omega^r F_{r, r+i} with omega = zeta_n^t."""
    out = {}
    for r in range(n):
        w = root_of_unity(n, t * r)
        c = ((r + i) % n) * k
        for a in range(k):
            out[(0, r * k + a, c + a)] = w
    return out


def case2_block_unit(k: int, n: int, j: int, t: int) -> dict:
    """F_{jt}: the identity matrix in block (j, t)."""
    j, t = j % n, t % n
    return {(0, j * k + a, t * k + a): ONE for a in range(k)}


def build_case2(k: int, n: int) -> Bundle:
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    m = n * k
    P = MultiMatrixAlgebra((m,))
    H = FnHopfAlgebra(FiniteAbelianGroup((n, n)))
    rep = {(i, t): case2_matrix(k, n, i, t) for (i, t) in H.basis}
    # g_{i,omega}^{-1} = omega^i g_{-i, 1/omega}
    rep_inv = {(i, t): scale(case2_matrix(k, n, -i, -t), root_of_unity(n, t * i)) for (i, t) in H.basis}
    c = coaction_from_action(P, H, _rep_action(P, rep, rep_inv))
    A = embed_case2(k, n).image_basis()
    return Bundle(2, P, H, c, A, {"k": k, "n": n}, rep, conductor=n)


def build_case3(B: MultiMatrixAlgebra, n: int) -> Bundle:
    if n < 1:
        raise ValueError("n must be positive")
    s = len(B.block_dims)
    emb = embed_case3(B, n)
    P = emb.target
    H = FnHopfAlgebra(FiniteAbelianGroup((n,)))

    def act(g, u):
        b, i, j = u
        copy, blk = divmod(b, s)
        return {(((copy + g[0]) % n) * s + blk, i, j): ONE}

    c = coaction_from_action(P, H, act)
    return Bundle(3, P, H, c, emb.image_basis(), {"dims": B.block_dims, "n": n}, conductor=1)


def build(case: int, params: dict) -> Bundle:
    if case == 1:
        return build_case1(params["lengths"])
    if case == 2:
        return build_case2(params["k"], params["n"])
    if case == 3:
        return build_case3(MultiMatrixAlgebra(tuple(params["dims"])), params["n"])
    raise ValueError(f"unknown case {case}")


def declared_base_is_coinvariant(b: Bundle) -> bool:
    return span_equal(coinvariants(b.coaction), b.A)


# --- back maps -------------------------------------------------------------


@dataclass
class BackMap:
    """h -> h^(1) (x) h^(2) over the delta basis."""

    table: dict  # g -> P (x) P tensor


def copy_one(b: Bundle, copy: int) -> dict:
    """1_{,copy} in B^{+n}."""
    s = len(b.params["dims"])
    out = {}
    for blk, d in enumerate(b.params["dims"]):
        for i in range(d):
            out[(copy * s + blk, i, i)] = ONE
    return out


def back_map(b: Bundle) -> BackMap:
    P, G = b.P, b.G
    one_one = tensor(P.one(), P.one())
    table = {}
    if b.case == 1:
        part = BlockPartition(b.params["lengths"])
        n, m = part.n, part.m
        for (t,) in G.elements:
            if t == 0:
                continue
            acc: dict = {}
            for i, j in product(range(m), range(m)):
                c = root_of_unity(n, t * (part.block_of(i) - part.block_of(j))) * Fraction(
                    1, n * part.lengths[part.block_of(j)]
                )
                add_into(acc, {((0, i, j), (0, j, i)): c})
            table[(t,)] = acc
    elif b.case == 2:
        k, n = b.params["k"], b.params["n"]
        F = lambda x, y: case2_block_unit(k, n, x, y)
        for (i, t) in G.elements:
            if (i, t) == (0, 0):
                continue
            acc = {}
            for j, a in product(range(n), range(n)):
                c = root_of_unity(n, t * (i - j + a)) * Fraction(1, n)
                add_into(acc, tensor(F(a, j - i), F(j, i + a)), c)
            table[(i, t)] = acc
    elif b.case == 3:
        n = b.params["n"]
        for (i,) in G.elements:
            acc = {}
            for t in range(n):
                add_into(acc, tensor(copy_one(b, t), copy_one(b, (t - i) % n)))
            table[(i,)] = acc
        return BackMap(table)
    else:
        raise ValueError(f"no back map for case {b.case}")
    # the identity element takes what is left of 1 (x) 1
    rest = dict(one_one)
    for t in table.values():
        add_into(rest, t, -ONE)
    table[G.identity] = rest
    return BackMap(table)


def back_map_failures(b: Bundle, bm: BackMap) -> list[str]:
    out = []
    P = b.P
    for g in b.G.elements:
        want = {(w, g): x for w, x in P.one().items()}
        if not vec_equal(ver_sharp(b.coaction, bm.table.get(g, {})), want):
            out.append(f"ver(back_map({g})) != 1 (x) delta_{g}")
    total: dict = {}
    for t in bm.table.values():
        add_into(total, t)
    if not vec_equal(total, tensor(P.one(), P.one())):
        out.append("back map does not send 1 to 1 (x) 1")
    return out


# --- connections -------------------------------------------------------------


@dataclass
class Connection:
    """omega#: H -> P (x) P over the delta basis."""

    table: dict  # g -> P (x) P tensor
    case: int | None = None
    params: dict = field(default_factory=dict)

    def __call__(self, h: dict) -> dict:
        out: dict = {}
        for g, c in h.items():
            add_into(out, self.table.get(g, {}), c)
        return out

    def equals(self, other: Connection) -> bool:
        keys = set(self.table) | set(other.table)
        return all(vec_equal(self.table.get(g, {}), other.table.get(g, {})) for g in keys)

    def differences(self, other: Connection) -> list:
        keys = sorted(set(self.table) | set(other.table))
        out = []
        for g in keys:
            d = first_difference(self.table.get(g, {}), other.table.get(g, {}))
            if d is not None:
                out.append((g, d))
        return out

    def to_json(self) -> dict:
        table = {}
        for g in sorted(self.table):
            # group terms by right tensor factor: sum_u c_uv E_u (x) E_v
            by_right: dict = {}
            for (u, v), c in self.table[g].items():
                by_right.setdefault(v, {})[u] = c
            table[",".join(map(str, g))] = [
                [_vector_json(left), _vector_json({v: ONE})] for v, left in sorted(by_right.items())
            ]
        return {"case": self.case, "params": _params_json(self.params), "table": table}

    @classmethod
    def from_json(cls, data: dict) -> Connection:
        table = {}
        for key, terms in data["table"].items():
            g = tuple(int(x) for x in key.split(",")) if key else ()
            acc: dict = {}
            for left, right in terms:
                add_into(acc, tensor(_vector_from_json(left), _vector_from_json(right)))
            table[g] = acc
        params = dict(data.get("params") or {})
        for name in ("lengths", "dims"):
            if name in params:
                params[name] = tuple(params[name])
        return cls(table, data.get("case"), params)


def _params_json(params: dict) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in params.items()}


def _vector_json(x: dict) -> list:
    return [[list(u), serialize(c)] for u, c in sorted(x.items())]


def _vector_from_json(data) -> dict:
    return {tuple(u): parse(c) for u, c in data}


def pairing_form(H: FnHopfAlgebra):
    """b(h, g) = integral(h S g) on basis elements, cached."""
    cache = {}

    def b(x, y):
        key = (x, y)
        if key not in cache:
            cache[key] = H.pairing(H.delta(x), H.delta(y))
        return cache[key]

    return b


def theorem1_connection(b: Bundle, bm: BackMap) -> Connection:
    """Average an arbitrary section of ver# into a strong connection."""
    H, G, c = b.H, b.G, b.coaction
    form = pairing_form(H)
    units = b.P.basis()
    # a_R(p (x) h) = p_[0] b(p_[1], h);  a_L(h (x) p) = b(h, S^-1 p_[1]) p_[0]; S^-1 = S here
    a_r = {}
    a_l = {}
    for u in units:
        for h in G.elements:
            right: dict = {}
            left: dict = {}
            for g in G.elements:
                x = form(g, h)
                if x:
                    add_into(right, c.action[g][u], x)
                y = form(h, G.neg(g))
                if y:
                    add_into(left, c.action[g][u], y)
            a_r[(u, h)] = right
            a_l[(h, u)] = left
    table = {}
    for g in G.elements:
        acc: dict = {}
        for x, y, z in H.triple_coproduct(g):
            for (u, v), coef in bm.table.get(y, {}).items():
                left, right = a_l[(x, u)], a_r[(v, z)]
                if left and right:
                    add_into(acc, tensor(left, right), coef)
        table[g] = acc
    return Connection(table, b.case, dict(b.params))


def closed_form_connection(b: Bundle) -> Connection:
    P, G = b.P, b.G
    table = {}
    if b.case == 1:
        part = BlockPartition(b.params["lengths"])
        n, m = part.n, part.m
        base = scale(tensor(P.one(), P.one()), Fraction(1, n))
        for (t,) in G.elements:
            acc = dict(base)
            for i, j in product(range(m), range(m)):
                bi, bj = part.block_of(i), part.block_of(j)
                if bi != bj:
                    c = root_of_unity(n, t * (bi - bj)) * Fraction(1, n * part.lengths[bj])
                    add_into(acc, {((0, i, j), (0, j, i)): c})
            table[(t,)] = acc
    elif b.case == 2:
        table = case2_connection_table(b, reading="block", with_identity_term=True)
    elif b.case == 3:
        n = b.params["n"]
        for (i,) in G.elements:
            acc = {}
            for s in range(n):
                add_into(acc, tensor(copy_one(b, s), copy_one(b, (s - i) % n)))
            table[(i,)] = acc
    else:
        raise ValueError(f"no closed form for case {b.case}")
    return Connection(table, b.case, dict(b.params))


def case2_connection_table(b: Bundle, reading: str = "block", with_identity_term: bool = True) -> dict:
    """The Case 2 closed form, evaluated under a chosen index reading.

    ``reading="block"`` sums the indices b, s, i over Z_n; ``"row"`` sums them
    over Z_m, reducing block labels mod n.  The (1/n^2) I (x) I contribution
    of the identity back-map term is only included with ``with_identity_term``;
    without it the table is not normalized.
    """
    k, n = b.params["k"], b.params["n"]
    rng = range(n) if reading == "block" else range(n * k)
    F = lambda x, y: case2_block_unit(k, n, x, y)
    P = b.P
    table = {}
    for (q, t) in b.G.elements:
        acc: dict = {}
        for bb, s in product(rng, rng):
            add_into(acc, tensor(F(bb, s), F(s + q, bb + q)), root_of_unity(n, t * (bb - s)) * Fraction(1, n))
        for bb, i in product(rng, rng):
            add_into(acc, tensor(F(bb, bb), F(i + q + bb, i + q + bb)), Fraction(-1, n * n))
        if with_identity_term:
            add_into(acc, tensor(P.one(), P.one()), Fraction(1, n * n))
        table[(q, t)] = acc
    return table


@dataclass
class ConnectionReport:
    failures: list  # (check, h, witness)

    @property
    def ok(self) -> bool:
        return not self.failures

    def checks(self) -> dict:
        names = ["vertical", "right_leg", "left_leg", "normalized"]
        failed = {f[0] for f in self.failures}
        return {k: k not in failed for k in names}


def verify_strong_connection(b: Bundle, conn: Connection) -> ConnectionReport:
    P, H, G, c = b.P, b.H, b.G, b.coaction
    failures = []
    for g in G.elements:
        w = conn.table.get(g, {})
        # (a) ver#(omega(h)) = 1 (x) h
        want = {(x, g): y for x, y in P.one().items()}
        got = ver_sharp(c, w)
        d = first_difference(got, want)
        if d is not None:
            failures.append(("vertical", g, d))
        # (b) h^(1) (x) h^(2)_[0] (x) h^(2)_[1] = h_(1)^(1) (x) h_(1)^(2) (x) h_(2)
        lhs: dict = {}
        for (u, v), x in w.items():
            for h in G.elements:
                for v2, y in c.action[h][v].items():
                    add_into(lhs, {(u, v2, h): x * y})
        rhs: dict = {}
        for x1, x2 in H.coproduct_pairs(g):
            for (u, v), y in conn.table.get(x1, {}).items():
                add_into(rhs, {(u, v, x2): y})
        d = first_difference(lhs, rhs)
        if d is not None:
            failures.append(("right_leg", g, d))
        # (c) h^(1)_[0] (x) h^(1)_[1] (x) h^(2) = h_(2)^(1) (x) S h_(1) (x) h_(2)^(2)
        lhs = {}
        for (u, v), x in w.items():
            for h in G.elements:
                for u2, y in c.action[h][u].items():
                    add_into(lhs, {(u2, h, v): x * y})
        rhs = {}
        for x1, x2 in H.coproduct_pairs(g):
            for (u, v), y in conn.table.get(x2, {}).items():
                add_into(rhs, {(u, G.neg(x1), v): y})
        d = first_difference(lhs, rhs)
        if d is not None:
            failures.append(("left_leg", g, d))
    total: dict = {}
    for t in conn.table.values():
        add_into(total, t)
    d = first_difference(total, tensor(P.one(), P.one()))
    if d is not None:
        failures.append(("normalized", None, d))
    return ConnectionReport(failures)


# --- trivial bundle on M_n ----------------------------------------------------


def beta_solution(n: int) -> dict:
    return {(0, k): Fraction(1, n) for k in range(n)}


def gamma_solution(n: int) -> dict:
    return {(k, 0): Fraction(1, n) for k in range(n)}


def eq_g_residual(n: int, beta: dict, gamma: dict, k: int, s: int) -> Fraction:
    """sum_r beta_{r,r+k} gamma_{s+r+k,s+r} minus its required value."""
    total = Fraction(0)
    for r in range(n):
        total += beta.get((r, (r + k) % n), 0) * gamma.get(((s + r + k) % n, (s + r) % n), 0)
    return total - (Fraction(1, n * n) if s % n == 0 else 0)


@dataclass
class Trivialization:
    bundle: Bundle
    phi: dict  # g -> vector
    psi: dict
    checks: dict


def trivialization_Mn(n: int) -> Trivialization:
    b = build_case2(1, n)
    P, H, G = b.P, b.H, b.G
    beta, gamma = beta_solution(n), gamma_solution(n)
    phi, psi = {}, {}
    for (s, t) in G.elements:
        fp, fs = {}, {}
        for i, j in product(range(n), range(n)):
            x = beta.get(((i - s) % n, (j - s) % n))
            if x:
                add_into(fp, {(0, i, j): root_of_unity(n, t * (j - i)) * x})
            y = gamma.get(((i + s) % n, (j + s) % n))
            if y:
                add_into(fs, {(0, i, j): root_of_unity(n, t * (i - j)) * y})
        phi[(s, t)], psi[(s, t)] = fp, fs

    one = unit_counit(H, P)
    phi_one: dict = {}
    for v in phi.values():
        add_into(phi_one, v)
    checks = {
        "phi_unital": vec_equal(phi_one, P.one()),
        "phi_comodule_map": _is_comodule_map(b, phi),
        "phi_psi": maps_equal(H, convolve(H, phi, psi, P), one),
        "psi_phi": maps_equal(H, convolve(H, psi, phi, P), one),
        "psi_covariance": _psi_covariant(b, psi),
        "eq_g": all(eq_g_residual(n, beta, gamma, k, s) == 0 for k in range(n) for s in range(n)),
        "trace_beta": sum((beta.get((i, i), 0) for i in range(n)), Fraction(0)) == Fraction(1, n),
    }
    solved = convolution_inverse(H, phi, P)
    checks["inverse_matches_solver"] = bool(solved) and maps_equal(H, solved, psi)
    return Trivialization(b, phi, psi, checks)


def _is_comodule_map(b: Bundle, phi: dict) -> bool:
    # Delta_R phi(h) = (phi (x) id) Delta h
    H = b.H
    for g in H.basis:
        lhs = b.coaction.delta_r(phi[g])
        rhs: dict = {}
        for x, y in H.coproduct_pairs(g):
            for w, c in phi[x].items():
                add_into(rhs, {(w, y): c})
        if not vec_equal(lhs, rhs):
            return False
    return True


def _psi_covariant(b: Bundle, psi: dict) -> bool:
    # Delta_R psi(h) = psi(h_(2)) (x) S h_(1)
    H, G = b.H, b.G
    for g in H.basis:
        lhs = b.coaction.delta_r(psi[g])
        rhs: dict = {}
        for x, y in H.coproduct_pairs(g):
            for w, c in psi[y].items():
                add_into(rhs, {(w, G.neg(x)): c})
        if not vec_equal(lhs, rhs):
            return False
    return True

