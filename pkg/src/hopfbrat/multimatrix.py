"""Multi-matrix algebras M_{d_1} + ... + M_{d_s} over CycNum.

Internally, elements are sparse vectors keyed by matrix units
``(block, row, col)``.  :class:`MultiMatrixElement` wraps such a vector with
dense per-block matrices for inspection and serialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .exactnum import ONE, ZERO, parse, serialize, to_cyc
from .linalg import add_into, scale, vec_equal

Unit = tuple  # (block, row, col)


class AlgebraMismatch(ValueError):
    pass


@dataclass(frozen=True)
class MultiMatrixAlgebra:
    block_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"block dimensions must be positive: {self.block_dims!r}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def dim(self) -> int:
        return sum(d * d for d in self.block_dims)

    @property
    def size(self) -> int:
        """Total matrix size sum(d_i)."""
        return sum(self.block_dims)

    def basis(self) -> list[Unit]:
        return [(b, i, j) for b, d in enumerate(self.block_dims) for i in range(d) for j in range(d)]

    def one(self) -> dict:
        return {(b, i, i): ONE for b, d in enumerate(self.block_dims) for i in range(d)}

    def block_one(self, b: int) -> dict:
        return {(b, i, i): ONE for i in range(self.block_dims[b])}

    def check_unit(self, u: Unit) -> None:
        b, i, j = u
        if not (0 <= b < len(self.block_dims)):
            raise IndexError(f"block {b} out of range for {self.block_dims}")
        d = self.block_dims[b]
        if not (0 <= i < d and 0 <= j < d):
            raise IndexError(f"unit {u} out of range for block of size {d}")

    def mul(self, x: dict, y: dict) -> dict:
        """Product of two sparse vectors."""
        by_row: dict = {}
        for (b, i, j), c in y.items():
            by_row.setdefault((b, i), []).append((j, c))
        out: dict = {}
        for (b, i, j), c in x.items():
            for k, d in by_row.get((b, j), ()):
                key = (b, i, k)
                v = out.get(key)
                v = c * d if v is None else v + c * d
                if v:
                    out[key] = v
                else:
                    out.pop(key)
        return out

    def element(self, vector: dict | None = None) -> MultiMatrixElement:
        return MultiMatrixElement.from_vector(self, vector or {})

    def __str__(self) -> str:
        return " + ".join(f"M{d}" for d in self.block_dims)


def matrix_unit(P: MultiMatrixAlgebra, block: int, i: int, j: int) -> MultiMatrixElement:
    P.check_unit((block, i, j))
    return MultiMatrixElement.from_vector(P, {(block, i, j): ONE})


@dataclass(frozen=True, eq=False)
class MultiMatrixElement:
    algebra: MultiMatrixAlgebra
    blocks: tuple

    @classmethod
    def from_vector(cls, P: MultiMatrixAlgebra, vector: dict) -> MultiMatrixElement:
        blocks = [[[ZERO] * d for _ in range(d)] for d in P.block_dims]
        for (b, i, j), c in vector.items():
            P.check_unit((b, i, j))
            blocks[b][i][j] = to_cyc(c)
        return cls(P, tuple(tuple(tuple(row) for row in blk) for blk in blocks))

    @classmethod
    def from_blocks(cls, P: MultiMatrixAlgebra, blocks) -> MultiMatrixElement:
        blocks = list(blocks)
        if len(blocks) != len(P.block_dims):
            raise AlgebraMismatch("wrong number of blocks")
        out = []
        for d, blk in zip(P.block_dims, blocks):
            if len(blk) != d or any(len(r) != d for r in blk):
                raise AlgebraMismatch(f"block is not {d}x{d}")
            out.append(tuple(tuple(to_cyc(c) for c in r) for r in blk))
        return cls(P, tuple(out))

    @property
    def vector(self) -> dict:
        return {
            (b, i, j): c
            for b, blk in enumerate(self.blocks)
            for i, row in enumerate(blk)
            for j, c in enumerate(row)
            if c
        }

    def _check(self, other: MultiMatrixElement) -> None:
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")

    def __add__(self, other: MultiMatrixElement) -> MultiMatrixElement:
        self._check(other)
        return MultiMatrixElement.from_vector(self.algebra, add_into(self.vector, other.vector))

    def __sub__(self, other: MultiMatrixElement) -> MultiMatrixElement:
        self._check(other)
        return MultiMatrixElement.from_vector(self.algebra, add_into(self.vector, other.vector, -ONE))

    def __neg__(self) -> MultiMatrixElement:
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, MultiMatrixElement):
            self._check(other)
            return MultiMatrixElement.from_vector(self.algebra, self.algebra.mul(self.vector, other.vector))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s) -> MultiMatrixElement:
        return MultiMatrixElement.from_vector(self.algebra, scale(self.vector, s))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiMatrixElement):
            return NotImplemented
        return self.algebra == other.algebra and vec_equal(self.vector, other.vector)

    def __hash__(self):
        return hash((self.algebra, frozenset(self.vector.items())))

    def is_zero(self) -> bool:
        return not self.vector

    def to_json(self) -> list:
        return [[[serialize(c) for c in row] for row in blk] for blk in self.blocks]

    @classmethod
    def from_json(cls, P: MultiMatrixAlgebra, data) -> MultiMatrixElement:
        return cls.from_blocks(P, [[[parse(s) for s in row] for row in blk] for blk in data])

    def __repr__(self) -> str:
        return f"MultiMatrixElement({self.algebra}, {self.to_json()})"


def algebra_arith(a: MultiMatrixElement, b, op: str) -> MultiMatrixElement:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class BlockPartition:
    lengths: tuple

    def __post_init__(self):
        lengths = tuple(int(x) for x in self.lengths)
        if not lengths or any(x < 1 for x in lengths):
            raise ValueError(f"block lengths must be positive: {self.lengths!r}")
        object.__setattr__(self, "lengths", lengths)

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def m(self) -> int:
        return sum(self.lengths)

    @property
    def offsets(self) -> tuple:
        out, acc = [], 0
        for x in self.lengths:
            out.append(acc)
            acc += x
        return tuple(out)

    def block_of(self, j: int) -> int:
        if not 0 <= j < self.m:
            raise IndexError(j)
        acc = 0
        for q, x in enumerate(self.lengths):
            acc += x
            if j < acc:
                return q
        raise AssertionError("unreachable")


@dataclass
class AlgebraEmbedding:
    source: MultiMatrixAlgebra
    target: MultiMatrixAlgebra
    images: dict  # source unit -> target vector
    kind: str = "composite"
    params: dict = field(default_factory=dict)

    def apply(self, x: dict) -> dict:
        out: dict = {}
        for u, c in x.items():
            add_into(out, self.images[u], c)
        return out

    def image_basis(self) -> list[dict]:
        return [self.images[u] for u in self.source.basis()]

    def compose(self, first: AlgebraEmbedding) -> AlgebraEmbedding:
        """self after first."""
        if first.target != self.source:
            raise AlgebraMismatch(f"cannot compose {first.target} -> {self.source}")
        images = {u: self.apply(v) for u, v in first.images.items()}
        return AlgebraEmbedding(first.source, self.target, images, "composite")

    def failures(self, limit: int = 5) -> list[str]:
        """Unitality and multiplicativity violations on basis pairs."""
        out = []
        if not vec_equal(self.apply(self.source.one()), self.target.one()):
            out.append("not unital")
        basis = self.source.basis()
        for u, v in product(basis, basis):
            lhs = self.apply(self.source.mul({u: ONE}, {v: ONE}))
            rhs = self.target.mul(self.images[u], self.images[v])
            if not vec_equal(lhs, rhs):
                out.append(f"not multiplicative on {u}*{v}")
                if len(out) >= limit:
                    break
        return out

    def is_homomorphism(self) -> bool:
        return not self.failures(limit=1)


def embed_case1(partition: BlockPartition) -> AlgebraEmbedding:
    src = MultiMatrixAlgebra(partition.lengths)
    tgt = MultiMatrixAlgebra((partition.m,))
    offs = partition.offsets
    images = {(q, a, b): {(0, offs[q] + a, offs[q] + b): ONE} for (q, a, b) in src.basis()}
    return AlgebraEmbedding(src, tgt, images, "case1", {"lengths": partition.lengths})


def embed_case2(k: int, n: int) -> AlgebraEmbedding:
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    src = MultiMatrixAlgebra((k,))
    tgt = MultiMatrixAlgebra((n * k,))
    images = {(0, a, d): {(0, a + k * r, d + k * r): ONE for r in range(n)} for (_, a, d) in src.basis()}
    return AlgebraEmbedding(src, tgt, images, "case2", {"k": k, "n": n})


def embed_case3(B: MultiMatrixAlgebra, n: int) -> AlgebraEmbedding:
    if n < 1:
        raise ValueError("n must be positive")
    s = len(B.block_dims)
    tgt = MultiMatrixAlgebra(B.block_dims * n)
    images = {(b, i, j): {(c * s + b, i, j): ONE for c in range(n)} for (b, i, j) in B.basis()}
    return AlgebraEmbedding(B, tgt, images, "case3", {"dims": B.block_dims, "n": n})


def identity_embedding(P: MultiMatrixAlgebra) -> AlgebraEmbedding:
    return AlgebraEmbedding(P, P, {u: {u: ONE} for u in P.basis()}, "identity")


def direct_sum(embeddings: list[AlgebraEmbedding]) -> AlgebraEmbedding:
    """Blockwise direct sum; blocks of each summand keep their order."""
    src_dims, tgt_dims, images = [], [], {}
    for e in embeddings:
        sb, tb = len(src_dims), len(tgt_dims)
        for (b, i, j), v in e.images.items():
            images[(b + sb, i, j)] = {(c + tb, x, y): w for (c, x, y), w in v.items()}
        src_dims.extend(e.source.block_dims)
        tgt_dims.extend(e.target.block_dims)
    return AlgebraEmbedding(MultiMatrixAlgebra(tuple(src_dims)), MultiMatrixAlgebra(tuple(tgt_dims)), images, "direct_sum")


def block_permutation(P: MultiMatrixAlgebra, order: list[int]) -> AlgebraEmbedding:
    """Isomorphism moving source block order[t] to target position t."""
    if sorted(order) != list(range(len(P.block_dims))):
        raise ValueError(f"not a permutation: {order}")
    tgt = MultiMatrixAlgebra(tuple(P.block_dims[b] for b in order))
    where = {b: t for t, b in enumerate(order)}
    images = {(b, i, j): {(where[b], i, j): ONE} for (b, i, j) in P.basis()}
    return AlgebraEmbedding(P, tgt, images, "permutation", {"order": list(order)})


def unit_vector(u: Unit, c=ONE) -> dict:
    return {u: to_cyc(c)}


def commutator(P: MultiMatrixAlgebra, x: dict, y: dict) -> dict:
    return add_into(P.mul(x, y), P.mul(y, x), -ONE)

