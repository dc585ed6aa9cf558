"""Bratteli levels: parsing, three-stage decomposition and analysis.

A level is written in a small text format::

    # M1 + M2 -> M1 + M4
    in 1,2; out 1,4; mult [[1,0],[2,1]]

``mult[i][j]`` is the number of times input block j enters output block i.
"""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bundles import (
    back_map,
    back_map_failures,
    build,
    closed_form_connection,
    declared_base_is_coinvariant,
    theorem1_connection,
    verify_strong_connection,
)
from .exactnum import ONE
from .galois import SubalgebraInclusion, galois_verdict
from .linalg import vec_equal
from .multimatrix import (
    AlgebraEmbedding,
    BlockPartition,
    MultiMatrixAlgebra,
    block_permutation,
    direct_sum,
    embed_case1,
    embed_case2,
    embed_case3,
    identity_embedding,
)


class LevelError(ValueError):
    """Base class for problems with a level description."""


class ParseError(LevelError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column


class DimensionMismatch(LevelError):
    pass


class UnsupportedLevel(LevelError):
    pass


class SizeLimitExceeded(LevelError):
    pass


@dataclass(frozen=True)
class BratteliLevel:
    input_dims: tuple
    output_dims: tuple
    multiplicity: tuple  # rows: output blocks, columns: input blocks

    def __post_init__(self):
        s, t = len(self.input_dims), len(self.output_dims)
        if len(self.multiplicity) != t or any(len(r) != s for r in self.multiplicity):
            raise DimensionMismatch(f"multiplicity matrix must be {t}x{s}")
        if any(x < 0 for r in self.multiplicity for x in r):
            raise DimensionMismatch("multiplicities must be nonnegative")
        if any(d < 1 for d in self.input_dims + self.output_dims):
            raise DimensionMismatch("block dimensions must be positive")
        for i, row in enumerate(self.multiplicity):
            total = sum(x * d for x, d in zip(row, self.input_dims))
            if total != self.output_dims[i]:
                terms = "+".join(f"{x}*{d}" for x, d in zip(row, self.input_dims))
                raise DimensionMismatch(
                    f"output block {i}: {terms} = {total} != {self.output_dims[i]}"
                )

    @property
    def source(self) -> MultiMatrixAlgebra:
        return MultiMatrixAlgebra(self.input_dims)

    @property
    def target(self) -> MultiMatrixAlgebra:
        return MultiMatrixAlgebra(self.output_dims)

    def edges(self) -> list[tuple]:
        """(j, i, multiplicity) with inputs ascending, then outputs ascending."""
        return [
            (j, i, self.multiplicity[i][j])
            for j in range(len(self.input_dims))
            for i in range(len(self.output_dims))
            if self.multiplicity[i][j] > 0
        ]

    def embedding(self) -> AlgebraEmbedding:
        """Each output block holds its inputs' copies down the diagonal, inputs ascending."""
        images: dict = {}
        for i, row in enumerate(self.multiplicity):
            off = 0
            for j, mult in enumerate(row):
                d = self.input_dims[j]
                for r in range(mult):
                    base = off + r * d
                    for a in range(d):
                        for c in range(d):
                            images.setdefault((j, a, c), {})[(i, base + a, base + c)] = ONE
                off += mult * d
        for u in self.source.basis():
            images.setdefault(u, {})
        return AlgebraEmbedding(self.source, self.target, images, "level")


_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<word>[A-Za-z_]+)|(?P<int>\d+)|(?P<punct>[,;\[\]])")


def _tokens(text: str):
    pos, line, col = 0, 1, 1
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind:
            out.append((kind, m.group(kind), line, col))
        chunk = m.group(0)
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rindex("\n")
        else:
            col += len(chunk)
        pos = m.end()
    out.append(("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str, value: str | None = None):
        tok = self.toks[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def int_list(self) -> list[int]:
        vals = [int(self.take("int")[1])]
        while self.peek()[:2] == ("punct", ","):
            self.i += 1
            vals.append(int(self.take("int")[1]))
        return vals

    def matrix(self) -> list[list[int]]:
        self.take("punct", "[")
        rows = [self.row()]
        while self.peek()[:2] == ("punct", ","):
            self.i += 1
            rows.append(self.row())
        self.take("punct", "]")
        return rows

    def row(self) -> list[int]:
        self.take("punct", "[")
        vals = self.int_list()
        self.take("punct", "]")
        return vals

    def level(self) -> tuple:
        self.take("word", "in")
        ins = self.int_list()
        self.take("punct", ";")
        self.take("word", "out")
        outs = self.int_list()
        self.take("punct", ";")
        self.take("word", "mult")
        mat = self.matrix()
        if self.peek()[:2] == ("punct", ";"):
            self.i += 1
        self.take("eof")
        return ins, outs, mat


def parse_level(text: str) -> BratteliLevel:
    ins, outs, mat = _Parser(text).level()
    return BratteliLevel(tuple(ins), tuple(outs), tuple(tuple(r) for r in mat))


def render_level(level: BratteliLevel) -> str:
    rows = ",".join("[" + ",".join(map(str, r)) + "]" for r in level.multiplicity)
    return (
        f"in {','.join(map(str, level.input_dims))}; "
        f"out {','.join(map(str, level.output_dims))}; mult [{rows}]"
    )


@dataclass
class Piece:
    kind: str  # case1 | case2 | case3 | identity
    params: dict
    source: tuple
    target: tuple

    @property
    def case(self) -> int | None:
        return None if self.kind == "identity" else int(self.kind[-1])

    def label(self) -> str:
        if self.kind == "identity":
            return f"identity M{self.source[0]}"
        body = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind}({body})"


@dataclass
class Stage:
    name: str
    pieces: list
    embedding: AlgebraEmbedding
    permutation: list | None = None  # block order applied before the pieces


@dataclass
class StagePlan:
    level: BratteliLevel
    stages: list

    def composite(self) -> AlgebraEmbedding:
        total = self.stages[0].embedding
        for st in self.stages[1:]:
            total = st.embedding.compose(total)
        return total

    def nonidentity_pieces(self) -> list:
        return [p for st in self.stages for p in st.pieces if p.kind != "identity"]

    def matches_level(self) -> bool:
        comp, want = self.composite(), self.level.embedding()
        return comp.target == want.target and all(
            vec_equal(comp.images[u], want.images[u]) for u in want.source.basis()
        )


def decompose(level: BratteliLevel) -> StagePlan:
    s, t = len(level.input_dims), len(level.output_dims)
    for j in range(s):
        if not any(level.multiplicity[i][j] for i in range(t)):
            raise UnsupportedLevel(f"input block {j} has no outgoing edge; composite would not be unital")
    edges = level.edges()

    # Stage A: replicate each input once per outgoing edge
    pieces, embs = [], []
    for j, d in enumerate(level.input_dims):
        c = sum(1 for (jj, _, _) in edges if jj == j)
        B = MultiMatrixAlgebra((d,))
        if c > 1:
            pieces.append(Piece("case3", {"dims": (d,), "n": c}, (d,), (d,) * c))
            embs.append(embed_case3(B, c))
        else:
            pieces.append(Piece("identity", {}, (d,), (d,)))
            embs.append(identity_embedding(B))
    stage_a = Stage("A", pieces, direct_sum(embs))

    # Stage B: inflate each copy by its multiplicity
    pieces, embs = [], []
    for j, i, mult in edges:
        d = level.input_dims[j]
        if mult > 1:
            pieces.append(Piece("case2", {"k": d, "n": mult}, (d,), (d * mult,)))
            embs.append(embed_case2(d, mult))
        else:
            pieces.append(Piece("identity", {}, (d,), (d,)))
            embs.append(identity_embedding(MultiMatrixAlgebra((d,))))
    stage_b = Stage("B", pieces, direct_sum(embs))

    # Stage C: regroup by output block, then combine along the diagonal
    order = sorted(range(len(edges)), key=lambda e: (edges[e][1], edges[e][0]))
    perm = block_permutation(stage_b.embedding.target, order)
    pieces, embs = [], []
    for i in range(t):
        lengths = tuple(level.input_dims[j] * mult for (j, ii, mult) in sorted(edges, key=lambda e: e[0]) if ii == i)
        if len(lengths) > 1:
            pieces.append(Piece("case1", {"lengths": lengths}, lengths, (sum(lengths),)))
            embs.append(embed_case1(BlockPartition(lengths)))
        else:
            pieces.append(Piece("identity", {}, lengths, lengths))
            embs.append(identity_embedding(MultiMatrixAlgebra(lengths)))
    stage_c = Stage("C", pieces, direct_sum(embs).compose(perm), permutation=order)
    return StagePlan(level, [stage_a, stage_b, stage_c])


@dataclass
class PieceReport:
    label: str
    kind: str
    params: dict
    dims: tuple
    rank: int | None
    is_hopf_galois: bool
    base_is_coinvariant: bool
    back_map_ok: bool
    connections_equal: bool
    checks: dict  # closed-form connection checks
    theorem1_checks: dict

    @property
    def ok(self) -> bool:
        return (
            self.is_hopf_galois
            and self.base_is_coinvariant
            and self.back_map_ok
            and self.connections_equal
            and all(self.checks.values())
            and all(self.theorem1_checks.values())
        )

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "params": {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()},
            "dims": list(self.dims),
            "rank": self.rank,
            "is_hopf_galois": self.is_hopf_galois,
            "base_is_coinvariant": self.base_is_coinvariant,
            "back_map_ok": self.back_map_ok,
            "connections_equal": self.connections_equal,
            "checks": dict(self.checks),
            "theorem1_checks": dict(self.theorem1_checks),
            "ok": self.ok,
        }

    @classmethod
    def from_json(cls, data: dict) -> PieceReport:
        params = {k: tuple(v) if isinstance(v, list) else v for k, v in data["params"].items()}
        return cls(
            data["label"],
            data["kind"],
            params,
            tuple(data["dims"]),
            data["rank"],
            data["is_hopf_galois"],
            data["base_is_coinvariant"],
            data["back_map_ok"],
            data["connections_equal"],
            dict(data["checks"]),
            dict(data["theorem1_checks"]),
        )


def analyze_piece(kind: str, params: dict, label: str = "") -> PieceReport:
    b = build(int(kind[-1]), params)
    v = b.verdict()
    bm = back_map(b)
    t1 = theorem1_connection(b, bm)
    cf = closed_form_connection(b)
    return PieceReport(
        label or kind,
        kind,
        dict(params),
        v.dims,
        v.rank,
        v.is_hopf_galois,
        declared_base_is_coinvariant(b),
        not back_map_failures(b, bm),
        t1.equals(cf),
        verify_strong_connection(b, cf).checks(),
        verify_strong_connection(b, t1).checks(),
    )


def _analyze_args(args):
    return analyze_piece(*args)


@dataclass
class LevelReport:
    level: str
    stages: list  # per stage: list of piece labels
    permutation: list | None
    composite_matches: bool
    pieces: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.composite_matches and all(p.ok for p in self.pieces)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "stages": self.stages,
            "permutation": self.permutation,
            "composite_matches": self.composite_matches,
            "pieces": [p.to_json() for p in self.pieces],
            "ok": self.ok,
        }

    @classmethod
    def from_json(cls, data: dict) -> LevelReport:
        return cls(
            data["level"],
            data["stages"],
            data["permutation"],
            data["composite_matches"],
            [PieceReport.from_json(p) for p in data["pieces"]],
        )


def analyze(plan: StagePlan, max_dim: int = 12, workers: int = 1) -> LevelReport:
    """Run the bundle pipeline on every non-identity piece of the plan.

    ``max_dim`` bounds the matrix size (sum of block sizes) of each piece's
    total algebra.
    """
    jobs = []
    for p in plan.nonidentity_pieces():
        size = sum(p.target)
        if size > max_dim:
            raise SizeLimitExceeded(f"piece {p.label()} has size {size} > {max_dim}")
        jobs.append((p.kind, p.params, p.label()))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(_analyze_args, jobs))
    else:
        reports = [analyze_piece(*j) for j in jobs]
    return LevelReport(
        render_level(plan.level),
        [[p.label() for p in st.pieces] for st in plan.stages],
        plan.stages[-1].permutation,
        plan.matches_level(),
        reports,
    )


def analyze_direct(level: BratteliLevel, hopf=None):
    """Galois verdict for the undecomposed inclusion of the level's source in its target."""
    emb = level.embedding()
    return galois_verdict(SubalgebraInclusion(emb.target, emb.image_basis(), hopf), case="direct")
