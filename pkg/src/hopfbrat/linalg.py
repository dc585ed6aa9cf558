"""Exact sparse linear algebra over CycNum.

Vectors are dicts mapping sortable basis keys to nonzero scalars.  Pivot
choice is deterministic: the smallest key (in ``sorted`` order) present in
the reduced vector.
"""

from __future__ import annotations

from .exactnum import ONE, to_cyc

Vector = dict


def clean(v: Vector) -> Vector:
    return {k: c for k, c in v.items() if c}


def add_into(acc: Vector, v: Vector, scale=ONE) -> Vector:
    for k, c in v.items():
        x = acc.get(k)
        x = c * scale if x is None else x + c * scale
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


def scale(v: Vector, s) -> Vector:
    s = to_cyc(s)
    if not s:
        return {}
    return {k: c * s for k, c in v.items()}


def vec_sub(a: Vector, b: Vector) -> Vector:
    return add_into(dict(a), b, -ONE)


def vec_equal(a: Vector, b: Vector) -> bool:
    return not vec_sub(a, b)


def first_difference(a: Vector, b: Vector):
    """Smallest key where a and b disagree, or None."""
    diff = vec_sub(a, b)
    if not diff:
        return None
    return min(diff, key=_sort_key)


def _sort_key(k):
    return (str(type(k)), k) if not isinstance(k, tuple) else (0, k)


class Echelon:
    """Incrementally built reduced row-echelon basis of a subspace.

    With ``track=True`` each stored row remembers which combination of the
    inserted vectors it came from, so targets can be expressed in terms of
    the generators (used to produce preimages).
    """

    def __init__(self, track: bool = False):
        self.rows: dict = {}  # pivot key -> row with pivot coefficient 1
        self.track = track
        self.combo: dict = {}  # pivot key -> combination of generator labels
        self._count = 0

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list:
        return sorted(self.rows, key=_sort_key)

    def _reduce(self, v: Vector, combo: Vector | None):
        # rows are fully reduced, so one pass over v's pivot keys suffices
        for p in [k for k in v if k in self.rows]:
            c = v[p]
            add_into(v, self.rows[p], -c)
            if combo is not None:
                add_into(combo, self.combo[p], -c)
        return v

    def insert(self, v: Vector, label=None) -> bool:
        """Add v to the spanning set; True if it increased the rank."""
        if label is None:
            label = self._count
        self._count += 1
        combo = {label: ONE} if self.track else None
        v = self._reduce(clean(v), combo)
        if not v:
            return False
        p = min(v, key=_sort_key)
        inv = to_cyc(v[p]).inverse()
        v = {k: c * inv for k, c in v.items()}
        if combo is not None:
            combo = {k: c * inv for k, c in combo.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                add_into(row, v, -c)
                if combo is not None:
                    add_into(self.combo[q], combo, -c)
        self.rows[p] = v
        if combo is not None:
            self.combo[p] = combo
        return True

    def residue(self, v: Vector) -> Vector:
        """Normal form of v modulo the span (supported on non-pivot keys)."""
        return self._reduce(clean(v), None)

    def contains(self, v: Vector) -> bool:
        return not self.residue(v)

    def express(self, v: Vector):
        """Combination of generator labels equal to v, or None if v is outside the span."""
        if not self.track:
            raise ValueError("express needs track=True")
        v = clean(v)
        if self.residue(dict(v)):
            return None
        out: dict = {}
        for p, c in v.items():
            if p in self.rows:
                add_into(out, self.combo[p], c)
        return out


def rank(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.insert(v)
    return e.rank


def kernel(columns: dict, domain_keys) -> list[Vector]:
    """Basis of the kernel of the linear map sending basis key j to columns[j].

    The basis comes out in reduced form: one vector per free key, with
    coefficient 1 there and 0 on the other free keys.
    """
    domain_keys = sorted(domain_keys, key=_sort_key)
    # row-reduce the transpose problem: build rows of the matrix
    rows: dict = {}
    for j in domain_keys:
        for i, c in columns.get(j, {}).items():
            rows.setdefault(i, {})[j] = c
    e = Echelon()
    for i in sorted(rows, key=_sort_key):
        e.insert(rows[i])
    pivots = set(e.rows)
    free = [j for j in domain_keys if j not in pivots]
    basis = []
    for f in free:
        v = {f: ONE}
        for p, row in e.rows.items():
            c = row.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def solve(columns: dict, domain_keys, target: Vector):
    """Some x with sum_j x_j columns[j] == target, or None if inconsistent."""
    e = Echelon(track=True)
    for j in sorted(domain_keys, key=_sort_key):
        e.insert(columns.get(j, {}), label=j)
    return e.express(target)
