"""Exact sparse linear algebra over Q(i) for the normalizer solves.

Vectors are dicts ``coordinate -> GaussianRational``; matrices are lists of
column vectors.
"""

from __future__ import annotations

from typing import Dict, Hashable, List, Sequence

from .superalgebra import GaussianRational

Vector = Dict[Hashable, GaussianRational]


class _Echelon:
    """Incremental column echelon form that remembers combinations."""

    def __init__(self):
        self.pivots: Dict[Hashable, tuple] = {}  # coordinate -> (vector, combination)

    def reduce(self, vec: Vector, comb: Vector):
        vec = dict(vec)
        comb = dict(comb)
        changed = True
        while changed:
            changed = False
            for coord in list(vec):
                piv = self.pivots.get(coord)
                if piv is None or coord not in vec:
                    continue
                pvec, pcomb = piv
                factor = vec[coord]
                _axpy(vec, -factor, pvec)
                _axpy(comb, -factor, pcomb)
                changed = True
        return vec, comb

    def insert(self, vec: Vector, comb: Vector) -> bool:
        """Returns False (and leaves the basis unchanged) if ``vec`` is dependent."""
        vec, comb = self.reduce(vec, comb)
        if not vec:
            self._last_null = comb
            return False
        coord = min(vec, key=repr)
        inv = 1 / vec[coord]
        vec = {k: v * inv for k, v in vec.items()}
        comb = {k: v * inv for k, v in comb.items()}
        # keep existing pivot vectors reduced in the new coordinate
        for key, (pv, pc) in list(self.pivots.items()):
            f = pv.get(coord)
            if f:
                pv = dict(pv)
                pc = dict(pc)
                _axpy(pv, -f, vec)
                _axpy(pc, -f, comb)
                self.pivots[key] = (pv, pc)
        self.pivots[coord] = (vec, comb)
        return True


def _axpy(target: Vector, factor, source: Vector):
    for k, v in source.items():
        new = target.get(k)
        new = v * factor if new is None else new + v * factor
        if new:
            target[k] = new
        else:
            target.pop(k, None)


def nullspace(columns: Sequence[Vector]) -> List[Vector]:
    """Basis of ``{c : sum_j c_j columns[j] = 0}``; each result maps column
    index to coefficient."""
    ech = _Echelon()
    out = []
    for j, col in enumerate(columns):
        if not ech.insert(col, {j: GaussianRational(1)}):
            out.append(ech._last_null)
    return out


def rank(vectors: Sequence[Vector]) -> int:
    ech = _Echelon()
    return sum(1 for v in vectors if ech.insert(v, {}))


def span_equal(a: Sequence[Vector], b: Sequence[Vector]) -> bool:
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(list(a) + list(b))


def span_contains(big: Sequence[Vector], small: Sequence[Vector]) -> bool:
    return rank(big) == rank(list(big) + list(small))


def solve(columns: Sequence[Vector], target: Vector):
    """A particular solution ``c`` with ``sum c_j columns[j] = target``, or ``None``."""
    ech = _Echelon()
    for j, col in enumerate(columns):
        ech.insert(col, {j: GaussianRational(1)})
    rest, comb = ech.reduce(target, {})
    if rest:
        return None
    # reduce() subtracted pivot combinations from the target, so the
    # recorded combination is minus the solution
    return {j: -v for j, v in comb.items()}
