"""Word-problem backends shared by the order search and the amenability checks.

A backend knows how to multiply, invert and recognise the identity exactly.
Elements must be hashable; equality of elements is equality in the group.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Sequence

from . import freegroup, heisenberg


class GroupBackend:
    name = "group"

    def identity(self) -> Hashable:
        raise NotImplementedError

    def multiply(self, g, h):
        raise NotImplementedError

    def invert(self, g):
        raise NotImplementedError

    def is_identity(self, g) -> bool:
        return g == self.identity()

    def format(self, g) -> str:
        return str(g)

    def ball(self, generators: Sequence, radius: int, cap: int | None = None) -> dict:
        """Breadth-first ball in the word metric: element -> word length."""
        gens = list(generators) + [self.invert(s) for s in generators]
        dist = {self.identity(): 0}
        frontier = [self.identity()]
        for r in range(1, radius + 1):
            nxt = []
            for g in frontier:
                for s in gens:
                    h = self.multiply(g, s)
                    if h not in dist:
                        dist[h] = r
                        nxt.append(h)
                        if cap is not None and len(dist) > cap:
                            raise freegroup.ResourceCapExceeded(
                                f"ball exceeds cap {cap} at radius {r}")
            frontier = nxt
        return dist


class FreeGroupBackend(GroupBackend):
    def __init__(self, rank: int = 2):
        self.rank = rank
        self.name = f"FreeGroup({rank})"

    def identity(self):
        return freegroup.ReducedWord.identity(self.rank)

    def multiply(self, g, h):
        return freegroup.multiply(g, h)

    def invert(self, g):
        return freegroup.invert(g)

    def generators(self):
        return [freegroup.ReducedWord.generator(i, self.rank) for i in range(self.rank)]


class FreeAbelianBackend(GroupBackend):
    def __init__(self, dim: int = 2):
        self.dim = dim
        self.name = f"FreeAbelian({dim})"

    def identity(self):
        return (0,) * self.dim

    def multiply(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def invert(self, g):
        return tuple(-x for x in g)

    def generators(self):
        return [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]


class HeisenbergBackend(GroupBackend):
    name = "Heisenberg"

    def identity(self):
        return heisenberg.E

    def multiply(self, g, h):
        return heisenberg.mul(g, h)

    def invert(self, g):
        return heisenberg.inv(g)

    def generators(self):
        return [heisenberg.X, heisenberg.Y, heisenberg.Z]


IntMatrix = tuple[tuple[int, ...], ...]


def mat_mul(p: IntMatrix, q: IntMatrix) -> IntMatrix:
    n = len(p)
    return tuple(tuple(sum(p[i][k] * q[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def mat_identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix (Gauss-Jordan over Q)."""
    n = len(m)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    out = []
    for row in aug:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("matrix is not invertible over the integers")
        out.append(tuple(int(v) for v in vals))
    return tuple(out)


class IntMatrixGroupBackend(GroupBackend):
    def __init__(self, n: int, generators: Sequence[Sequence[Sequence[int]]] = ()):
        self.n = n
        self.gens = [tuple(tuple(int(v) for v in row) for row in g) for g in generators]
        self.name = f"IntMatrixGroup({n})"

    def identity(self):
        return mat_identity(self.n)

    def multiply(self, g, h):
        return mat_mul(g, h)

    def invert(self, g):
        return mat_inverse(g)

    def generators(self):
        return list(self.gens)

