"""The discrete Heisenberg group and its central-chain orders.

Elements are kept in the normal form ``y^b x^a z^c``.  With ``x = I + E12``,
``y = I + E23`` and ``z = I + E13`` this is the matrix

    [[1, a, c],
     [0, 1, b],
     [0, 0, 1]]

and multiplication is ``(a1, b1, c1)(a2, b2, c2) = (a1+a2, b1+b2, c1+c2+a1*b2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

Matrix3 = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]


@dataclass(frozen=True, order=True)
class HeisElement:
    a: int = 0  # x-exponent
    b: int = 0  # y-exponent
    c: int = 0  # z-exponent

    def __mul__(self, other: HeisElement) -> HeisElement:
        return mul(self, other)

    def __invert__(self) -> HeisElement:
        return inv(self)

    def __pow__(self, n: int) -> HeisElement:
        return power(self, n)

    def is_identity(self) -> bool:
        return self.a == self.b == self.c == 0

    def as_triple(self) -> list[int]:
        return [self.a, self.b, self.c]

    def __str__(self) -> str:
        return format_element(self)


E = HeisElement(0, 0, 0)
X = HeisElement(1, 0, 0)
Y = HeisElement(0, 1, 0)
Z = HeisElement(0, 0, 1)


def mul(g: HeisElement, h: HeisElement) -> HeisElement:
    # y^b1 x^a1 z^c1 . y^b2 x^a2 z^c2: moving x^a1 past y^b2 costs z^(a1*b2)
    return HeisElement(g.a + h.a, g.b + h.b, g.c + h.c + g.a * h.b)


def inv(g: HeisElement) -> HeisElement:
    return HeisElement(-g.a, -g.b, -g.c + g.a * g.b)


def power(g: HeisElement, n: int) -> HeisElement:
    # g^n = (na, nb, nc + ab n(n-1)/2), valid for negative n as well
    return HeisElement(n * g.a, n * g.b, n * g.c + g.a * g.b * n * (n - 1) // 2)


def commutator(g: HeisElement, h: HeisElement) -> HeisElement:
    """``[g, h] = g^-1 h^-1 g h``."""
    return mul(mul(inv(g), inv(h)), mul(g, h))


def product(elements: Sequence[HeisElement]) -> HeisElement:
    out = E
    for g in elements:
        out = mul(out, g)
    return out


def power_word(n: int) -> HeisElement:
    """``y^n x^n y^-n x^-n``, computed by four multiplications."""
    return product([power(Y, n), power(X, n), power(Y, -n), power(X, -n)])


def to_matrix(g: HeisElement) -> Matrix3:
    return ((1, g.a, g.c), (0, 1, g.b), (0, 0, 1))


def from_matrix(m: Sequence[Sequence[int]]) -> HeisElement:
    rows = [list(r) for r in m]
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("expected a 3x3 matrix")
    if any(rows[i][i] != 1 for i in range(3)) or any(rows[i][j] != 0 for i in range(3) for j in range(i)):
        raise ValueError("matrix is not upper unitriangular")
    if any(not isinstance(v, int) for r in rows for v in r):
        raise ValueError("matrix entries must be integers")
    return HeisElement(rows[0][1], rows[1][2], rows[0][2])


def matmul3(p: Sequence[Sequence[int]], q: Sequence[Sequence[int]]) -> Matrix3:
    return tuple(tuple(sum(p[i][k] * q[k][j] for k in range(3)) for j in range(3))
                 for i in range(3))  # type: ignore[return-value]


_TOKEN = re.compile(r"\s*([xyzXYZ])(?:\^\s*(-?\d+))?")


def parse_element(text: str) -> HeisElement:
    """Parse a word in ``x, y, z`` (uppercase for inverses, ``^n`` for powers)."""
    s = text.strip()
    if s in ("", "e", "1"):
        return E
    gens = {"x": X, "y": Y, "z": Z}
    out = E
    pos = 0
    while pos < len(s):
        if s[pos].isspace() or s[pos] == "*":
            pos += 1
            continue
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"cannot parse Heisenberg literal at {s[pos:]!r}")
        ch = m.group(1)
        n = int(m.group(2)) if m.group(2) is not None else 1
        if ch.isupper():
            n = -n
        out = mul(out, power(gens[ch.lower()], n))
        pos = m.end()
    return out


def format_element(g: HeisElement) -> str:
    if g.is_identity():
        return "e"
    parts = []
    for name, exp in (("y", g.b), ("x", g.a), ("z", g.c)):
        if exp:
            parts.append(name if exp == 1 else f"{name}^{exp}")
    return " ".join(parts)


# -- orders -----------------------------------------------------------------

class Cmp(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


_COORD = {"x": "a", "y": "b", "z": "c"}


@dataclass(frozen=True)
class HeisOrder:
    """Lexicographic order refining ``{e} < <z> < <z,x> < H`` or ``... < <z,y> < H``.

    ``chain`` lists the generators bottom-up (``"zxy"`` or ``"zyx"``) and
    ``signs`` gives the sign attached to each of them in the same order.
    The most significant coordinate is the last letter of the chain.
    """
    chain: str = "zxy"
    signs: str = "+++"

    def __post_init__(self):
        if self.chain not in ("zxy", "zyx"):
            raise ValueError(f"chain must be 'zxy' or 'zyx', got {self.chain!r}")
        if len(self.signs) != 3 or set(self.signs) - {"+", "-"}:
            raise ValueError(f"bad sign string {self.signs!r}")

    @classmethod
    def parse(cls, name: str) -> HeisOrder:
        chain, _, signs = name.partition(":")
        return cls(chain, signs or "+++")

    @property
    def name(self) -> str:
        return f"{self.chain}:{self.signs}"

    def levels(self, g: HeisElement) -> list[int]:
        """Signed coordinates, most significant first."""
        out = []
        for letter, sign in reversed(list(zip(self.chain, self.signs))):
            v = getattr(g, _COORD[letter])
            out.append(v if sign == "+" else -v)
        return out

    def leading_level(self, g: HeisElement) -> int:
        """Index of the first nonzero level (0 = most significant); 3 for e."""
        for i, v in enumerate(self.levels(g)):
            if v:
                return i
        return 3

    def is_positive(self, g: HeisElement) -> bool:
        for v in self.levels(g):
            if v:
                return v > 0
        return False

    def compare(self, g: HeisElement, h: HeisElement) -> Cmp:
        return compare(self, g, h)


def all_orders() -> list[HeisOrder]:
    return [HeisOrder(chain, s1 + s2 + s3)
            for chain in ("zxy", "zyx")
            for s1 in "+-" for s2 in "+-" for s3 in "+-"]


def compare(order: HeisOrder, g: HeisElement, h: HeisElement) -> Cmp:
    """``g < h`` iff ``g^-1 h`` lies in the positive cone."""
    d = mul(inv(g), h)
    if d.is_identity():
        return Cmp.EQUAL
    return Cmp.LESS if order.is_positive(d) else Cmp.GREATER


def absolute(order: HeisOrder, g: HeisElement) -> HeisElement:
    return g if compare(order, E, g) != Cmp.GREATER else inv(g)


def archimedean_lt(order: HeisOrder, g: HeisElement, h: HeisElement) -> bool:
    """Decide ``g << h``: every power of g is below |h|.

    For these orders it holds exactly when g sits strictly deeper in the
    chain than h (with e deepest of all and h nontrivial).
    """
    return order.leading_level(g) > order.leading_level(h)


def archimedean_lt_sampled(order: HeisOrder, g: HeisElement, h: HeisElement, N: int = 100) -> bool:
    """The defining condition checked for ``-N <= n <= N`` only."""
    bound = absolute(order, h)
    return all(compare(order, power(g, n), bound) == Cmp.LESS for n in range(-N, N + 1))


class LemmaViolation(AssertionError):
    pass


def verify_lemma(order: HeisOrder) -> str:
    """Which of ``z << x`` and ``z << y`` hold: 'z_ll_x', 'z_ll_y' or 'both'."""
    zx = archimedean_lt(order, Z, X)
    zy = archimedean_lt(order, Z, Y)
    if zx and zy:
        return "both"
    if zx:
        return "z_ll_x"
    if zy:
        return "z_ll_y"
    raise LemmaViolation(f"neither z << x nor z << y under {order.name}")
