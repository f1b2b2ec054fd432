"""Free groups F_k: reduced words, balls, and counting quasimorphisms.

Letters are signed integers: generator ``i`` is ``i + 1`` and its inverse is
``-(i + 1)``.  A :class:`ReducedWord` stores the run-length encoded form as a
tuple of ``(generator, exponent)`` syllables.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

DEFAULT_CAP = 10**6


class RankMismatch(ValueError):
    pass


class ResourceCapExceeded(RuntimeError):
    """An enumeration would exceed the configured size cap."""


@dataclass(frozen=True, order=True)
class ReducedWord:
    syllables: tuple[tuple[int, int], ...]
    rank: int = 2

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        prev = None
        for gen, exp in self.syllables:
            if not 0 <= gen < self.rank:
                raise ValueError(f"generator {gen} out of range for rank {self.rank}")
            if exp == 0:
                raise ValueError("zero exponent in syllable")
            if gen == prev:
                raise ValueError("adjacent syllables share a generator")
            prev = gen

    @classmethod
    def identity(cls, rank: int = 2) -> ReducedWord:
        return cls((), rank)

    @classmethod
    def generator(cls, i: int, rank: int = 2, exp: int = 1) -> ReducedWord:
        return cls(((i, exp),) if exp else (), rank)

    @classmethod
    def parse(cls, text: str, rank: int = 2) -> ReducedWord:
        return reduce(parse_letters(text, rank), rank)

    def letters(self) -> tuple[int, ...]:
        out: list[int] = []
        for gen, exp in self.syllables:
            letter = gen + 1 if exp > 0 else -(gen + 1)
            out.extend([letter] * abs(exp))
        return tuple(out)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def is_identity(self) -> bool:
        return not self.syllables

    def __mul__(self, other: ReducedWord) -> ReducedWord:
        return multiply(self, other)

    def __invert__(self) -> ReducedWord:
        return invert(self)

    def __pow__(self, n: int) -> ReducedWord:
        return power(self, n)

    def __str__(self) -> str:
        return format_word(self)


def _check_letter(letter: int, rank: int) -> None:
    if letter == 0 or abs(letter) > rank:
        raise ValueError(f"letter {letter} is not a generator of F_{rank}")


def reduce(letters: Iterable[int], rank: int = 2) -> ReducedWord:
    """Freely reduce a sequence of signed letters."""
    stack: list[list[int]] = []
    for letter in letters:
        _check_letter(letter, rank)
        gen, step = abs(letter) - 1, (1 if letter > 0 else -1)
        if stack and stack[-1][0] == gen:
            stack[-1][1] += step
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, step])
    return ReducedWord(tuple((g, e) for g, e in stack), rank)


def _same_rank(u: ReducedWord, v: ReducedWord) -> None:
    if u.rank != v.rank:
        raise RankMismatch(f"rank {u.rank} vs rank {v.rank}")


def multiply(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    _same_rank(u, v)
    left = list(u.syllables)
    right = list(v.syllables)
    while left and right:
        (g1, e1), (g2, e2) = left[-1], right[0]
        if g1 != g2:
            break
        left.pop()
        right.pop(0)
        if e1 + e2:
            left.append((g1, e1 + e2))
            break
    return ReducedWord(tuple(left + right), u.rank)


def invert(u: ReducedWord) -> ReducedWord:
    return ReducedWord(tuple((g, -e) for g, e in reversed(u.syllables)), u.rank)


def power(u: ReducedWord, n: int) -> ReducedWord:
    if n < 0:
        return power(invert(u), -n)
    result = ReducedWord.identity(u.rank)
    base = u
    while n:
        if n & 1:
            result = multiply(result, base)
        base = multiply(base, base)
        n >>= 1
    return result


def commutator(x: ReducedWord, y: ReducedWord) -> ReducedWord:
    """``[x, y] = x^-1 y^-1 x y``."""
    return multiply(multiply(invert(x), invert(y)), multiply(x, y))


def concat(*words: ReducedWord) -> ReducedWord:
    if not words:
        raise ValueError("need at least one word")
    letters: list[int] = []
    for w in words:
        _same_rank(words[0], w)
        letters.extend(w.letters())
    return reduce(letters, words[0].rank)


# -- literals ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*([A-Za-z])(?:\^\s*(-?\d+))?")


def parse_letters(text: str, rank: int = 2) -> list[int]:
    """Parse ``"a^2 b A b^-3"`` style literals into signed letters.

    Lowercase letters are generators, uppercase their inverses.  ``""``,
    ``"1"`` and ``"e"`` (when ``e`` is not a generator) denote the identity.
    """
    s = text.strip()
    if s in ("", "1") or (s == "e" and rank < 5):
        return []
    out: list[int] = []
    pos = 0
    s = s.replace("*", " ")
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"cannot parse word literal at {s[pos:]!r}")
        ch, exp = m.group(1), int(m.group(2)) if m.group(2) is not None else 1
        gen = string.ascii_lowercase.index(ch.lower())
        sign = -1 if ch.isupper() else 1
        letter = sign * (gen + 1)
        _check_letter(letter, rank)
        if exp < 0:
            letter, exp = -letter, -exp
        out.extend([letter] * exp)
        pos = m.end()
    return out


def format_word(w: ReducedWord) -> str:
    if w.is_identity():
        return "e"
    parts = []
    for gen, exp in w.syllables:
        name = string.ascii_lowercase[gen]
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return " ".join(parts)


# -- balls ------------------------------------------------------------------

def _letter_order(rank: int) -> list[int]:
    # a < a^-1 < b < b^-1 < ...
    out = []
    for i in range(rank):
        out += [i + 1, -(i + 1)]
    return out


def ball_size(rank: int, radius: int) -> int:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if rank == 1:
        return 2 * radius + 1
    return 1 + 2 * rank * ((2 * rank - 1) ** radius - 1) // (2 * rank - 2)


def sphere_letters(rank: int, radius: int) -> Iterator[tuple[int, ...]]:
    """Reduced letter strings of length exactly ``radius`` in lexicographic order."""
    order = _letter_order(rank)
    layer: list[tuple[int, ...]] = [()]
    for _ in range(radius):
        layer = [w + (l,) for w in layer for l in order if not w or l != -w[-1]]
    yield from layer


def ball(rank: int, radius: int, cap: int = DEFAULT_CAP) -> list[ReducedWord]:
    """All reduced words of length <= radius, length-lexicographically ordered."""
    size = ball_size(rank, radius)
    if size > cap:
        raise ResourceCapExceeded(f"ball({rank}, {radius}) has {size} words > cap {cap}")
    order = _letter_order(rank)
    out = []
    layer: list[tuple[int, ...]] = [()]
    for r in range(radius + 1):
        if r:
            layer = [w + (l,) for w in layer for l in order if not w or l != -w[-1]]
        out.extend(reduce(w, rank) for w in layer)
    return out


# -- quasimorphisms ---------------------------------------------------------

@dataclass(frozen=True)
class HomCount:
    """Signed exponent sum of one generator; a homomorphism to Z."""
    generator: int
    rank: int = 2

    def __call__(self, x: ReducedWord) -> int:
        return eval_quasimorphism(self, x)

    def label(self) -> str:
        return f"hom:{string.ascii_lowercase[self.generator]}"


@dataclass(frozen=True)
class Brooks:
    """Counting quasimorphism: disjoint occurrences of ``pattern`` minus those of its inverse."""
    pattern: ReducedWord

    def __post_init__(self):
        if self.pattern.is_identity():
            raise ValueError("Brooks pattern must be nontrivial")

    @property
    def rank(self) -> int:
        return self.pattern.rank

    def __call__(self, x: ReducedWord) -> int:
        return eval_quasimorphism(self, x)

    def label(self) -> str:
        return "brooks:" + format_word(self.pattern).replace(" ", "")


Quasimorphism = HomCount | Brooks


def parse_quasimorphism(text: str, rank: int = 2) -> Quasimorphism:
    """``hom:a`` or ``brooks:<word literal>``."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "hom":
        letters = parse_letters(arg, rank)
        if len(letters) != 1 or letters[0] < 0:
            raise ValueError(f"hom needs a single generator, got {arg!r}")
        return HomCount(letters[0] - 1, rank)
    if kind == "brooks":
        return Brooks(ReducedWord.parse(arg, rank))
    raise ValueError(f"unknown quasimorphism kind {kind!r}")


def count_disjoint(text: Sequence[int], pattern: Sequence[int]) -> int:
    """Greedy left-to-right count of non-overlapping occurrences."""
    n, m = len(text), len(pattern)
    pat = tuple(pattern)
    count = i = 0
    while i + m <= n:
        if tuple(text[i:i + m]) == pat:
            count += 1
            i += m
        else:
            i += 1
    return count


def eval_quasimorphism(phi: Quasimorphism, x: ReducedWord) -> int:
    if phi.rank != x.rank:
        raise RankMismatch(f"quasimorphism on F_{phi.rank}, word in F_{x.rank}")
    if isinstance(phi, HomCount):
        return sum(e for g, e in x.syllables if g == phi.generator)
    text = x.letters()
    return (count_disjoint(text, phi.pattern.letters())
            - count_disjoint(text, invert(phi.pattern).letters()))


# -- defect experiments -----------------------------------------------------

@dataclass
class DefectReport:
    phi: str
    defect_max: int
    witness: tuple[ReducedWord, ReducedWord] | None
    pairs: int

    def to_json(self) -> dict:
        return {
            "phi": self.phi,
            "defect_max": self.defect_max,
            "witness": [str(w) for w in self.witness] if self.witness else None,
            "pairs": self.pairs,
        }


def defect(phi: Quasimorphism, x: ReducedWord, y: ReducedWord) -> int:
    return phi(multiply(x, y)) - phi(x) - phi(y)


def exhaustive_pairs(rank: int, radius: int, cap: int = DEFAULT_CAP):
    words = ball(rank, radius, cap)
    if len(words) ** 2 > cap * cap:
        raise ResourceCapExceeded("pair count over cap")
    return product(words, repeat=2)


def random_pairs(rank: int, length: int, count: int, seed: int = 0):
    import random

    rng = random.Random(seed)
    letters = _letter_order(rank)

    def draw():
        return reduce([rng.choice(letters) for _ in range(rng.randint(0, length))], rank)

    for _ in range(count):
        yield draw(), draw()


def defect_scan(phi: Quasimorphism, pairs: Iterable[tuple[ReducedWord, ReducedWord]]) -> DefectReport:
    """Maximum of |phi(xy) - phi(x) - phi(y)| over the pairs; the first maximiser is the witness."""
    best, witness, n = 0, None, 0
    cache: dict[ReducedWord, int] = {}

    def val(w):
        if w not in cache:
            cache[w] = phi(w)
        return cache[w]

    for x, y in pairs:
        n += 1
        d = abs(val(multiply(x, y)) - val(x) - val(y))
        if witness is None or d > best:
            best, witness = d, (x, y)
    return DefectReport(phi.label(), best, witness, n)


@dataclass
class CommutatorReport:
    phi: str
    bound: int
    worst: int
    worst_ratio: float
    witness: tuple[ReducedWord, ReducedWord] | None
    violation: tuple[ReducedWord, ReducedWord] | None

    @property
    def ok(self) -> bool:
        return self.violation is None


def commutator_bound_check(phi: Quasimorphism, C: int,
                           pairs: Iterable[tuple[ReducedWord, ReducedWord]]) -> CommutatorReport:
    """Check |phi([x, y])| <= 2|phi(e)| + 5C on every pair."""
    e = ReducedWord.identity(phi.rank)
    bound = 2 * abs(phi(e)) + 5 * C
    worst, witness, violation = -1, None, None
    for x, y in pairs:
        v = abs(phi(commutator(x, y)))
        if v > worst:
            worst, witness = v, (x, y)
        if v > bound and violation is None:
            violation = (x, y)
    ratio = worst / bound if bound else (0.0 if worst <= 0 else float("inf"))
    return CommutatorReport(phi.label(), bound, max(worst, 0), ratio, witness, violation)


def separation_word(k: int, n: int) -> ReducedWord:
    """``(a^k b a b^-1)^n (a^-(k-1) b^2 a^-1 b^-1 a^-1 b^-1)^n`` in F_2."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < 0:
        raise ValueError("n must be nonnegative")
    first = ReducedWord.parse(f"a^{k} b a b^-1")
    second = ReducedWord.parse(f"a^{-(k - 1)} b^2 a^-1 b^-1 a^-1 b^-1")
    return multiply(power(first, n), power(second, n))


def separation_witness(k: int, n: int, m: int = 3) -> tuple[ReducedWord, dict[str, int]]:
    """The word above and the values of phi_{a^k}, ..., phi_{a^{k+m}}, phi_a, phi_b on it."""
    x = separation_word(k, n)
    table: dict[str, int] = {}
    for j in range(m + 1):
        phi = Brooks(ReducedWord.generator(0, 2, k + j))
        table[phi.label()] = phi(x)
    for g in (0, 1):
        phi = HomCount(g, 2)
        table[phi.label()] = phi(x)
    return x, table
