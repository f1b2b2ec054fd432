"""Følner sets, Ponzi schemes and paradoxical decompositions, each with an exact verifier.

Statements about a whole infinite group are checked on a finite ball.  The
ball splits into an interior (radius R-1) and a boundary shell (radius R);
conditions whose witnesses could leave the ball are only asserted on the
interior.  All ratios are exact ``Fraction`` values.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from . import freegroup
from .freegroup import ReducedWord
from .groups import FreeAbelianBackend, FreeGroupBackend, GroupBackend


@dataclass
class CheckReport:
    check: str
    parameters: dict
    verdict: str
    witness: object = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        out = {"check": self.check, "parameters": self.parameters,
               "verdict": self.verdict, "witness": self.witness}
        if self.details:
            out["details"] = self.details
        return out


def _fmt(backend: GroupBackend, g) -> object:
    if isinstance(g, tuple):
        return list(g)
    return backend.format(g)


# -- Følner sets ---------------------------------------------------------------

@dataclass
class FolnerCandidate:
    backend: GroupBackend
    elements: frozenset
    S: tuple
    eps: Fraction

    def __post_init__(self):
        if not self.elements:
            raise ValueError("a Følner candidate must be nonempty")
        self.eps = Fraction(self.eps)


def overlap(backend: GroupBackend, F: frozenset, a) -> int:
    """``#(F ∩ aF)``."""
    return sum(1 for f in F if backend.multiply(a, f) in F)


def check_folner(c: FolnerCandidate) -> CheckReport:
    """Pass iff ``#(F ∩ aF) > (1 - eps) #F`` for every a in S."""
    n = len(c.elements)
    threshold = (1 - c.eps) * n
    params = {"group": c.backend.name, "size": n, "eps": str(c.eps),
              "S": [_fmt(c.backend, a) for a in c.S]}
    worst = None
    for a in c.S:
        ratio = Fraction(overlap(c.backend, c.elements, a), n)
        if ratio * n <= threshold:
            return CheckReport("folner", params, "fail",
                               {"a": _fmt(c.backend, a), "ratio": str(ratio)})
        worst = ratio if worst is None else min(worst, ratio)
    return CheckReport("folner", params, "pass", None,
                       {"min_ratio": str(worst) if worst is not None else None})


def box(d: int, n: int) -> frozenset:
    return frozenset(itertools.product(range(n), repeat=d))


def unit_generators(d: int) -> tuple:
    return tuple(FreeAbelianBackend(d).generators())


def folner_box(d: int, S: Sequence | None = None, eps=Fraction(1, 10),
               cap: int = 10**4) -> tuple[int, FolnerCandidate]:
    """Least n such that the cube ``[0, n)^d`` passes the Følner check."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    backend = FreeAbelianBackend(d)
    S = tuple(tuple(a) for a in (S if S is not None else unit_generators(d)))
    for n in range(1, cap + 1):
        c = FolnerCandidate(backend, box(d, n), S, eps)
        if check_folner(c).ok:
            return n, c
    raise freegroup.ResourceCapExceeded(f"no passing cube with side <= {cap}")


# -- F2 is not amenable --------------------------------------------------------

def f2_overlap_bound(F: Iterable[ReducedWord]) -> CheckReport:
    """``#(F∩aF) + #(F∩bF) <= #F - 1`` for nonempty F in F2.

    The pairs {g, a^-1 g} and {g, b^-1 g} counted on the left are distinct
    edges of the Cayley tree with both ends in F, and a forest on #F
    vertices has at most #F - 1 edges.  Hence no nonempty F is
    ({a, b}, eps)-invariant once eps <= 1/2.
    """
    backend = FreeGroupBackend(2)
    F = frozenset(F)
    a, b = backend.generators()
    na, nb = overlap(backend, F, a), overlap(backend, F, b)
    ok = na + nb <= len(F) - 1
    return CheckReport("f2_overlap_bound", {"size": len(F)}, "pass" if ok else "fail",
                       None if ok else {"a_overlap": na, "b_overlap": nb},
                       {"a_overlap": na, "b_overlap": nb})


def f2_folner_sweep(R: int = 4, samples: int = 200, eps=Fraction(1, 2),
                    seed: int = 0) -> CheckReport:
    """Sampled subsets of ball(2, R): the overlap bound holds and the Følner test fails.

    Balls of every radius up to R are included, then seeded random subsets.
    This samples candidates; it does not enumerate all subsets.
    """
    eps = Fraction(eps)
    backend = FreeGroupBackend(2)
    S = tuple(backend.generators())
    words = freegroup.ball(2, R)
    rng = random.Random(seed)
    candidates = [frozenset(freegroup.ball(2, r)) for r in range(R + 1)]
    for _ in range(samples):
        k = rng.randint(1, len(words))
        candidates.append(frozenset(rng.sample(words, k)))
    params = {"radius": R, "samples": len(candidates), "eps": str(eps), "seed": seed}
    for F in candidates:
        bound = f2_overlap_bound(F)
        if not bound.ok:
            return CheckReport("f2_folner_sweep", params, "fail",
                               {"set": sorted(map(str, F)), **bound.witness})
        if eps <= Fraction(1, 2) and check_folner(FolnerCandidate(backend, F, S, eps)).ok:
            return CheckReport("f2_folner_sweep", params, "fail",
                               {"set": sorted(map(str, F)), "reason": "passed Følner test"})
    return CheckReport("f2_folner_sweep", params, "pass", None,
                       {"note": "sampled candidate sets, not all subsets"})


# -- Ponzi scheme on a free group ----------------------------------------------

@dataclass
class PonziScheme:
    rank: int
    radius: int
    M: dict
    S: tuple

    def preimages(self) -> dict:
        """``#M^-1(g)`` within the ball; the identity does not count itself."""
        out = {g: 0 for g in self.M}
        for h, g in self.M.items():
            if h != g:
                out[g] += 1
        return out

    def wealth(self) -> dict:
        """Dollars held after everyone passes theirs along; the identity keeps its own."""
        return {g: n + (self.M[g] == g) for g, n in self.preimages().items()}


def build_ponzi_free(k: int = 2, R: int = 6) -> PonziScheme:
    """Everyone hands a dollar to the neighbour one letter closer to e."""
    if k < 2 or R < 1:
        raise ValueError("need rank >= 2 and radius >= 1")
    M = {}
    for g in freegroup.ball(k, R):
        M[g] = freegroup.reduce(g.letters()[:-1], k) if len(g) else g
    gens = [ReducedWord.generator(i, k, s) for i in range(k) for s in (1, -1)]
    return PonziScheme(k, R, M, (ReducedWord.identity(k), *gens))


def verify_ponzi(scheme: PonziScheme) -> CheckReport:
    k, R = scheme.rank, scheme.radius
    params = {"rank": k, "radius": R}
    S = set(scheme.S)
    for g, h in scheme.M.items():
        if freegroup.multiply(freegroup.invert(g), h) not in S:
            return CheckReport("ponzi", params, "fail", {"moves_too_far": str(g)})
    pre = scheme.preimages()
    wealth = scheme.wealth()
    for g, n in pre.items():
        if len(g) >= R:
            continue
        expected = 2 * k if g.is_identity() else 2 * k - 1
        if n != expected or n < 2:
            return CheckReport("ponzi", params, "fail", {"word": str(g), "preimages": n})
    total = sum(wealth.values())
    if total != len(scheme.M):
        return CheckReport("ponzi", params, "fail", {"wealth_total": total, "ball": len(scheme.M)})
    e = ReducedWord.identity(k)
    interior = {wealth[g] for g in scheme.M if 0 < len(g) < R}
    return CheckReport("ponzi", params, "pass", None, {
        "wealth_identity": wealth[e],
        "wealth_interior": sorted(interior),
        "wealth_boundary": sorted({wealth[g] for g in scheme.M if len(g) == R}),
        "wealth_total": total,
        "ball_size": len(scheme.M),
        "boundary": "words of length R pass their dollar inward and receive nothing",
    })


def wealth_table(scheme: PonziScheme) -> str:
    """Aligned text: one row per word length."""
    wealth = scheme.wealth()
    rows = [("length", "words", "wealth each", "total")]
    for r in range(scheme.radius + 1):
        vals = [wealth[g] for g in scheme.M if len(g) == r]
        each = ",".join(str(v) for v in sorted(set(vals)))
        rows.append((str(r), str(len(vals)), each, str(sum(vals))))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in rows)


# -- growth --------------------------------------------------------------------

def abelian_ball_size(d: int, R: int) -> int:
    """Closed form for the L1 ball in Z^d: sum of 2^i C(d,i) C(R,i)."""
    return sum(2**i * math.comb(d, i) * math.comb(R, i) for i in range(min(d, R) + 1))


def ball_sizes(backend: GroupBackend, R: int) -> list[int]:
    dist = backend.ball(backend.generators(), R)
    counts = [0] * (R + 1)
    for r in dist.values():
        counts[r] += 1
    return list(itertools.accumulate(counts))


def growth_obstruction(backend: GroupBackend, R: int, displacement: int = 1) -> CheckReport:
    """Ball sizes up to 2R and what they say about Ponzi schemes.

    A scheme moving money at most ``displacement`` steps needs
    ``#B(r + displacement) >= 2 #B(r)`` at every radius.  For Z^d the
    doubling ratio is checked against ``2^d (1 + 1/R)^d`` and the first
    radius where the doubling requirement fails is reported.  For free
    groups doubling holds at every sampled radius.
    """
    sizes = ball_sizes(backend, 2 * R)
    params = {"group": backend.name, "radius": R, "displacement": displacement}
    first_fail = next((r for r in range(len(sizes) - displacement)
                       if sizes[r + displacement] < 2 * sizes[r]), None)
    details = {"ball_sizes": sizes, "first_non_doubling_radius": first_fail}
    if isinstance(backend, FreeAbelianBackend):
        d = backend.dim
        ratio = Fraction(sizes[2 * R], sizes[R])
        bound = Fraction(2)**d * (1 + Fraction(1, R))**d
        details.update(ratio=str(ratio), bound=str(bound), growth="polynomial")
        ok = ratio <= bound and first_fail is not None
        return CheckReport("growth", params, "pass" if ok else "fail",
                           None if ok else {"ratio": str(ratio)}, details)
    if isinstance(backend, FreeGroupBackend):
        details["growth"] = "exponential"
        ok = first_fail is None
        return CheckReport("growth", params, "pass" if ok else "fail",
                           None if ok else {"radius": first_fail}, details)
    return CheckReport("growth", params, "inconclusive", None, details)


# -- paradoxical decomposition of F2 -------------------------------------------

@dataclass
class ParadoxicalDecomposition:
    pieces: dict[str, Callable[[ReducedWord], bool]]
    translators: dict[str, ReducedWord]
    halves: tuple[tuple[str, ...], ...]


def _starts_with(letter: int, with_identity: bool = False) -> Callable[[ReducedWord], bool]:
    def member(w: ReducedWord) -> bool:
        if w.is_identity():
            return with_identity
        return w.letters()[0] == letter
    return member


def build_paradoxical_f2(include_identity: bool = True) -> ParadoxicalDecomposition:
    """Pieces by first letter, with e added to A1; F2 = a^-1 A1 ∪ a A2 = b^-1 B1 ∪ b B2."""
    a, b = (ReducedWord.generator(i, 2) for i in range(2))
    return ParadoxicalDecomposition(
        pieces={"A1": _starts_with(1, include_identity), "A2": _starts_with(-1),
                "B1": _starts_with(2), "B2": _starts_with(-2)},
        translators={"A1": ~a, "A2": a, "B1": ~b, "B2": b},
        halves=(("A1", "A2"), ("B1", "B2")),
    )


def verify_paradoxical(dec: ParadoxicalDecomposition, R: int = 4) -> CheckReport:
    words = freegroup.ball(2, R)
    params = {"radius": R, "ball_size": len(words)}
    checks = {"disjoint": True, "union": True}
    witness = None
    for w in words:
        owners = [name for name, member in dec.pieces.items() if member(w)]
        if len(owners) != 1:
            check = "union" if not owners else "disjoint"
            checks[check] = False
            witness = witness or {"check": check, "word": str(w), "pieces": owners}
    # w lies in t P iff t^-1 w lies in P; on the interior t^-1 w stays in the ball
    for half in dec.halves:
        name = "cover_" + "".join(half)
        checks[name] = True
        for w in words:
            if len(w) >= R:
                continue
            if not any(dec.pieces[p](freegroup.multiply(~dec.translators[p], w)) for p in half):
                checks[name] = False
                witness = witness or {"check": name, "word": str(w)}
                break
    verdict = "pass" if all(checks.values()) else "fail"
    return CheckReport("paradoxical", params, verdict, witness, {"checks": checks})
