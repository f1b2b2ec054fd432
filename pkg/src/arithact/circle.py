"""Piecewise-linear circle homeomorphisms with exact rational data.

A lift is stored by its breakpoints ``t_0 < ... < t_{m-1}`` in [0, 1) and
the values ``f(t_i)``; it is linear in between and satisfies
``f(t + 1) = f(t) + 1``.  Composition is ``compose(f, g) = f o g``, so the
group product ``gh`` means "apply h, then g".
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import freegroup
from .freegroup import ReducedWord

Q = Fraction


def _q(v) -> Fraction:
    return Fraction(v) if not isinstance(v, str) else Fraction(v.strip())


class PLCircleLift:
    __slots__ = ("breakpoints", "values")

    def __init__(self, breakpoints: Sequence, values: Sequence):
        bps = tuple(_q(t) for t in breakpoints)
        vals = tuple(_q(v) for v in values)
        if not bps or len(bps) != len(vals):
            raise ValueError("need equally many breakpoints and values, at least one")
        if not all(0 <= t < 1 for t in bps) or any(s >= t for s, t in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing in [0, 1)")
        if any(u >= v for u, v in zip(vals, vals[1:])) or vals[-1] >= vals[0] + 1:
            raise ValueError("values must increase strictly with f(t_0 + 1) = f(t_0) + 1")
        self.breakpoints, self.values = _canonical(bps, vals)

    # -- evaluation --------------------------------------------------------

    def __call__(self, t) -> Fraction:
        t = _q(t)
        n = math.floor(t)
        return _interp(self.breakpoints, self.values, t - n) + n

    def inverse_at(self, y) -> Fraction:
        y = _q(y)
        # the values, shifted into [0, 1), are the breakpoints of the inverse
        pts = sorted(_wrap(v, t) for t, v in zip(self.breakpoints, self.values))
        n = math.floor(y)
        return _interp(tuple(p for p, _ in pts), tuple(q for _, q in pts), y - n) + n

    # -- group structure ---------------------------------------------------

    def __matmul__(self, other: PLCircleLift) -> PLCircleLift:
        return compose(self, other)

    def shift(self, n: int) -> PLCircleLift:
        return PLCircleLift(self.breakpoints, [v + n for v in self.values])

    def is_translation(self) -> bool:
        return len(self.breakpoints) == 1

    def translation_amount(self) -> Fraction | None:
        return self(0) if self.is_translation() else None

    def __eq__(self, other) -> bool:
        return (isinstance(other, PLCircleLift) and self.breakpoints == other.breakpoints
                and self.values == other.values)

    def __hash__(self) -> int:
        return hash((self.breakpoints, self.values))

    def __repr__(self) -> str:
        if self.is_translation():
            return f"rot({self(0)})"
        pts = ", ".join(f"{t}->{v}" for t, v in zip(self.breakpoints, self.values))
        return f"PL({pts})"

    def to_json(self) -> dict:
        return {"breakpoints": [str(t) for t in self.breakpoints],
                "values": [str(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj: dict) -> PLCircleLift:
        if "rot" in obj:
            return rotation(_q(obj["rot"]))
        return cls(obj["breakpoints"], obj["values"])


def _wrap(x: Fraction, y: Fraction) -> tuple[Fraction, Fraction]:
    n = math.floor(x)
    return x - n, y - n


def _interp(xs: tuple, ys: tuple, s: Fraction) -> Fraction:
    """Value at s in [0, 1) of the periodic-plus-shift PL map with nodes (xs, ys)."""
    i = bisect.bisect_right(xs, s) - 1
    if i < 0:
        x0, y0, x1, y1 = xs[-1] - 1, ys[-1] - 1, xs[0], ys[0]
    elif i == len(xs) - 1:
        x0, y0, x1, y1 = xs[-1], ys[-1], xs[0] + 1, ys[0] + 1
    else:
        x0, y0, x1, y1 = xs[i], ys[i], xs[i + 1], ys[i + 1]
    return y0 + (y1 - y0) * (s - x0) / (x1 - x0)


def _canonical(bps: tuple, vals: tuple) -> tuple[tuple, tuple]:
    """Keep only the genuine kinks; a translation keeps the single node at 0."""
    m = len(bps)
    xs = bps + (bps[0] + 1,)
    ys = vals + (vals[0] + 1,)
    slopes = [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(m)]
    keep = [i for i in range(m) if slopes[i - 1] != slopes[i]]
    if not keep:
        return (Q(0),), (_interp(bps, vals, Q(0)),)
    return tuple(bps[i] for i in keep), tuple(vals[i] for i in keep)


def rotation(alpha) -> PLCircleLift:
    return PLCircleLift([0], [_q(alpha)])


IDENTITY = rotation(0)


def compose(f: PLCircleLift, g: PLCircleLift) -> PLCircleLift:
    """``f o g``: breakpoints of g together with the g-preimages of f's breakpoints."""
    pts = set(g.breakpoints)
    for t in f.breakpoints:
        x = g.inverse_at(t)
        pts.add(x - math.floor(x))
    bps = sorted(pts)
    return PLCircleLift(bps, [f(g(t)) for t in bps])


def inverse(f: PLCircleLift) -> PLCircleLift:
    pts = sorted(_wrap(v, t) for t, v in zip(f.breakpoints, f.values))
    return PLCircleLift([p for p, _ in pts], [q for _, q in pts])


def power(f: PLCircleLift, n: int) -> PLCircleLift:
    base = f if n >= 0 else inverse(f)
    out, n = IDENTITY, abs(n)
    while n:
        if n & 1:
            out = compose(out, base)
        base = compose(base, base)
        n >>= 1
    return out


def normalize(f: PLCircleLift, base=0) -> PLCircleLift:
    """The integer shift of f with ``base <= f(base) < base + 1``."""
    base = _q(base)
    return f.shift(-math.floor(f(base) - base))


def is_normalized(f: PLCircleLift, base=0) -> bool:
    base = _q(base)
    return base <= f(base) < base + 1


# -- the Euler cocycle ---------------------------------------------------------

SAMPLE_POINTS = tuple(Q(k, 10) for k in range(10))


def euler_cocycle(g: PLCircleLift, h: PLCircleLift, base=0) -> int:
    """``c(g, h)`` with ``g~(h~(t)) = (gh)~(t) + c`` for lifts normalized at ``base``."""
    base = _q(base)
    if not (is_normalized(g, base) and is_normalized(h, base)):
        raise ValueError("euler_cocycle expects lifts normalized at the basepoint")
    gh = compose(g, h)
    ngh = normalize(gh, base)
    c = gh(base) - ngh(base)
    for t in SAMPLE_POINTS:
        assert gh(t) - ngh(t) == c
    assert c.denominator == 1
    return int(c)


def product_normalized(g: PLCircleLift, h: PLCircleLift, base=0) -> PLCircleLift:
    return normalize(compose(g, h), base)


def cocycle_defect(g: PLCircleLift, h: PLCircleLift, k: PLCircleLift, base=0) -> int:
    """``c(h,k) - c(gh,k) + c(g,hk) - c(g,h)``; zero for a cocycle."""
    gh, hk = product_normalized(g, h, base), product_normalized(h, k, base)
    return (euler_cocycle(h, k, base) - euler_cocycle(gh, k, base)
            + euler_cocycle(g, hk, base) - euler_cocycle(g, h, base))


def cocycle_identity_check(g: PLCircleLift, h: PLCircleLift, k: PLCircleLift, base=0) -> bool:
    return cocycle_defect(g, h, k, base) == 0


def random_pl(rng: random.Random, pieces: int = 3, den: int = 24) -> PLCircleLift:
    """A normalized PL lift with breakpoints and values on the grid (1/den)Z."""
    bps = sorted(rng.sample(range(den), pieces))
    shift = rng.randrange(den)
    offs = sorted(rng.sample(range(den), pieces))
    f = PLCircleLift([Q(b, den) for b in bps], [Q(shift + o, den) for o in offs])
    return normalize(f)


def random_pl_fixing(rng: random.Random, p, pieces: int = 3, den: int = 24) -> PLCircleLift:
    """A normalized PL lift whose circle map fixes p (conjugate of a map fixing 0)."""
    p = _q(p)
    bps = [0] + sorted(rng.sample(range(1, den), pieces - 1))
    vals = [0] + sorted(rng.sample(range(1, den), pieces - 1))
    f0 = PLCircleLift([Q(b, den) for b in bps], [Q(v, den) for v in vals])
    return normalize(compose(rotation(p), compose(f0, rotation(-p))))


# -- fixed sets ------------------------------------------------------------------

Interval = tuple[Fraction, Fraction]


def level_set(f: PLCircleLift, k=0) -> list[Interval]:
    """``{t in [0, 1) : f(t) - t = k}`` as closed intervals (points have lo == hi)."""
    k = _q(k)
    xs = sorted(set(f.breakpoints) | {Q(0)}) + [Q(1)]
    out: list[Interval] = []
    for x0, x1 in zip(xs, xs[1:]):
        d0, d1 = f(x0) - x0 - k, f(x1) - x1 - k
        if d0 == 0 and d1 == 0:
            piece = (x0, x1)
        elif d0 == 0:
            piece = (x0, x0)
        elif d0 * d1 < 0:
            t = x0 + (x1 - x0) * d0 / (d0 - d1)
            piece = (t, t)
        else:
            continue
        if out and piece[0] <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], piece[1]))
        else:
            out.append(piece)
    return [(lo, hi) for lo, hi in out if lo < 1]


def fixed_set(f: PLCircleLift) -> list[Interval]:
    """Points of [0, 1) fixed by the lift itself (not merely mod 1)."""
    return level_set(f, 0)


def intersect(a: list[Interval], b: list[Interval]) -> list[Interval]:
    out = []
    for lo1, hi1 in a:
        for lo2, hi2 in b:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if lo <= hi:
                out.append((lo, hi))
    return sorted(out)


def least_common_fixed_point(lifts: Sequence[PLCircleLift], start) -> Fraction | None:
    """Least t >= start fixed by every lift, or None if they share no fixed point."""
    start = _q(start)
    common: list[Interval] = [(Q(0), Q(1))]
    for f in lifts:
        common = intersect(common, fixed_set(f))
        if not common:
            return None
    n = math.floor(start)
    for shift in (n, n + 1):
        for lo, hi in common:
            lo, hi = lo + shift, hi + shift
            if hi >= start:
                return max(lo, start)
    return None


# -- fixed points from a primitive of the Euler cocycle --------------------------

class WordLifts:
    """Normalized lifts of the circle maps of words, built letter by letter and cached.

    Letters act right to left: the lift of ``w s`` is ``lift(w) o s``.
    """

    def __init__(self, generators: Sequence[PLCircleLift], base=0):
        self.generators = list(generators)
        self.inverses = [inverse(g) for g in self.generators]
        self.base = _q(base)
        self.cache: dict[ReducedWord, PLCircleLift] = {}

    def __getitem__(self, w: ReducedWord) -> PLCircleLift:
        f = self.cache.get(w)
        if f is None:
            letters = w.letters()
            if not letters:
                f = IDENTITY
            else:
                head = self[freegroup.reduce(letters[:-1], w.rank)]
                i = abs(letters[-1]) - 1
                f = compose(head, self.generators[i] if letters[-1] > 0 else self.inverses[i])
            f = normalize(f, self.base)
            self.cache[w] = f
        return f


def word_lift(generators: Sequence[PLCircleLift], w: ReducedWord, base=0) -> PLCircleLift:
    return WordLifts(generators, base)[w]


def primitive_from_fixed_point(generators: Sequence[PLCircleLift], p) -> Callable[[ReducedWord], int]:
    """``phi(w) = p - w~(p)``: the adjustment making every lift fix p.

    Requires p to be fixed mod 1 by each generator; then c = delta phi and
    |phi| <= 1.
    """
    p = _q(p)
    for i, g in enumerate(generators):
        if (g(p) - p).denominator != 1:
            raise ValueError(f"generator {i} does not fix {p} on the circle")
    lifts = WordLifts(generators)

    def phi(w: ReducedWord) -> int:
        return int(p - lifts[w](p))
    phi.lifts = lifts  # type: ignore[attr-defined]
    return phi


@dataclass
class FixedPointReport:
    verdict: str  # fixed | no_common_fixed_point | not_primitive | bound_violation
    radius: int
    point: Fraction | None = None
    sup: Fraction | None = None
    sampled_max: Fraction | None = None
    witness: object = None
    words: int = 0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        s = lambda v: None if v is None else str(v)  # noqa: E731
        return {"check": "fixed_point_from_primitive", "verdict": self.verdict,
                "parameters": {"radius": self.radius, "words": self.words},
                "point": s(self.point), "sup": s(self.sup), "sampled_max": s(self.sampled_max),
                "witness": self.witness, "notes": self.notes}


def fixed_point_from_primitive(generators: Sequence[PLCircleLift],
                               phi: Callable[[ReducedWord], int] | dict,
                               R: int = 8, pair_radius: int | None = None) -> FixedPointReport:
    """Adjust lifts by a primitive phi of c and locate the sup of the orbit of 0.

    Words of length <= R are sampled.  The cocycle identity
    ``c(u, v) = phi(uv) - phi(u) - phi(v)`` is checked for |u|, |v| <=
    pair_radius (default R // 2).  The sampled orbit max is then pushed up
    to the least point fixed by every adjusted generator; every common fixed
    point >= 0 bounds the whole orbit, so that point is its exact supremum.
    """
    k = len(generators)
    phi_fn = phi if callable(phi) else (lambda w: phi[str(w)])
    pair_radius = R // 2 if pair_radius is None else pair_radius
    if k == 0:
        return FixedPointReport("fixed", R, Q(0), Q(0), Q(0), None, 1,
                                ["trivial group: sup of {0} is 0"])
    words = freegroup.ball(k, R)
    lifts = getattr(phi, "lifts", None)
    if not isinstance(lifts, WordLifts) or lifts.generators != list(generators):
        lifts = WordLifts(generators)
    vals = {w: int(phi_fn(w)) for w in words}
    bound = 1 + max(abs(v) for v in vals.values())
    report = FixedPointReport("fixed", R, words=len(words))
    report.notes.append(f"certificate covers words of length <= {R}")

    small = [w for w in words if len(w) <= pair_radius]
    for u in small:
        for v in small:
            uv = freegroup.multiply(u, v)
            c = euler_cocycle(lifts[u], lifts[v])
            if c != vals[uv] - vals[u] - vals[v]:
                report.verdict = "not_primitive"
                report.witness = {"u": str(u), "v": str(v), "c": c,
                                  "delta_phi": vals[uv] - vals[u] - vals[v]}
                return report

    adjusted = {w: lifts[w].shift(vals[w]) for w in words}
    orbit = []
    for w, f in adjusted.items():
        x = f(0)
        if abs(x) > bound:
            report.verdict = "bound_violation"
            report.witness = {"word": str(w), "value": str(x), "bound": bound}
            return report
        orbit.append(x)
    report.sampled_max = max(orbit)
    gens = [adjusted[ReducedWord.generator(i, k)] for i in range(k)]
    s = least_common_fixed_point(gens, report.sampled_max)
    if s is None:
        report.verdict = "no_common_fixed_point"
        report.notes.append("adjusted generator lifts share no fixed point, so the orbit of 0 is unbounded")
        return report
    for w, f in adjusted.items():
        assert f(s) == s, (w, s)
    report.sup = s
    report.point = s - math.floor(s)
    return report


# -- rotation numbers ----------------------------------------------------------

@dataclass
class RotationReport:
    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None
    orbit: list[Fraction] | None = None

    def to_json(self) -> dict:
        return {"check": "rotation_number", "interval": [str(self.lo), str(self.hi)],
                "exact": None if self.exact is None else str(self.exact),
                "orbit": None if self.orbit is None else [str(x) for x in self.orbit]}


def displacement_range(f: PLCircleLift) -> tuple[Fraction, Fraction]:
    """Exact min and max of ``f(t) - t``; attained at breakpoints."""
    ds = [v - t for t, v in zip(f.breakpoints, f.values)]
    return min(ds), max(ds)


def rotation_number(f: PLCircleLift, N: int = 64, period_cap: int = 12) -> RotationReport:
    """An interval of width < 1/N containing rho(f), exact when a short periodic orbit exists.

    ``rho(f^N) = N rho(f)`` lies between the least and greatest displacement
    of f^N, whose spread is below 1.  A solution of ``f^q(t) = t + p`` with
    ``q <= period_cap`` gives ``rho = p/q`` and the finite orbit of t.
    """
    if N < 1:
        raise ValueError("N must be positive")
    lo, hi = displacement_range(power(f, N))
    report = RotationReport(lo / N, hi / N)
    fq = IDENTITY
    for q in range(1, period_cap + 1):
        fq = compose(f, fq)
        dlo, dhi = displacement_range(fq)
        p = math.ceil(dlo)
        if p <= dhi:
            t = level_set(fq, p)[0][0]
            orbit, x = [], t
            for _ in range(q):
                orbit.append(x - math.floor(x))
                x = f(x)
            report.exact = Q(p, q)
            report.orbit = sorted(orbit)
            break
    return report
