"""Reducing SL(2) matrices to the identity by row operations.

Over Z the Euclidean algorithm needs an unbounded number of operations.
Over Z[1/p], granting the Artin-type primitive-root search, five suffice.

Matrices are stored by rows, ``((a, c), (b, d))``, so ``a`` and ``b`` form the
first column.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Callable, Iterable, Sequence


class PreconditionError(ValueError):
    pass


class NotFoundWithinCap(RuntimeError):
    pass


# -- Z[1/p] -----------------------------------------------------------------

@total_ordering
def _valuation(n: int, p: int) -> int:
    """Exponent of p in a nonzero integer n."""
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    while n % p == 0:
        k, pk = 1, p
        while n % (pk * pk) == 0:
            pk, k = pk * pk, 2 * k
        n, v = n // pk, v + k
    return v


def _shift(n: int, p: int, k: int) -> int:
    """n * p^k, exact; k < 0 requires p^-k | n.  Shifts when p = 2."""
    if p == 2:
        return n << k if k >= 0 else n >> -k
    return n * p ** k if k >= 0 else n // p ** -k


class PInv:
    """Exact element ``num / p**pexp`` of Z[1/p].

    Canonical: when ``pexp > 0``, p does not divide ``num``; zero has
    ``pexp == 0``.
    """

    __slots__ = ("num", "pexp", "p")

    def __init__(self, num: int, pexp: int = 0, p: int = 2):
        if p < 2:
            raise ValueError("p must be a prime >= 2")
        if pexp < 0:
            num, pexp = _shift(num, p, -pexp), 0
        if num == 0:
            pexp = 0
        elif pexp > 0:
            v = min(_valuation(num, p), pexp)
            num, pexp = _shift(num, p, -v), pexp - v
        self.num, self.pexp, self.p = num, pexp, p

    @classmethod
    def coerce(cls, v, p: int) -> PInv:
        if isinstance(v, PInv):
            if v.p != p:
                raise ValueError(f"mixing Z[1/{v.p}] and Z[1/{p}]")
            return v
        if isinstance(v, int):
            return cls(v, 0, p)
        if isinstance(v, Fraction):
            e = _valuation(v.denominator, p)
            if v.denominator != p ** e:
                raise ValueError(f"{v} is not in Z[1/{p}]")
            return cls(v.numerator, e, p)
        if isinstance(v, str):
            return parse_scalar(v, p)
        raise TypeError(f"cannot coerce {v!r}")

    def _other(self, o) -> PInv:
        return PInv.coerce(o, self.p)

    def __add__(self, o):
        o = self._other(o)
        e = max(self.pexp, o.pexp)
        return PInv(_shift(self.num, self.p, e - self.pexp) + _shift(o.num, self.p, e - o.pexp), e, self.p)

    __radd__ = __add__

    def __neg__(self):
        return PInv(-self.num, self.pexp, self.p)

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        o = self._other(o)
        return PInv(self.num * o.num, self.pexp + o.pexp, self.p)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        n = abs(self.num)
        return n != 0 and n == self.p ** _valuation(n, self.p)

    def unit_inverse(self) -> PInv:
        """Inverse of a unit ``±p^k``."""
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of Z[1/{self.p}]")
        k = _valuation(self.num, self.p)
        sign = 1 if self.num > 0 else -1
        # value = sign p^(k - pexp)
        return PInv(sign, k - self.pexp, self.p) if k >= self.pexp else PInv(sign * self.p ** (self.pexp - k), 0, self.p)

    def __truediv__(self, o):
        return self * self._other(o).unit_inverse()

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.p ** self.pexp)

    def is_integer(self) -> bool:
        return self.pexp == 0

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.to_fraction() == o
        if isinstance(o, PInv):
            return (self.num, self.pexp, self.p) == (o.num, o.pexp, o.p)
        return NotImplemented

    def __lt__(self, o):
        return self.to_fraction() < PInv.coerce(o, self.p).to_fraction()

    def __hash__(self):
        return hash(self.to_fraction())

    def __int__(self):
        if self.pexp:
            raise ValueError(f"{self} is not an integer")
        return self.num

    def __str__(self):
        if self.pexp == 0:
            return str(self.num)
        return f"{self.num}/{self.p}^{self.pexp}"

    def __repr__(self):
        return f"PInv({self.num}, {self.pexp}, p={self.p})"


def parse_scalar(text: str, p: int) -> PInv:
    """``"7"``, ``"-3/2^4"`` or ``"5/8"``."""
    s = str(text).strip().replace(" ", "")
    if "/" not in s:
        return PInv(int(s), 0, p)
    num, den = s.split("/", 1)
    if "^" in den:
        base, e = den.split("^", 1)
        if int(base) != p:
            raise ValueError(f"denominator base {base} is not p={p}")
        return PInv(int(num), int(e), p)
    return PInv.coerce(Fraction(int(num), int(den)), p)


# -- matrices and row operations ---------------------------------------------

Mat2 = tuple[tuple, tuple]


def det(m: Mat2):
    (a, c), (b, d) = m
    return a * d - c * b


def matmul2(m: Mat2, n: Mat2) -> Mat2:
    return ((m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
            (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]))


def is_identity(m: Mat2) -> bool:
    return m[0][0] == 1 and m[0][1] == 0 and m[1][0] == 0 and m[1][1] == 1


@dataclass(frozen=True)
class RowOp:
    """Add ``coeff`` times row ``src`` to row ``dst``."""
    src: int
    dst: int
    coeff: object

    def __post_init__(self):
        if {self.src, self.dst} != {0, 1}:
            raise ValueError("row operation needs two distinct rows 0 and 1")

    def apply(self, m: Mat2) -> Mat2:
        rows = [list(m[0]), list(m[1])]
        rows[self.dst] = [x + self.coeff * y for x, y in zip(rows[self.dst], rows[self.src])]
        return (tuple(rows[0]), tuple(rows[1]))

    def inverse(self) -> RowOp:
        return RowOp(self.src, self.dst, -self.coeff)

    def matrix(self, one=1, zero=0) -> Mat2:
        m = [[one, zero], [zero, one]]
        m[self.dst][self.src] = self.coeff
        return (tuple(m[0]), tuple(m[1]))

    def __str__(self):
        return f"R{self.dst + 1} += ({self.coeff}) R{self.src + 1}"


def apply_ops(m: Mat2, ops: Iterable[RowOp]) -> list[Mat2]:
    """Intermediates after each operation (the input itself is not included)."""
    out = []
    for op in ops:
        m = op.apply(m)
        out.append(m)
    return out


def reconstruct(ops: Sequence[RowOp], one=1, zero=0) -> Mat2:
    """Undo ``ops`` starting from the identity, recovering the reduced matrix."""
    m: Mat2 = ((one, zero), (zero, one))
    for op in reversed(ops):
        m = op.inverse().apply(m)
    return m


def as_int_matrix(m: Sequence[Sequence[int]]) -> Mat2:
    if len(m) != 2 or any(len(r) != 2 for r in m):
        raise PreconditionError("expected a 2x2 matrix")
    return ((int(m[0][0]), int(m[0][1])), (int(m[1][0]), int(m[1][1])))


def euclid_reduce(m: Sequence[Sequence[int]]) -> list[RowOp]:
    """Integer row operations taking an SL(2, Z) matrix to the identity.

    Repeatedly subtracts the largest whole multiple of the smaller first-column
    entry from the larger, then fixes signs and clears the top-right entry.
    """
    mat = as_int_matrix(m)
    if det(mat) != 1:
        raise PreconditionError(f"determinant is {det(mat)}, not 1")
    ops: list[RowOp] = []

    def do(src, dst, coeff):
        nonlocal mat
        if coeff:
            op = RowOp(src, dst, coeff)
            ops.append(op)
            mat = op.apply(mat)

    while mat[0][0] and mat[1][0]:
        a, b = mat[0][0], mat[1][0]
        if abs(b) <= abs(a):
            do(1, 0, -_trunc_div(a, b))
        else:
            do(0, 1, -_trunc_div(b, a))
    a, b = mat[0][0], mat[1][0]
    if a == 0:  # b = ±1
        do(1, 0, b)
        do(0, 1, -mat[1][0])
    elif a == -1:
        do(0, 1, -1)
        do(1, 0, 2)
        do(0, 1, -1)
    do(1, 0, -mat[0][1])
    assert is_identity(mat), mat
    return ops


def _trunc_div(x: int, y: int) -> int:
    q = abs(x) // abs(y)
    return q if (x >= 0) == (y >= 0) else -q


# -- primitive roots and the progression search ------------------------------

def is_prime_trial(n: int) -> bool:
    """Trial division; slow but obviously correct."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    # Miller-Rabin with these bases is deterministic below 3.3e24
    if n < 2:
        return False
    for f in _MR_BASES:
        if n % f == 0:
            return n == f
    if n >= 3_317_044_064_679_887_385_961_981:
        raise ValueError(f"{n} is beyond the deterministic primality range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d, s = d // 2, s + 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def multiplicative_order(r: int, q: int) -> int:
    r %= q
    if r == 0:
        raise ValueError("r is divisible by q")
    x, k = r, 1
    while x != 1:
        x = x * r % q
        k += 1
    return k


def power_list(r: int, q: int) -> list[int]:
    """``r, r^2, ..., r^(q-1)`` reduced mod q."""
    return [pow(r, k, q) for k in range(1, q)]


def prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _is_primitive(r: int, q: int) -> bool:
    # r has order q-1 iff r^((q-1)/f) != 1 for every prime f | q-1;
    # the quadratic-residue test is cheap and rejects half the candidates
    if q > 2 and pow(r, (q - 1) // 2, q) == 1:
        return False
    return all(pow(r, (q - 1) // f, q) != 1 for f in prime_factors(q - 1))


def primitive_root_check(r: int, q: int) -> bool:
    if not is_prime(q):
        raise PreconditionError(f"{q} is not prime")
    if r % q == 0:
        raise PreconditionError(f"{q} divides {r}")
    return _is_primitive(r, q)


def is_perfect_power(r: int) -> bool:
    """True if ``r = m**e`` for integers m and e >= 2."""
    if r in (0, 1):
        return True
    n = abs(r)
    for e in range(2, n.bit_length() + 1):
        if r < 0 and e % 2 == 0:
            continue
        root = round(n ** (1 / e))
        for cand in (root - 1, root, root + 1):
            if cand > 1 and cand ** e == n:
                return True
    return False


@dataclass(frozen=True)
class ArtinHit:
    q: int
    k: int


def artin_instance(a: int, b: int, r: int, cap: int) -> ArtinHit:
    """Smallest |k| <= cap with q = a + k b a prime having r as a primitive root.

    For each k = 0, 1, 2, ... the value a + k b is tried first; when it is at
    most 1 the mirrored value a - k b is tried instead.
    """
    if math.gcd(a, b) != 1:
        raise PreconditionError(f"gcd({a}, {b}) != 1")
    if r == -1 or is_perfect_power(r):
        raise PreconditionError(f"{r} is -1 or a perfect power")
    for k in range(cap + 1):
        for kk in ((k,) if a + k * b > 1 else (k, -k)):
            q = a + kk * b
            if q > 1 and r % q and is_prime(q) and _is_primitive(r, q):
                return ArtinHit(q, kk)
    raise NotFoundWithinCap(f"no prime in {a} + k*{b} with primitive root {r} for |k| <= {cap}")


def discrete_log_scan(p: int, target: int, q: int) -> int:
    """Least l >= 1 with p^l = target (mod q), by scanning powers."""
    target %= q
    x = 1
    for l in range(1, q):
        x = x * p % q
        if x == target:
            return l
    raise ValueError(f"{target} is not a power of {p} mod {q}")


def discrete_log(p: int, target: int, q: int) -> int:
    """Least l >= 1 with p^l = target (mod q), by baby-step giant-step."""
    target %= q
    if target == 0:
        raise ValueError(f"{target} is not a power of {p} mod {q}")
    m = math.isqrt(q - 1) + 1
    baby: dict[int, int] = {}
    x = 1
    for j in range(1, m + 1):
        x = x * p % q
        baby.setdefault(x, j)
    step = pow(p, -m, q)
    y = target
    for i in range(m + 1):
        # y = target * p^(-im); a hit p^j = y gives l = im + j
        if y in baby:
            return i * m + baby[y]
        y = y * step % q
    raise ValueError(f"{target} is not a power of {p} mod {q}")


# -- bounded reduction over Z[1/p] -------------------------------------------

@dataclass
class BoundedReduction:
    p: int
    ops: list[RowOp]
    steps: list[str]
    intermediates: list[Mat2]
    q: int | None = None
    k: int | None = None
    ell: int | None = None
    fast_path: str | None = None
    # p-power in the denominator of the step-1 coefficient (0 when it is an integer)
    step1_denominator: int = 0

    def trace(self) -> list[dict]:
        return [{"step": s, "op": str(op), "intermediate": [[str(v) for v in row] for row in m]}
                for s, op, m in zip(self.steps, self.ops, self.intermediates)]


def to_pinv_matrix(m, p: int) -> Mat2:
    return tuple(tuple(PInv.coerce(v, p) for v in row) for row in m)  # type: ignore[return-value]


def bounded_reduce(m, p: int = 2, cap: int = 10**4) -> BoundedReduction:
    """Reduce an integer SL(2) matrix to the identity with at most five Z[1/p] operations.

    Steps: (1) R1 += k R2 making the top-left entry a prime q with p
    primitive mod q; (2) R2 += k' R1 making the bottom-left entry p^l;
    (3) R1 -= (q-1) p^-l R2 making the top-left entry 1; (4) R2 -= p^l R1;
    (5) R1 -= c R2.
    """
    if not is_prime(p):
        raise PreconditionError(f"p = {p} is not prime")
    mat = to_pinv_matrix(m, p)
    if det(mat) != 1:
        raise PreconditionError(f"determinant is {det(mat)}, not 1")
    if not all(v.is_integer() for row in mat for v in row):
        raise PreconditionError("entries must be integers")
    red = BoundedReduction(p, [], [], [])

    def do(label, src, dst, coeff):
        nonlocal mat
        op = RowOp(src, dst, PInv.coerce(coeff, p))
        mat = op.apply(mat)
        red.ops.append(op)
        red.steps.append(label)
        red.intermediates.append(mat)

    if is_identity(mat):
        red.fast_path = "identity"
        return red
    a, b = int(mat[0][0]), int(mat[1][0])
    if b == 0:
        # a = d = ±1
        red.fast_path = "lower-left zero"
        if a == -1:
            do("pre", 0, 1, 1)
            do("pre", 1, 0, -2)
            do("pre", 0, 1, -mat[1][0])
        do("clear top-right", 1, 0, -mat[0][1])
        assert is_identity(mat)
        return red

    try:
        hit = artin_instance(a, b, p, cap)
        k1 = PInv(hit.k, 0, p)
    except NotFoundWithinCap:
        # Every prime of a + kZ b can be a residue class where p is a square
        # (p = 2, 8 | b, a = +-1 mod 8).  Dividing b by its p-part moves the
        # search to a + k b' with a Z[1/p] coefficient k/p^v.
        v, b1 = 0, b
        while b1 % p == 0:
            v, b1 = v + 1, b1 // p
        if v == 0:
            raise
        hit = artin_instance(a, b1, p, cap)
        k1 = PInv(hit.k, v, p)
        red.step1_denominator = v
    q = hit.q
    red.q, red.k = q, hit.k
    do("1: top-left -> q", 1, 0, k1)
    ell = discrete_log(p, b, q)
    red.ell = ell
    k2 = (p ** ell - b) // q
    assert p ** ell == b + k2 * q
    do("2: bottom-left -> p^l", 0, 1, k2)
    do("3: top-left -> 1", 1, 0, -(q - 1) * PInv(1, ell, p))
    do("4: clear bottom-left", 0, 1, -mat[1][0])
    do("5: clear top-right", 1, 0, -mat[0][1])
    assert is_identity(mat), mat
    return red


# -- conjugation by the diagonal matrix diag(p, 1/p) ---------------------------

def diag(p: int, n: int) -> Mat2:
    return ((PInv(1, 0, p) * _ppow(p, n), PInv(0, 0, p)), (PInv(0, 0, p), _ppow(p, -n)))


def _ppow(p: int, n: int) -> PInv:
    return PInv(p ** n, 0, p) if n >= 0 else PInv(1, -n, p)


def diag_conjugation(u, n: int, p: int, lower: bool = False) -> Mat2:
    """``diag(p,1/p)^n  E  diag(p,1/p)^-n`` for E upper ``[[1,u],[0,1]]`` or lower ``[[1,0],[u,1]]``."""
    u = PInv.coerce(u, p)
    one, zero = PInv(1, 0, p), PInv(0, 0, p)
    if lower:
        return ((one, zero), (_ppow(p, -2 * n) * u, one))
    return ((one, _ppow(p, 2 * n) * u), (zero, one))


def diag_conjugation_product(u, n: int, p: int, lower: bool = False) -> Mat2:
    """The same matrix computed as an explicit triple product."""
    u = PInv.coerce(u, p)
    one, zero = PInv(1, 0, p), PInv(0, 0, p)
    e = ((one, zero), (u, one)) if lower else ((one, u), (zero, one))
    return matmul2(matmul2(diag(p, n), e), diag(p, -n))


# -- statistics ---------------------------------------------------------------

def carter_keller_bound(n: int) -> int:
    """Row-operation bound (3n^2 - n)/2 + 36 for SL(n, Z), n >= 3."""
    return (3 * n * n - n) // 2 + 36


def mat_power(m: Mat2, n: int) -> Mat2:
    out: Mat2 = ((1, 0), (0, 1))
    for _ in range(n):
        out = matmul2(out, m)
    return out


def random_sl2z(rng: random.Random, steps: int = 8, bound: int = 9) -> Mat2:
    """Random product of elementary integer matrices."""
    m: Mat2 = ((1, 0), (0, 1))
    for i in range(steps):
        t = rng.randint(-bound, bound)
        m = RowOp(i % 2, 1 - i % 2, t).apply(m)
    return m


def elementary_word_length_stats(matrices: Sequence[Mat2], p: int = 2, cap: int = 10**4) -> dict:
    euclid = [len(euclid_reduce(m)) for m in matrices]
    bounded, not_found, fractional = [], 0, 0
    for m in matrices:
        try:
            red = bounded_reduce(m, p, cap)
            bounded.append(len(red.ops))
            fractional += red.step1_denominator > 0
        except NotFoundWithinCap:
            not_found += 1
    return {
        "samples": len(matrices),
        "euclid_ops": euclid,
        "euclid_max": max(euclid, default=0),
        "bounded_ops_max": max(bounded, default=0),
        "bounded_not_found": not_found,
        "bounded_fractional_step1": fractional,
        "bounded_constant": 5,
        "carter_keller_n3": carter_keller_bound(3),
    }


# -- orbits under bounded generation ------------------------------------------

@dataclass
class OrbitReport:
    ok: bool
    bound: object
    worst: object
    witness: tuple | None
    checked: int


def orbit_bound_check(factors: Sequence[tuple[Sequence, object]], act: Callable, dist: Callable,
                      x, samples: int = 1000, seed: int = 0) -> OrbitReport:
    """Check that products h1 h2 ... hn (hi from factor i) move x by at most r1 + ... + rn.

    ``factors`` pairs a finite sample of each subgroup with its orbit radius;
    each radius is first checked against its own sample.
    """
    rng = random.Random(seed)
    for elems, r in factors:
        for h in elems:
            if dist(act(h, x), x) > r:
                return OrbitReport(False, r, dist(act(h, x), x), (h,), 0)
    bound = sum((r for _, r in factors), start=0 * factors[0][1]) if factors else 0
    worst, witness = None, None
    for n in range(samples):
        chosen = [rng.choice(list(elems)) for elems, _ in factors]
        y = x
        for h in reversed(chosen):
            y = act(h, y)
        d = dist(y, x)
        if worst is None or d > worst:
            worst, witness = d, tuple(chosen)
        if d > bound:
            return OrbitReport(False, bound, d, tuple(chosen), n + 1)
    return OrbitReport(True, bound, worst, witness, samples)
