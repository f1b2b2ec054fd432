"""Left-invariant orders: positive-cone search, axiom checks, extensions, and
the six-Heisenberg-copies argument for SL(3, Z).

Comparison oracles return -1, 0 or 1 (``g < h``, ``g == h``, ``g > h``).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .groups import GroupBackend, IntMatrix, mat_identity, mat_inverse, mat_mul

Compare = Callable[[Hashable, Hashable], int]


# -- positive cone search ---------------------------------------------------

@dataclass
class ConeState:
    """Elements marked positive, each with the product that produced it.

    ``parents[g]`` is None for an assumed element and ``(p, q)`` when
    ``g = p * q`` was derived by closure.
    """
    parents: dict = field(default_factory=dict)
    contradiction: list | None = None

    @property
    def positives(self) -> frozenset:
        return frozenset(self.parents)

    def copy(self) -> ConeState:
        return ConeState(dict(self.parents), None)

    def derivation(self, target) -> list[tuple]:
        """Product steps (p, q, pq) producing ``target`` from assumptions."""
        steps: list[tuple] = []
        seen = set()

        def visit(g):
            if g in seen:
                return
            seen.add(g)
            par = self.parents[g]
            if par is None:
                return
            p, q = par
            visit(p)
            visit(q)
            steps.append((p, q, g))

        visit(target)
        return steps


@dataclass
class Orderable:
    radius: int
    cone: frozenset
    nodes: int
    verdict: str = "orderable_up_to_radius"


@dataclass
class NotLeftOrderable:
    radius: int
    certificate: dict
    nodes: int
    verdict: str = "not_left_orderable"


@dataclass
class Inconclusive:
    radius: int
    reason: str
    nodes: int
    verdict: str = "inconclusive"


class _Budget(Exception):
    pass


def _add_positive(backend: GroupBackend, state: ConeState, g, region: dict) -> bool:
    """Add ``g`` and close under products inside ``region``.  False on contradiction."""
    e = backend.identity()
    if g == e:
        state.contradiction = []
        return False
    ginv = backend.invert(g)
    if g in state.parents:
        return True
    state.parents[g] = None
    if ginv in state.parents:
        state.contradiction = state.derivation(ginv) + [(g, ginv, e)]
        return False
    work = [g]
    while work:
        u = work.pop()
        for v in list(state.parents):
            for p, q in ((u, v), (v, u)):
                w = backend.multiply(p, q)
                if w == e:
                    state.contradiction = _merge(state.derivation(p), state.derivation(q)) + [(p, q, e)]
                    return False
                if w not in region or w in state.parents:
                    continue
                state.parents[w] = (p, q)
                winv = backend.invert(w)
                if winv in state.parents:
                    state.contradiction = (_merge(state.derivation(w), state.derivation(winv))
                                           + [(w, winv, e)])
                    return False
                work.append(w)
    return True


def _merge(a: list, b: list) -> list:
    out = list(a)
    have = {s[2] for s in a}
    for s in b:
        if s[2] not in have:
            out.append(s)
            have.add(s[2])
    return out


def cone_search(backend: GroupBackend, generators: Sequence, radius: int,
                cap: int = 10**5, ball_cap: int = 10**5):
    """Search for a sign assignment on the radius-R ball whose product closure avoids e.

    Returns :class:`Orderable` (a consistent cone, valid only up to the
    radius), :class:`NotLeftOrderable` with a refutation tree covering every
    sign assignment, or :class:`Inconclusive` when the node budget runs out.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    if not generators:
        raise ValueError("need at least one generator")
    e = backend.identity()
    try:
        region = backend.ball(generators, radius, cap=ball_cap)
    except RuntimeError as exc:
        return Inconclusive(radius, str(exc), 0)

    pairs = []
    seen = set()
    for g in region:  # insertion order is by word length
        if g == e or g in seen:
            continue
        ginv = backend.invert(g)
        seen.update((g, ginv))
        pairs.append((g, ginv))

    nodes = 0

    def dfs(i: int, state: ConeState):
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise _Budget
        while i < len(pairs) and (pairs[i][0] in state.parents or pairs[i][1] in state.parents):
            i += 1
        if i == len(pairs):
            return state, None
        g, ginv = pairs[i]
        branches = {}
        for sign, choice in (("+", g), ("-", ginv)):
            child = state.copy()
            if not _add_positive(backend, child, choice, region):
                branches[sign] = {"derivation": child.contradiction}
                continue
            found, sub = dfs(i + 1, child)
            if found is not None:
                return found, None
            branches[sign] = sub
        return None, {"element": g, "+": branches["+"], "-": branches["-"]}

    try:
        found, tree = dfs(0, ConeState())
    except _Budget:
        return Inconclusive(radius, f"node budget {cap} exhausted", nodes)
    if found is not None:
        return Orderable(radius, found.positives, nodes)
    return NotLeftOrderable(radius, tree, nodes)


def check_certificate(backend: GroupBackend, tree: dict, assumed: tuple = ()) -> bool:
    """Replay a refutation tree: every leaf must derive e from its branch's assumptions."""
    e = backend.identity()
    if "derivation" in tree:
        known = set(assumed)
        steps = tree["derivation"]
        if not steps:
            return e in known
        for p, q, w in steps:
            if p not in known or q not in known:
                return False
            if backend.multiply(p, q) != w:
                return False
            known.add(w)
        return steps[-1][2] == e
    g = tree["element"]
    return (check_certificate(backend, tree["+"], assumed + (g,))
            and check_certificate(backend, tree["-"], assumed + (backend.invert(g),)))


def certificate_to_json(backend: GroupBackend, tree: dict) -> dict:
    fmt = backend.format
    if "derivation" in tree:
        return {"derivation": [[fmt(p), fmt(q), fmt(w)] for p, q, w in tree["derivation"]]}
    return {"element": fmt(tree["element"]),
            "+": certificate_to_json(backend, tree["+"]),
            "-": certificate_to_json(backend, tree["-"])}


def cone_compare(backend: GroupBackend, cone: frozenset) -> Compare:
    """Comparison oracle ``g < h iff g^-1 h in cone`` (partial outside the cone's reach)."""
    def cmp(g, h):
        d = backend.multiply(backend.invert(g), h)
        if backend.is_identity(d):
            return 0
        if d in cone:
            return -1
        if backend.invert(d) in cone:
            return 1
        raise KeyError("pair not decided by the cone")
    return cmp


# -- axiom checks -----------------------------------------------------------

@dataclass
class AxiomReport:
    ok: bool
    checked: int
    violation: tuple[str, tuple] | None = None


def order_axiom_check(backend: GroupBackend, compare: Compare, samples: Sequence,
                      triples: int = 10**4, seed: int = 0) -> AxiomReport:
    """Totality, antisymmetry, transitivity and left-invariance on random triples."""
    rng = random.Random(seed)
    samples = list(samples)
    for n in range(triples):
        g, h, k = rng.choice(samples), rng.choice(samples), rng.choice(samples)
        gh = compare(g, h)
        if gh not in (-1, 0, 1) or (gh == 0) != (g == h):
            return AxiomReport(False, n, ("totality", (g, h)))
        if compare(h, g) != -gh:
            return AxiomReport(False, n, ("antisymmetry", (g, h)))
        if gh < 0 and compare(h, k) < 0 and compare(g, k) >= 0:
            return AxiomReport(False, n, ("transitivity", (g, h, k)))
        if compare(backend.multiply(k, g), backend.multiply(k, h)) != gh:
            return AxiomReport(False, n, ("left_invariance", (k, g, h)))
    return AxiomReport(True, triples)


def extension_order(order_n: Compare, quotient_order: Compare,
                    projection: Callable, backend: GroupBackend) -> Compare:
    """Order on G from orders on a normal subgroup N and on G/N.

    ``g < h`` iff ``gN < hN``, or ``gN = hN`` and ``h^-1 g < e`` in N.
    ``projection`` maps G onto (a faithful model of) G/N.
    """
    e = backend.identity()

    def cmp(g, h):
        pg, ph = projection(g), projection(h)
        if pg != ph:
            return quotient_order(pg, ph)
        return order_n(backend.multiply(backend.invert(h), g), e)

    return cmp


# -- the SL(3, Z) argument --------------------------------------------------

def _ll(a: int, b: int) -> dict:
    return {"ll": [a, b]}


def _wrap(k: int) -> int:
    return (k - 1) % 6 + 1


def lemma_disjunction(k: int) -> dict:
    """For the Heisenberg copy <k-1, k, k+1>: k << k-1 or k << k+1."""
    k = _wrap(k)
    return {"or": [[k, _wrap(k - 1)], [k, _wrap(k + 1)]], "triple": [_wrap(k - 1), k, _wrap(k + 1)]}


@dataclass
class DerivationTrace:
    hypothesis: list[int]
    steps: list[dict]

    @property
    def lemma_applications(self) -> int:
        return sum(1 for s in self.steps if s["rule"] == "lemma")

    @property
    def contradiction(self) -> list[int] | None:
        last = self.steps[-1]["conclusion"] if self.steps else None
        if last and "ll" in last and last["ll"][0] == last["ll"][1]:
            return last["ll"]
        return None

    def to_json(self) -> dict:
        return {"hypothesis": self.hypothesis, "steps": self.steps}

    @classmethod
    def from_json(cls, data: dict) -> DerivationTrace:
        return cls(list(data["hypothesis"]), list(data["steps"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


class TraceDidNotClose(RuntimeError):
    pass


def sl3_contradiction(initial: tuple[int, int]) -> DerivationTrace:
    """Forward-chain the << facts from one branch of the lemma for <1, 2, 3>.

    Rules: ``lemma`` (instantiate the disjunction for a triple),
    ``asymmetry-pruning`` (a << b rules out b << a, leaving the other
    disjunct), ``transitivity``.  Stops at a fact i << i and returns only the
    steps that fact depends on.
    """
    first = lemma_disjunction(2)
    if list(initial) not in first["or"]:
        raise ValueError(f"initial fact must be one of {first['or']}")

    steps: list[dict] = []
    facts: dict[tuple[int, int], int] = {}  # fact -> step id ("hyp" is -1)

    def add(rule, premises, conclusion):
        steps.append({"id": len(steps), "rule": rule, "premises": premises, "conclusion": conclusion})
        return len(steps) - 1

    lemma_ids = {2: add("lemma", [], first)}
    facts[tuple(initial)] = -1
    pending = [tuple(initial)]
    goal = None

    while goal is None:
        # transitivity closure over the current facts
        while pending and goal is None:
            new = pending.pop(0)
            for old in list(facts):
                for (a, b), (c, d) in ((old, new), (new, old)):
                    if b == c and (a, d) not in facts:
                        sid = add("transitivity", [facts[(a, b)], facts[(c, d)]], _ll(a, d))
                        facts[(a, d)] = sid
                        pending.append((a, d))
                        if a == d:
                            goal = (a, d)
                            break
                if goal:
                    break
        if goal:
            break
        progressed = False
        for k in range(1, 7):
            disj = lemma_disjunction(k)
            for i, (p, q) in enumerate(disj["or"]):
                other = tuple(disj["or"][1 - i])
                if (q, p) in facts and other not in facts:
                    if k not in lemma_ids:
                        lemma_ids[k] = add("lemma", [], disj)
                    sid = add("asymmetry-pruning", [lemma_ids[k], facts[(q, p)]], _ll(*other))
                    facts[other] = sid
                    pending.append(other)
                    progressed = True
                    if other[0] == other[1]:
                        goal = other
                    break
            if progressed:
                break
        if not progressed and not pending:
            raise TraceDidNotClose(f"no rule applies; facts so far {sorted(facts)}")

    # keep the dependency cone of the contradiction, renumbered
    needed = set()
    stack = [facts[goal]]
    while stack:
        sid = stack.pop()
        if sid < 0 or sid in needed:
            continue
        needed.add(sid)
        stack.extend(steps[sid]["premises"])
    needed.add(lemma_ids[2])  # the case split itself
    order = sorted(needed)
    renum = {old: new for new, old in enumerate(order)}
    renum[-1] = "hyp"
    out = []
    for old in order:
        s = steps[old]
        out.append({"id": renum[old], "rule": s["rule"],
                    "premises": [renum[p] for p in s["premises"]],
                    "conclusion": s["conclusion"]})
    return DerivationTrace(list(initial), out)


def check_trace(trace: DerivationTrace | dict) -> tuple[bool, str]:
    """Independent replay of a trace using only the three rules."""
    if isinstance(trace, dict):
        trace = DerivationTrace.from_json(trace)
    concl: dict = {"hyp": {"ll": list(trace.hypothesis)}}
    valid_lemmas = {json.dumps(sorted([[k, (k - 2) % 6 + 1], [k, k % 6 + 1]])) for k in range(1, 7)}
    hyp_ok = False
    for n, step in enumerate(trace.steps):
        if step.get("id") != n:
            return False, f"step {n}: ids must be consecutive"
        rule, prem, c = step["rule"], step["premises"], step["conclusion"]
        if any(p != "hyp" and not (isinstance(p, int) and 0 <= p < n) for p in prem):
            return False, f"step {n}: premise refers forward or is unknown"
        if rule == "lemma":
            if prem or "or" not in c or json.dumps(sorted(c["or"])) not in valid_lemmas:
                return False, f"step {n}: not an instance of the lemma"
            if list(trace.hypothesis) in c["or"] and 2 in c.get("triple", []) and c["or"][0][0] == 2:
                hyp_ok = True
        elif rule == "asymmetry-pruning":
            if len(prem) != 2:
                return False, f"step {n}: pruning takes a disjunction and a fact"
            d, f = concl[prem[0]], concl[prem[1]]
            if "or" not in d or "ll" not in f or "ll" not in c:
                return False, f"step {n}: premise shapes"
            a, b = f["ll"]
            if [b, a] not in d["or"] or c["ll"] == [b, a] or c["ll"] not in d["or"]:
                return False, f"step {n}: pruning does not follow"
        elif rule == "transitivity":
            if len(prem) != 2:
                return False, f"step {n}: transitivity takes two facts"
            f1, f2 = concl[prem[0]], concl[prem[1]]
            if "ll" not in f1 or "ll" not in f2 or f1["ll"][1] != f2["ll"][0]:
                return False, f"step {n}: facts do not chain"
            if c != {"ll": [f1["ll"][0], f2["ll"][1]]}:
                return False, f"step {n}: wrong conclusion"
        else:
            return False, f"step {n}: unknown rule {rule!r}"
        concl[n] = c
    if not hyp_ok:
        return False, "hypothesis is not a branch of the lemma for <1, 2, 3>"
    if not trace.steps:
        return False, "empty trace"
    last = trace.steps[-1]["conclusion"]
    if "ll" not in last or last["ll"][0] != last["ll"][1]:
        return False, "trace does not end in a fact i << i"
    return True, "ok"


def check_case_split(traces: Sequence[DerivationTrace]) -> bool:
    """Both branches of the lemma for <1, 2, 3> are refuted."""
    hyps = sorted(tuple(t.hypothesis) for t in traces)
    return (hyps == sorted(tuple(x) for x in lemma_disjunction(2)["or"])
            and all(check_trace(t)[0] for t in traces))


# -- six Heisenberg copies in SL(3, Z) --------------------------------------

# [[*, 1, 2], [4, *, 3], [5, 6, *]]
POSITIONS = {1: (0, 1), 2: (0, 2), 3: (1, 2), 4: (1, 0), 5: (2, 0), 6: (2, 1)}


def elementary(k: int, t: int = 1) -> IntMatrix:
    i, j = POSITIONS[k]
    return tuple(tuple(int(r == c) + (t if (r, c) == (i, j) else 0) for c in range(3))
                 for r in range(3))


def mat_commutator(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return mat_mul(mat_mul(mat_inverse(a), mat_inverse(b)), mat_mul(a, b))


@dataclass
class TripleCheck:
    triple: tuple[int, int, int]
    sign: int | None  # [k-1, k+1] = <k>^sign, None if neither
    central: bool
    isomorphism: dict | None

    @property
    def ok(self) -> bool:
        return self.sign is not None and self.central and self.isomorphism is not None


def check_triple(lo: int, mid: int, hi: int, span: int = 3) -> TripleCheck:
    """Check that <lo>, <mid>, <hi> satisfy the Heisenberg relations.

    The map ``x -> <lo>^s, y -> <hi>, z -> <mid>`` is then a homomorphism
    onto the triple; it is verified on every normal-form element with
    exponents in [-span, span] to agree with the matrix evaluation.
    """
    from . import heisenberg as hz

    A, B, C = elementary(lo), elementary(hi), elementary(mid)
    comm = mat_commutator(A, B)
    sign = 1 if comm == C else -1 if comm == elementary(mid, -1) else None
    central = mat_mul(C, A) == mat_mul(A, C) and mat_mul(C, B) == mat_mul(B, C)
    iso = None
    if sign is not None and central:
        xs = elementary(lo, sign)

        def image(g):
            # y^b x^a z^c
            return mat_mul(mat_mul(mat_pow(B, g.b), mat_pow(xs, g.a)), mat_pow(C, g.c))

        rng = range(-span, span + 1)
        sample = [hz.HeisElement(a, b, c) for a in rng for b in rng for c in rng]
        good = True
        for g, h in zip(sample, reversed(sample)):
            if image(hz.mul(g, h)) != mat_mul(image(g), image(h)):
                good = False
                break
        images = {image(g) for g in sample}
        if good and len(images) == len(sample):
            iso = {"x": f"<{lo}>" + ("" if sign == 1 else "^-1"), "y": f"<{hi}>", "z": f"<{mid}>"}
    return TripleCheck((lo, mid, hi), sign, central, iso)


def mat_pow(m: IntMatrix, n: int) -> IntMatrix:
    if n < 0:
        m, n = mat_inverse(m), -n
    out = mat_identity(len(m))
    for _ in range(n):
        out = mat_mul(out, m)
    return out


def verify_heis_triples() -> list[TripleCheck]:
    return [check_triple(_wrap(k - 1), k, _wrap(k + 1)) for k in range(1, 7)]
