"""Elimination plans, the t-independent precomputation and the per-t finish.

Part 1 folds ``f_2 .. f_{n-1}`` pairwise along a binary tree.  A node whose
children span ``f_{i+1} .. f_j`` and ``f_{j+1} .. f_k`` eliminates ``x_j``;
its output involves ``x_i``, ``x_k``, ``x1`` and ``xn`` only and is linear in
``x_k``.  The root of the tree, ``g3``, lives in ``{x1, x_{n-1}, xn}``.

Part 2 takes one value of ``t``::

    g2 = res(fn, g3; x_{n-1})       u = res(f1, g2; x1)

then finds the roots of ``u`` and extends each one to full solutions.
"""

from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
import logging
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .errors import BadN, CacheIntegrity, DegeneratePlan, DegenerateSystem, DegreeAnomaly, EmptyIdeal
from .ff import FieldElement, PrimeField
from .gmv import GmvSystem, InitializedSystem, recover_solution
from .mpoly import MulCounter, MultiPoly, ReductionRule, reduce_x1
from .resultant import final_resultant, resultant
from .uniroot import UnivariatePoly, find_roots

log = logging.getLogger(__name__)

CACHE_VERSION = 1


class PlanKind(enum.Enum):
    CHAIN = "chain"
    BALANCED = "balanced"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class PlanNode:
    """A leaf ``f_lo`` (``left is None``) or the resultant of two adjacent spans."""

    lo: int
    hi: int
    left: PlanNode | None = None
    right: PlanNode | None = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def eliminates(self) -> int | None:
        return None if self.is_leaf else self.left.hi

    @property
    def leaves(self) -> int:
        return self.hi - self.lo + 1

    @property
    def height(self) -> int:
        return 0 if self.is_leaf else 1 + max(self.left.height, self.right.height)

    def postorder(self):
        if not self.is_leaf:
            yield from self.left.postorder()
            yield from self.right.postorder()
        yield self

    def nested(self):
        return self.lo if self.is_leaf else [self.left.nested(), self.right.nested()]

    def text(self) -> str:
        return f"f{self.lo}" if self.is_leaf else f"({self.left.text()},{self.right.text()})"

    @classmethod
    def join(cls, left: PlanNode, right: PlanNode) -> PlanNode:
        if left.hi + 1 != right.lo:
            raise DegeneratePlan(f"spans f{left.lo}..f{left.hi} and f{right.lo}..f{right.hi} are not adjacent")
        return cls(left.lo, right.hi, left, right)

    @classmethod
    def from_nested(cls, obj) -> PlanNode:
        if isinstance(obj, int):
            return cls(obj, obj)
        if isinstance(obj, list) and len(obj) == 2:
            return cls.join(cls.from_nested(obj[0]), cls.from_nested(obj[1]))
        raise DegeneratePlan(f"plan nodes are integers or pairs, got {obj!r}")


@dataclass(frozen=True)
class EliminationPlan:
    n: int
    kind: PlanKind
    root: PlanNode

    def __post_init__(self):
        if self.root.lo != 2 or self.root.hi != self.n - 1:
            raise DegeneratePlan(f"plan covers f{self.root.lo}..f{self.root.hi}, need f2..f{self.n - 1}")

    @property
    def fingerprint(self) -> str:
        return f"{self.kind.value}:{self.root.text()}"

    def eliminated(self) -> list[int]:
        return sorted(v.eliminates for v in self.root.postorder() if not v.is_leaf)

    def levels(self) -> list[list[PlanNode]]:
        """Internal nodes grouped by height; a level only depends on lower ones."""
        out: dict = {}
        for v in self.root.postorder():
            if not v.is_leaf:
                out.setdefault(v.height, []).append(v)
        return [out[h] for h in sorted(out)]

    def to_json(self) -> str:
        return json.dumps(self.root.nested())

    @classmethod
    def from_json(cls, n: int, text: str) -> EliminationPlan:
        return cls(n, PlanKind.EXPLICIT, PlanNode.from_nested(json.loads(text)))


def _balanced(lo: int, hi: int) -> PlanNode:
    if lo == hi:
        return PlanNode(lo, lo)
    # Odd spans give the extra leaf to the left.
    mid = lo + (hi - lo + 2) // 2 - 1
    return PlanNode.join(_balanced(lo, mid), _balanced(mid + 1, hi))


def _chain(lo: int, hi: int) -> PlanNode:
    node = PlanNode(hi, hi)
    for i in range(hi - 1, lo - 1, -1):
        node = PlanNode.join(PlanNode(i, i), node)
    return node


def build_plan(n: int, kind: PlanKind | str, nested=None) -> EliminationPlan:
    """Plan over the leaves ``f_2 .. f_{n-1}`` (``n >= 4``)."""
    if n < 4:
        raise BadN(f"n must be >= 4, got {n}")
    kind = PlanKind(kind) if isinstance(kind, str) else kind
    if kind is PlanKind.CHAIN:
        root = _chain(2, n - 1)
    elif kind is PlanKind.BALANCED:
        root = _balanced(2, n - 1)
    else:
        if nested is None:
            raise DegeneratePlan("an explicit plan needs a tree")
        root = PlanNode.from_nested(nested)
    return EliminationPlan(n, kind, root)


@dataclass(frozen=True)
class NodeLaw:
    """Expected degrees of a node spanning ``m`` leaves whose low variable is not x1."""

    low: int
    xn: int
    joint: int

    @classmethod
    def for_leaves(cls, m: int) -> NodeLaw:
        return cls(2**m, 2**m - 1, 2**m - 1)


@dataclass
class NodeStats:
    span: tuple
    eliminates: int
    h: int
    multiplications: int
    terms: int
    degrees: dict
    joint_x1_xn: int
    seconds: float
    anomaly: str = ""


def hash_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass
class PrecomputedState:
    init: InitializedSystem
    plan: EliminationPlan
    g3: MultiPoly
    stats: list = dc_field(default_factory=list)
    seconds: float = 0.0

    @property
    def n(self) -> int:
        return self.init.n

    @property
    def field(self) -> PrimeField:
        return self.init.field

    @property
    def f1(self) -> MultiPoly:
        return self.init.f1

    @property
    def rule(self) -> ReductionRule:
        return self.init.rule

    @property
    def g3_hash(self) -> str:
        return hash_text(self.g3.serialize())

    @property
    def constants_hash(self) -> str:
        return hash_text(self.init.system.constants_key())

    @property
    def peak_terms(self) -> int:
        return max((s.terms for s in self.stats), default=self.g3.num_terms)

    def init_for(self, system: GmvSystem) -> InitializedSystem:
        # f1 and the rule do not involve t.
        return dataclasses.replace(self.init, system=system)

    def to_cache(self) -> str:
        body = "\n".join(
            [
                f"gmvsolve-cache {CACHE_VERSION}",
                f"p: {self.field.p}",
                f"n: {self.n}",
                f"plan: {self.plan.fingerprint}",
                f"constants: {self.constants_hash}",
                "[g3]",
                self.g3.serialize().rstrip("\n"),
                "[f1]",
                self.f1.serialize().rstrip("\n"),
                "[r]",
                self.rule.r.serialize().rstrip("\n"),
                "",
            ]
        )
        return body + f"hash: {hash_text(body)}\n"

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_cache())

    @classmethod
    def from_cache(cls, text: str, system: GmvSystem) -> PrecomputedState:
        """Rebuild from :meth:`to_cache` output, checking the hash and the constants."""
        body, sep, tail = text.rpartition("hash: ")
        if not sep or hash_text(body) != tail.strip():
            raise CacheIntegrity("content hash mismatch")
        lines = body.split("\n")
        header = dict(ln.split(": ", 1) for ln in lines[1:5])
        if lines[0] != f"gmvsolve-cache {CACHE_VERSION}":
            raise CacheIntegrity(f"unknown cache format {lines[0]!r}")
        if int(header["p"]) != system.field.p or int(header["n"]) != system.n:
            raise CacheIntegrity("cache was built for a different field or n")
        if header["constants"] != hash_text(system.constants_key()):
            raise CacheIntegrity("cache was built for different constants")
        sections = {}
        cur = None
        for ln in lines[5:]:
            if ln.startswith("[") and ln.endswith("]"):
                cur = ln[1:-1]
                sections[cur] = []
            elif cur is not None:
                sections[cur].append(ln)
        try:
            g3 = MultiPoly.parse("\n".join(sections["g3"]), system.field)
            f1 = MultiPoly.parse("\n".join(sections["f1"]), system.field)
            r = MultiPoly.parse("\n".join(sections["r"]), system.field)
        except (KeyError, ValueError) as exc:
            raise CacheIntegrity(f"malformed cache section: {exc}") from exc
        kind, _, text_tree = header["plan"].partition(":")
        nested = json.loads(text_tree.replace("(", "[").replace(")", "]").replace("f", ""))
        plan = EliminationPlan(system.n, PlanKind(kind), PlanNode.from_nested(nested))
        from .gmv import initialize

        init = initialize(system)
        if init.f1 != f1 or init.rule.r != r:
            raise CacheIntegrity("stored f1 or rule disagrees with the system")
        return cls(init, plan, g3)

    @classmethod
    def load(cls, path, system: GmvSystem) -> PrecomputedState:
        with open(path) as fh:
            return cls.from_cache(fh.read(), system)


def _check_law(node: PlanNode, g: MultiPoly, n: int) -> str:
    low = node.lo - 1
    if low < 2:
        return ""
    law = NodeLaw.for_leaves(node.leaves)
    got = NodeLaw(g.degree_in(low), g.degree_in(n), g.joint_degree(1, n))
    if got != law:
        return f"node f{node.lo}..f{node.hi}: degrees {got} expected {law}"
    return ""


def precompute(init: InitializedSystem, plan: EliminationPlan, threads: int = 1, low_mem: bool = False) -> PrecomputedState:
    """Part 1: fold ``f_2 .. f_{n-1}`` along ``plan`` into ``g3``.

    Nodes of equal height are independent and run on ``threads`` workers.
    Every node output is reduced by the rule and checked against the degree
    law; deviations are reported as :class:`DegreeAnomaly` warnings.
    """
    sys, n = init.system, init.n
    if plan.n != n:
        raise BadN(f"plan is for n={plan.n}, system has n={n}")
    rule = init.rule
    t0 = time.perf_counter()
    values: dict = {}
    for i in range(2, n):
        values[(i, i)] = reduce_x1(sys.f(i), rule)
    stats: list = []

    def run(node: PlanNode):
        left, right = values[(node.left.lo, node.left.hi)], values[(node.right.lo, node.right.hi)]
        counter = MulCounter(node.text())
        s = time.perf_counter()
        j = node.eliminates
        g = resultant(left, right, j, rule, counter, low_mem=low_mem)
        h = max(left.degree_in(j), right.degree_in(j))
        if g.is_zero():
            raise DegenerateSystem(f"resultant at node {node.text()} vanished")
        st = NodeStats(
            (node.lo, node.hi),
            j,
            int(h),
            counter.count,
            g.num_terms,
            {v: g.degree_in(v) for v in g.vars},
            g.joint_degree(1, n),
            time.perf_counter() - s,
            _check_law(node, g, n),
        )
        return g, st

    for level in plan.levels():
        if threads > 1 and len(level) > 1:
            with ThreadPoolExecutor(threads) as ex:
                results = list(ex.map(run, level))
        else:
            results = [run(v) for v in level]
        for node, (g, st) in zip(level, results):
            values[(node.lo, node.hi)] = g
            del values[(node.left.lo, node.left.hi)], values[(node.right.lo, node.right.hi)]
            if st.anomaly:
                log.warning("degree anomaly: %s", st.anomaly)
                warnings.warn(st.anomaly, DegreeAnomaly, stacklevel=2)
            stats.append(st)
    g3 = values[(2, n - 1)]
    if not set(g3.vars) <= {1, n - 1, n}:
        raise DegenerateSystem(f"g3 involves {g3.vars}")
    return PrecomputedState(init, plan, g3, stats, time.perf_counter() - t0)


@dataclass
class SolveReport:
    t: FieldElement
    deg_u: int
    g2_terms: int
    roots: list
    solutions: list
    timings: dict
    extraneous: list = dc_field(default_factory=list)
    u: UnivariatePoly | None = dc_field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "t": str(int(self.t)),
            "deg_u": self.deg_u,
            "g2_terms": self.g2_terms,
            "roots": [str(int(r)) for r in self.roots],
            "extraneous_roots": [str(int(r)) for r in self.extraneous],
            "solutions": [[str(v) for v in s.values] for s in self.solutions],
            "timings": {k: round(v, 3) for k, v in self.timings.items()},
        }


def part2_g2(state: PrecomputedState, system: GmvSystem) -> MultiPoly:
    n = state.n
    return resultant(system.f(n), state.g3, n - 1, state.rule)


def solve_for_t(state: PrecomputedState, system: GmvSystem, t=None, root_seed=0) -> SolveReport:
    """Part 2 for one ``t`` (default: the system's own) against a shared ``state``."""
    if system.constants_key() != state.init.system.constants_key():
        raise CacheIntegrity("state was computed for a different system")
    if t is not None:
        system = system.with_t(int(t))
    times = {}
    s = time.perf_counter()
    g2 = part2_g2(state, system)
    times["g2"] = time.perf_counter() - s
    if g2.is_zero():
        raise EmptyIdeal(f"g2 vanishes identically for t={system.t}")
    s = time.perf_counter()
    u = final_resultant(state.f1, g2, state.rule)
    times["u"] = time.perf_counter() - s
    if u.is_zero():
        raise EmptyIdeal(f"u vanishes identically for t={system.t}")
    u = u.monic()
    deg_u = int(u.degree)
    s = time.perf_counter()
    roots = find_roots(u, root_seed) if deg_u >= 1 else []
    times["roots"] = time.perf_counter() - s
    s = time.perf_counter()
    sols, extraneous = [], []
    for r in roots:
        found = recover_solution(state.init_for(system), system, r, root_seed)
        if found:
            sols.extend(found)
        else:
            extraneous.append(r)
    times["recover"] = time.perf_counter() - s
    times["total"] = sum(times.values())
    return SolveReport(system.field(system.t), deg_u, g2.num_terms, roots, sorted(sols), times, extraneous, u)


def solve_all(state: PrecomputedState, system: GmvSystem, ts, root_seed=0, threads: int = 1) -> list[SolveReport]:
    ts = list(ts)
    if threads > 1 and len(ts) > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(lambda t: solve_for_t(state, system, t, root_seed), ts))
    return [solve_for_t(state, system, t, root_seed) for t in ts]


@dataclass(frozen=True)
class DegreeSchedule:
    n: int
    chain: dict  # a -> NodeLaw for g_a = res(f_a, g_{a+1}; x_a), 3 <= a <= n
    g2_xn: int
    g2_terms: int
    deg_u: int


def predicted_degrees(n: int) -> DegreeSchedule:
    if n < 4:
        raise BadN(f"n must be >= 4, got {n}")
    chain = {a: NodeLaw.for_leaves(n - a + 1) for a in range(3, n + 1)}
    top = 2**n - 1
    return DegreeSchedule(n, chain, top, 3 * top, 3 * top)


@dataclass
class ChainStep:
    a: int
    g: MultiPoly
    low_degree: int
    xn_degree: int
    joint: int
    multiplications: int
    h: int


def sequential_eliminate(init: InitializedSystem) -> list[ChainStep]:
    """The full chain ``g_n = fn``, ``g_a = res(f_a, g_{a+1}; x_a)`` down to ``g_2``.

    Unlike :func:`precompute` this includes ``fn`` (so it depends on ``t``).
    Step ``a`` reports degrees of ``g_a`` in ``x_{a-1}``, ``xn`` and jointly in
    ``x1, xn``.
    """
    sys, n, rule = init.system, init.n, init.rule
    g = sys.f(n)
    steps = [ChainStep(n, g, g.degree_in(n - 1), g.degree_in(n), g.joint_degree(1, n), 0, 0)]
    for a in range(n - 1, 1, -1):
        f = reduce_x1(sys.f(a), rule)
        counter = MulCounter(f"g{a}")
        h = g.degree_in(a)
        g = resultant(f, g, a, rule, counter)
        if g.is_zero():
            raise DegenerateSystem(f"g{a} vanished")
        steps.append(ChainStep(a, g, g.degree_in(a - 1), g.degree_in(n), g.joint_degree(1, n), counter.count, int(h)))
    return steps
