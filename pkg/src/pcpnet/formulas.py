"""Propositional characterisation of worsening sequences on forests.

``change(X, k)`` holds in a deterministic net iff some worsening sequence,
moving only ``X`` and its ancestors, takes ``o`` to ``o2`` on those
variables while ``X`` changes value at least ``k`` times. ``worsen(X)`` is
``change(X, 0)`` or ``change(X, 1)`` depending on whether ``X`` differs.

Formulas are built over rule literals, one propositional variable per rule
slot (slot ``i`` oriented toward value ``v``). The case table is written once
for ``o[X]`` and ``o[Y]`` as the "current" values; the mirrored cases fall
out because literals are expressed relative to those values.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

from .model import Structure, _check_outcome


@dataclass(frozen=True)
class Lit:
    """Slot ``slot`` prefers value ``pref``; its negation prefers ``1 - pref``."""

    slot: int
    pref: int

    def negate(self) -> "Lit":
        return Lit(self.slot, 1 - self.pref)


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


class _Const:
    def __init__(self, value: bool):
        self.value = value

    def __repr__(self):
        return "TOP" if self.value else "BOTTOM"


TOP = _Const(True)
BOTTOM = _Const(False)


class Change:
    """Named node ``change_k(var)``; ``body`` is filled in by the builder.

    Nodes are shared (memoised on ``(var, k)``), so a formula is a DAG and
    equality is identity.
    """

    __slots__ = ("var", "k", "body")

    def __init__(self, var: int, k: int):
        self.var = var
        self.k = k
        self.body = None

    def __repr__(self):
        return f"change_{self.k}({self.var})"


class FormulaBuilder:
    """Builds ``change``/``worsen`` nodes for one query ``(o, o2)`` on a forest.

    Construction is iterative: references create placeholder nodes which are
    queued and given a body afterwards, so deep chains need no recursion.
    """

    def __init__(self, s: Structure, o, o2):
        s.require_forest()
        self.s = s
        self.o = _check_outcome(s, o)
        self.o2 = _check_outcome(s, o2)
        self.memo: dict[tuple[int, int], Change] = {}
        self._pending: list[Change] = []

    def _ref(self, x: int, k: int) -> Change:
        node = self.memo.get((x, k))
        if node is None:
            node = self.memo[(x, k)] = Change(x, k)
            self._pending.append(node)
        return node

    def change(self, x: int, k: int) -> Change:
        if k < 0:
            raise ValueError("k must be non-negative")
        root = self._ref(x, k)
        while self._pending:
            node = self._pending.pop()
            node.body = self._case(node.var, node.k)
        return root

    def worsen(self, x: int) -> Change:
        return self.change(x, 0 if self.o[x] == self.o2[x] else 1)

    def _case(self, x: int, k: int):
        o, o2, s = self.o, self.o2, self.s
        xv = o[x]
        same_x = xv == o2[x]
        if not s.parents[x]:
            if same_x:
                return TOP if k == 0 else BOTTOM
            if k == 0:
                return self._ref(x, 1)
            if k == 1:
                return Lit(s.offsets[x], xv)
            return BOTTOM

        (y,) = s.parents[x]
        yv = o[y]
        same_y = yv == o2[y]
        here = s.offsets[x] + yv
        there = s.offsets[x] + 1 - yv
        keep_here = Lit(here, xv)  # y : x > x-bar
        keep_there = Lit(there, xv)  # y-bar : x > x-bar
        flip_here = Lit(here, 1 - xv)  # y : x-bar > x
        flip_there = Lit(there, 1 - xv)  # y-bar : x-bar > x
        first = And((keep_here, flip_there))
        second = And((flip_here, keep_there))

        if k == 0:
            return self._ref(y, 0) if same_x else self._ref(x, 1)
        if k == 1:
            if same_x:
                return self._ref(x, 2)
            if same_y:
                return Or((And((keep_here, self._ref(y, 0))), And((keep_there, self._ref(y, 2)))))
            return And((Or((keep_here, keep_there)), self._ref(y, 1)))

        odd = k % 2 == 1
        if same_x == odd:
            # parity mismatch: equal endpoints need an even count, different ones odd
            return self._ref(x, k + 1)
        if same_x == same_y:
            return And((Or((first, second)), self._ref(y, k)))
        return Or((And((first, self._ref(y, k - 1))), And((second, self._ref(y, k + 1)))))


def build_change(s: Structure, o, o2, x: int, k: int) -> Change:
    return FormulaBuilder(s, o, o2).change(x, k)


def build_worsen(s: Structure, o, o2, x: int) -> Change:
    return FormulaBuilder(s, o, o2).worsen(x)


def _direct_refs(f) -> Iterable[Change]:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Change):
            yield g
        elif isinstance(g, (And, Or)):
            stack.extend(g.parts)


def dependency_order(f) -> list[Change]:
    """Change nodes reachable from ``f``, each after every node it refers to."""
    order, done, onpath = [], set(), set()
    roots = list(_direct_refs(f)) if not isinstance(f, Change) else [f]
    for root in roots:
        if id(root) in done:
            continue
        stack = [(root, iter(list(_direct_refs(root.body))))]
        onpath.add(id(root))
        while stack:
            node, it = stack[-1]
            child = next(it, None)
            if child is None:
                stack.pop()
                onpath.discard(id(node))
                done.add(id(node))
                order.append(node)
            elif id(child) not in done and id(child) not in onpath:
                onpath.add(id(child))
                stack.append((child, iter(list(_direct_refs(child.body)))))
    return order


def _eval(f, table, values) -> bool:
    if isinstance(f, Lit):
        return table[f.slot] == f.pref
    if isinstance(f, Change):
        return values[id(f)]
    if isinstance(f, And):
        return all(_eval(g, table, values) for g in f.parts)
    if isinstance(f, Or):
        return any(_eval(g, table, values) for g in f.parts)
    return f.value


def satisfies(f, table) -> bool:
    """Does the (complete) orientation table satisfy formula ``f``?"""
    values = {}
    for node in dependency_order(f):
        values[id(node)] = _eval(node.body, table, values)
    return _eval(f, table, values)


def change_values(builder: FormulaBuilder, table) -> dict:
    """Truth value of every node the builder has made so far, keyed by ``(var, k)``."""
    nodes = tuple(builder.memo.values())
    values = {}
    for node in dependency_order(And(nodes)):
        values[id(node)] = _eval(node.body, table, values)
    return {key: values[id(node)] for key, node in builder.memo.items()}


def formula_entails(n, o, o2) -> bool:
    """Dominance read off the conjunction of ``worsen`` over all leaves."""
    o, o2 = tuple(o), tuple(o2)
    if o == o2:
        return False
    b = FormulaBuilder(n.structure, o, o2)
    return all(satisfies(b.worsen(x), n.table) for x in n.structure.leaves())


# --- branch sets -----------------------------------------------------------

# A branch is a consistent conjunction of literals: a dict slot -> preferred value.


def _merge(a: dict, b: dict):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for slot, v in b.items():
        w = out.setdefault(slot, v)
        if w != v:
            return None
    return out


def conjoin(left: list, right: list) -> list:
    """Pairwise conjunction of two branch lists, dropping contradictions."""
    out = []
    for a, b in product(left, right):
        m = _merge(a, b)
        if m is not None:
            out.append(m)
    return out


def _subtract(p: dict, r: dict) -> list:
    """``p and not r`` as exclusive branches."""
    for slot, v in r.items():
        if p.get(slot, v) != v:
            return [p]
    extra = [(slot, v) for slot, v in r.items() if slot not in p]
    out = []
    prefix = dict(p)
    for slot, v in extra:
        piece = dict(prefix)
        piece[slot] = 1 - v
        out.append(piece)
        prefix[slot] = v
    return out


def disjoin(parts: list) -> list:
    """Disjunction of branch lists, rewritten so the result is pairwise exclusive.

    Every later term is cut down to ``term and not earlier`` for each earlier
    term, which keeps the union unchanged.
    """
    result: list = []
    for branches in parts:
        fresh = []
        for t in branches:
            pieces = [t]
            for r in result:
                pieces = [q for p in pieces for q in _subtract(p, r)]
                if not pieces:
                    break
            fresh.extend(pieces)
        result.extend(fresh)
    return result


def _branches(f, memo) -> list:
    if isinstance(f, Lit):
        return [{f.slot: f.pref}]
    if isinstance(f, Change):
        return memo[id(f)]
    if isinstance(f, And):
        out = [{}]
        for g in f.parts:
            out = conjoin(out, _branches(g, memo))
            if not out:
                break
        return out
    if isinstance(f, Or):
        return disjoin([_branches(g, memo) for g in f.parts])
    return [{}] if f.value else []


@dataclass(frozen=True)
class BranchSet:
    """Pairwise exclusive literal conjunctions; each is a sorted ``((slot, pref), ...)``."""

    branches: tuple

    @classmethod
    def of(cls, branches: Iterable[dict]) -> "BranchSet":
        return cls(tuple(tuple(sorted(b.items())) for b in branches))

    def __len__(self):
        return len(self.branches)

    def as_dicts(self) -> list:
        return [dict(b) for b in self.branches]

    def weight(self, pn) -> list:
        out = []
        for b in self.branches:
            w = 1.0
            for slot, v in b:
                w *= pn.prob_toward(slot, v)
            out.append(w)
        return out


def unroll_to_branchset(f) -> BranchSet:
    memo = {}
    for node in dependency_order(f):
        memo[id(node)] = _branches(node.body, memo)
    return BranchSet.of(_branches(f, memo))


def combine(sets: Iterable[BranchSet]) -> BranchSet:
    """Conjunction of several branch sets (one per leaf), duplicates merged."""
    out = [{}]
    for bs in sets:
        out = conjoin(out, bs.as_dicts())
        if not out:
            break
    return BranchSet.of(out)


def render(f, s: Structure, depth: int = 0) -> str:
    """Human-readable form; referenced ``change`` nodes are shown by name."""
    if isinstance(f, Change):
        if depth == 0:
            return render(f.body, s, 1)
        return f"change_{f.k}({s.names[f.var]})"
    if isinstance(f, Lit):
        label = s.slot_label(f.slot)
        return f"({label} : {f.pref}>{1 - f.pref})"
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        return "(" + op.join(render(g, s, depth + 1) for g in f.parts) + ")"
    return "T" if f.value else "F"
