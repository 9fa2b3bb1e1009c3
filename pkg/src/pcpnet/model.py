"""Structures and their rule slots, plus the net types over binary variables.

Values are the integers 0 and 1. An orientation is stored as the preferred
value of a slot: ``1`` reads "1 > 0" (x preferred to x-bar) and ``0`` reads
"0 > 1". A probabilistic net stores, per slot, the probability that 1 is
preferred.

Outcomes are plain tuples of 0/1 indexed by variable index.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .errors import CycleDetected, IncompatibleStructure, IncompleteTable, NotAForest, PCPNetError

FOREST = "forest"
ACYCLIC_DAG = "acyclic-dag"

Outcome = tuple  # tuple[int, ...]


class RuleSlot(NamedTuple):
    """A (variable, parent assignment) pair; context is aligned with ``parents[var]``."""

    var: int
    context: tuple


@dataclass(frozen=True)
class StructureReport:
    acyclic: bool
    forest: bool
    dense: bool
    shape_class: str
    n_vars: int
    n_slots: int


@dataclass(frozen=True)
class Structure:
    names: tuple
    parents: tuple
    order: tuple = field(init=False, repr=False, compare=False)
    children: tuple = field(init=False, repr=False, compare=False)
    offsets: tuple = field(init=False, repr=False, compare=False)
    n_slots: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        parents = tuple(tuple(p) for p in self.parents)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "parents", parents)
        n = len(names)
        if len(parents) != n:
            raise PCPNetError(f"{n} variables but {len(parents)} parent lists")
        if len(set(names)) != n:
            raise PCPNetError("variable names must be unique")
        for i, name in enumerate(names):
            if not isinstance(name, str) or not name:
                raise PCPNetError(f"variable {i} has an empty name")
        children = [[] for _ in range(n)]
        for x, pa in enumerate(parents):
            if len(set(pa)) != len(pa):
                raise PCPNetError(f"duplicate parent of {names[x]}")
            for y in pa:
                if not (isinstance(y, int) and 0 <= y < n):
                    raise PCPNetError(f"parent index {y!r} of {names[x]} out of range")
                if y == x:
                    raise CycleDetected(f"{names[x]} is its own parent")
                children[y].append(x)
        order = _topological_order(parents, children)
        offsets = [0] * n
        total = 0
        for x in order:
            offsets[x] = total
            total += 1 << len(parents[x])
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "children", tuple(tuple(c) for c in children))
        object.__setattr__(self, "offsets", tuple(offsets))
        object.__setattr__(self, "n_slots", total)

    @classmethod
    def from_names(cls, names: Sequence[str], parents: Mapping[str, Sequence[str]] | None = None):
        """Build from variable names and a ``{child: [parent, ...]}`` mapping."""
        parents = parents or {}
        index = {name: i for i, name in enumerate(names)}
        unknown = [p for pa in parents.values() for p in pa if p not in index]
        unknown += [c for c in parents if c not in index]
        if unknown:
            raise PCPNetError(f"unknown variable(s): {', '.join(sorted(set(unknown)))}")
        return cls(tuple(names), tuple(tuple(index[p] for p in parents.get(name, ())) for name in names))

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def is_forest(self) -> bool:
        return all(len(pa) <= 1 for pa in self.parents)

    @property
    def shape_class(self) -> str:
        return FOREST if self.is_forest else ACYCLIC_DAG

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PCPNetError(f"unknown variable {name!r}") from None

    def slot_index(self, var: int, context: Sequence[int]) -> int:
        c = 0
        for v in context:
            c = (c << 1) | v
        return self.offsets[var] + c

    def slot_of(self, var: int, outcome: Sequence[int]) -> int:
        """Index of the slot of ``var`` that applies in ``outcome``."""
        c = 0
        for y in self.parents[var]:
            c = (c << 1) | outcome[y]
        return self.offsets[var] + c

    def slots(self) -> list[RuleSlot]:
        out = []
        for x in self.order:
            k = len(self.parents[x])
            for c in range(1 << k):
                out.append(RuleSlot(x, tuple((c >> (k - 1 - j)) & 1 for j in range(k))))
        return out

    def slot_label(self, slot: RuleSlot | int) -> str:
        if isinstance(slot, int):
            slot = self.slots()[slot]
        name = self.names[slot.var]
        if not slot.context:
            return name
        ctx = ", ".join(f"{self.names[y]}={v}" for y, v in zip(self.parents[slot.var], slot.context))
        return f"{name} | {ctx}"

    def ancestors(self, var: int) -> list[int]:
        """Proper ancestors of ``var``."""
        seen, stack = set(), list(self.parents[var])
        while stack:
            y = stack.pop()
            if y not in seen:
                seen.add(y)
                stack.extend(self.parents[y])
        return sorted(seen)

    def leaves(self) -> list[int]:
        return [x for x in range(self.n) if not self.children[x]]

    def outcome(self, values: Mapping[str, int]) -> Outcome:
        """Total outcome from a ``{name: 0|1}`` mapping."""
        missing = [name for name in self.names if name not in values]
        extra = [name for name in values if name not in self.names]
        if missing or extra:
            raise PCPNetError(f"outcome must assign exactly the variables; missing={missing} extra={extra}")
        out = tuple(int(values[name]) for name in self.names)
        if any(v not in (0, 1) for v in out):
            raise PCPNetError("outcome values must be 0 or 1")
        return out

    def require_forest(self):
        if not self.is_forest:
            bad = [self.names[x] for x, pa in enumerate(self.parents) if len(pa) > 1]
            raise NotAForest(f"variables with several parents: {', '.join(bad)}")


def _topological_order(parents, children) -> tuple:
    n = len(parents)
    indeg = [len(pa) for pa in parents]
    heap = [x for x in range(n) if indeg[x] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        x = heapq.heappop(heap)
        order.append(x)
        for c in children[x]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, c)
    if len(order) != n:
        raise CycleDetected("the parent graph contains a cycle")
    return tuple(order)


def validate_structure(s: Structure) -> StructureReport:
    """Re-check a structure and classify its shape.

    Construction already rejects cycles with :class:`CycleDetected`; this
    re-runs the checks so a report can be produced for any instance.
    """
    order = _topological_order(s.parents, s.children)
    dense = all(0 <= y < s.n for pa in s.parents for y in pa)
    return StructureReport(
        acyclic=len(order) == s.n,
        forest=s.is_forest,
        dense=dense,
        shape_class=s.shape_class,
        n_vars=s.n,
        n_slots=s.n_slots,
    )


def rule_slots(s: Structure) -> list[RuleSlot]:
    return s.slots()


def _check_outcome(s: Structure, o) -> Outcome:
    o = tuple(o)
    if len(o) != s.n or any(v not in (0, 1) for v in o):
        raise PCPNetError(f"outcome {o!r} is not a total 0/1 assignment of {s.n} variables")
    return o


@dataclass(frozen=True)
class _Net:
    structure: Structure
    table: tuple

    def __post_init__(self):
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.structure.n_slots:
            raise PCPNetError(f"table has {len(table)} entries, structure has {self.structure.n_slots} slots")

    @classmethod
    def from_rules(cls, structure: Structure, rules: Mapping[RuleSlot, object]):
        table = [None] * structure.n_slots
        for slot, value in rules.items():
            slot = RuleSlot(*slot)
            if len(slot.context) != len(structure.parents[slot.var]):
                raise PCPNetError(f"context {slot.context} does not match parents of {structure.names[slot.var]}")
            table[structure.slot_index(slot.var, slot.context)] = value
        return cls(structure, tuple(table))

    def rule(self, slot: RuleSlot):
        return self.table[self.structure.slot_index(slot.var, slot.context)]

    def items(self):
        return zip(self.structure.slots(), self.table)


@dataclass(frozen=True)
class CPNet(_Net):
    """Complete deterministic CP-net; ``table[i]`` is the preferred value of slot ``i``."""

    def __post_init__(self):
        super().__post_init__()
        for i, v in enumerate(self.table):
            if v not in (0, 1):
                if v is None:
                    raise IncompleteTable(f"no rule for slot {self.structure.slot_label(i)}")
                raise PCPNetError(f"orientation of slot {self.structure.slot_label(i)} must be 0 or 1")

    def preferred(self, var: int, outcome: Sequence[int]) -> int:
        return self.table[self.structure.slot_of(var, outcome)]


@dataclass(frozen=True)
class IncompleteCPNet(_Net):
    """Deterministic net whose table entries may be ``None`` (no rule)."""

    def __post_init__(self):
        super().__post_init__()
        for i, v in enumerate(self.table):
            if v not in (0, 1, None):
                raise PCPNetError(f"orientation of slot {self.structure.slot_label(i)} must be 0, 1 or None")

    @property
    def absent(self) -> list[int]:
        return [i for i, v in enumerate(self.table) if v is None]

    def completed(self) -> CPNet:
        """The net itself as a :class:`CPNet`; raises IncompleteTable if a rule is missing."""
        return CPNet(self.structure, self.table)


@dataclass(frozen=True)
class PCPNet(_Net):
    """Probabilistic CP-net; ``table[i]`` is the probability that 1 is preferred in slot ``i``.

    Entries are floats, or :class:`fractions.Fraction` when built from counts.
    """

    def __post_init__(self):
        super().__post_init__()
        for i, p in enumerate(self.table):
            if p is None or not (0 <= p <= 1):
                raise PCPNetError(f"probability of slot {self.structure.slot_label(i)} must lie in [0, 1], got {p!r}")

    def prob_toward(self, slot_index: int, value: int):
        """Probability that ``value`` is the preferred value of the slot."""
        p = self.table[slot_index]
        return p if value == 1 else 1 - p

    @classmethod
    def degenerate(cls, net: CPNet) -> "PCPNet":
        """Probability 1 on the rules of ``net``."""
        return cls(net.structure, tuple(float(v) for v in net.table))


def net_probability(pn: PCPNet, n: CPNet):
    """Probability of the deterministic net ``n`` under ``pn``, in the table's number type."""
    if n.structure != pn.structure:
        raise IncompatibleStructure("the net and the PCP-net have different structures")
    prob = 1
    for p, v in zip(pn.table, n.table):
        prob *= p if v == 1 else 1 - p
    return prob


def sample_nets(pn: PCPNet, seed: int, count: int) -> list[CPNet]:
    """``count`` independent draws; each slot is drawn in slot order from one seeded stream."""
    rng = random.Random(seed)
    return [CPNet(pn.structure, tuple(1 if rng.random() < p else 0 for p in pn.table)) for _ in range(count)]


def sample_net(pn: PCPNet, seed: int) -> CPNet:
    return sample_nets(pn, seed, 1)[0]
