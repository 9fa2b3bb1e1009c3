"""Summarising a population of CP-nets as one PCP-net, and the queries that stay exact.

Each slot's probability is the fraction of nets holding the rule "1 > 0",
kept as an exact :class:`~fractions.Fraction`. Swap-pair dominance and
hypercube-wise Condorcet winners computed on the summary coincide with the
population counts.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import CycleDetected, EmptyPopulation, NotASwapPair, PCPNetError, StructureMismatch, TooLarge
from .model import CPNet, PCPNet, Structure, _check_outcome

MAX_CONDORCET_VARS = 20


def union_structure(structures: Sequence[Structure]) -> Structure:
    first = structures[0]
    if any(s.names != first.names for s in structures):
        raise StructureMismatch("nets are over different variables")
    parents = []
    for x in range(first.n):
        pa = sorted({y for s in structures for y in s.parents[x]})
        parents.append(tuple(pa))
    try:
        union = Structure(first.names, tuple(parents))
    except CycleDetected as e:
        raise StructureMismatch(f"union of the structures is cyclic: {e}") from None
    if not union.is_forest:
        raise StructureMismatch("union of the differing structures is not a forest")
    return union


def embed(net: CPNet, target: Structure) -> CPNet:
    """The same rules over a structure whose parent sets contain the net's own.

    A rule conditioned on fewer parents is copied to every context that
    agrees with it.
    """
    s = net.structure
    table = []
    for slot in target.slots():
        x = slot.var
        tpa = target.parents[x]
        if not set(s.parents[x]) <= set(tpa):
            raise StructureMismatch(f"{s.names[x]} has parents outside the target structure")
        values = dict(zip(tpa, slot.context))
        table.append(net.table[s.slot_index(x, [values[y] for y in s.parents[x]])])
    return CPNet(target, table)


def aggregate(nets: Sequence[CPNet]) -> PCPNet:
    nets = list(nets)
    if not nets:
        raise EmptyPopulation("cannot aggregate an empty population")
    structures = [n.structure for n in nets]
    s = structures[0]
    if any(t != s for t in structures[1:]):
        s = union_structure(structures)
        nets = [embed(n, s) for n in nets]
    m = len(nets)
    counts = [sum(n.table[i] for n in nets) for i in range(s.n_slots)]
    return PCPNet(s, tuple(Fraction(c, m) for c in counts))


def swap_dominance_prob(pn: PCPNet, o, o2):
    """Probability of ``o > o2`` for a swap pair: the weight of the single licensing rule."""
    s = pn.structure
    o = _check_outcome(s, o)
    o2 = _check_outcome(s, o2)
    diff = [x for x in range(s.n) if o[x] != o2[x]]
    if len(diff) != 1:
        raise NotASwapPair(f"outcomes differ on {len(diff)} variables, not exactly one")
    (x,) = diff
    return pn.prob_toward(s.slot_of(x, o), o[x])


def is_condorcet(pn: PCPNet, o) -> bool:
    """Does ``o`` beat each one-flip neighbour with probability at least one half?"""
    o = _check_outcome(pn.structure, o)
    for x in range(pn.structure.n):
        neighbour = o[:x] + (1 - o[x],) + o[x + 1 :]
        if swap_dominance_prob(pn, o, neighbour) < Fraction(1, 2):
            return False
    return True


def condorcet_winners(pn: PCPNet) -> list:
    n = pn.structure.n
    if n > MAX_CONDORCET_VARS:
        raise TooLarge(f"{n} variables exceeds the Condorcet scan limit of {MAX_CONDORCET_VARS}")
    return [o for o in product((0, 1), repeat=n) if is_condorcet(pn, o)]


def find_condorcet(pn: PCPNet):
    """Lexicographically least hypercube-wise Condorcet winner, or ``None``."""
    n = pn.structure.n
    if n > MAX_CONDORCET_VARS:
        raise TooLarge(f"{n} variables exceeds the Condorcet scan limit of {MAX_CONDORCET_VARS}")
    for o in product((0, 1), repeat=n):
        if is_condorcet(pn, o):
            return o
    return None


def as_pcpnet(model) -> PCPNet:
    """Treat a deterministic net as the one-member population it describes."""
    if isinstance(model, PCPNet):
        return model
    if isinstance(model, CPNet):
        return aggregate([model])
    raise PCPNetError("expected a complete CP-net or a PCP-net")
