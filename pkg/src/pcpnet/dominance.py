"""Dominance on tree-structured nets.

Probabilistic dominance unrolls ``worsen`` for every leaf into exclusive
branch sets and sums the weights of their combined conjunctions; runtime is
exponential only in the number of variables on which the two outcomes differ.

Deterministic dominance and the completion question use one top-down pass
that computes, for each variable, the largest number of value changes it can
make in a worsening sequence over itself and its ancestors.
"""

from __future__ import annotations

import math
from itertools import product

from .errors import IncompleteTable
from .formulas import BranchSet, FormulaBuilder, combine, unroll_to_branchset
from .model import CPNet, IncompleteCPNet, PCPNet, Structure, _check_outcome

FAIL = -1  # below every change count


def dominance_branchset(s: Structure, o, o2) -> BranchSet:
    """Exclusive branches whose union is "some worsening sequence leads from o to o2"."""
    o = _check_outcome(s, o)
    o2 = _check_outcome(s, o2)
    if o == o2:
        return BranchSet(())
    builder = FormulaBuilder(s, o, o2)
    return combine(unroll_to_branchset(builder.worsen(x)) for x in s.leaves())


def dominance_prob_fpt(pn: PCPNet, o, o2) -> float:
    """Probability that a net drawn from ``pn`` entails ``o > o2`` (forest only)."""
    branches = dominance_branchset(pn.structure, o, o2)
    return math.fsum(branches.weight(pn))


def _max_changes(x_value, x_target, parent_changes, pref_here, pref_there) -> int:
    """Most changes of a child, given the most changes of its parent.

    ``pref_here``/``pref_there`` are the child's preferred values when the
    parent holds its starting value / the other value.
    """
    if parent_changes == FAIL:
        return FAIL
    need_odd = x_value != x_target
    if pref_here == pref_there:
        # one-way: a single flip away from the preferred value at most
        if not need_odd:
            return 0
        return 1 if x_value == pref_here else FAIL
    # opposite rules: one flip per phase of the parent, alternating
    best = parent_changes + 1 if x_value == pref_here else parent_changes
    if (best % 2 == 1) != need_odd:
        best -= 1
    return best if best >= 0 else FAIL


def _root_changes(x_value, x_target, pref) -> int:
    if x_value == x_target:
        return 0
    return 1 if pref == x_value else FAIL


def _top_down(s: Structure, o, o2, options) -> list:
    """Per-variable maximal change counts; ``options(x)`` lists candidate rule tuples.

    For a root a candidate is ``(pref,)``; otherwise ``(pref when parent=0,
    pref when parent=1)``. The best candidate is kept for each variable.
    """
    best = [FAIL] * s.n
    for x in s.order:
        pa = s.parents[x]
        if not pa:
            best[x] = max(_root_changes(o[x], o2[x], c[0]) for c in options(x))
            continue
        y = pa[0]
        m = best[y]
        if m == FAIL:
            best[x] = FAIL
            continue
        yv = o[y]
        best[x] = max(_max_changes(o[x], o2[x], m, c[yv], c[1 - yv]) for c in options(x))
    return best


def change_profile(n: CPNet, o, o2) -> list:
    """Largest ``k`` with ``change_k`` satisfied, per variable, or ``FAIL``."""
    s = n.structure
    s.require_forest()
    t = n.table

    def options(x):
        off = s.offsets[x]
        if not s.parents[x]:
            return ((t[off],),)
        return ((t[off], t[off + 1]),)

    return _top_down(s, o, o2, options)


def det_dominance(n, o, o2) -> bool:
    """Does the complete tree-structured net ``n`` entail ``o > o2``? Linear time."""
    s = n.structure
    o = _check_outcome(s, o)
    o2 = _check_outcome(s, o2)
    s.require_forest()
    if isinstance(n, IncompleteCPNet):
        if n.absent:
            raise IncompleteTable(f"no rule for slot {s.slot_label(n.absent[0])}")
    if o == o2:
        return False
    return FAIL not in change_profile(n, o, o2)


def completion_dominance_exists(n: IncompleteCPNet, o, o2) -> bool:
    """Is there a completion of ``n`` entailing ``o > o2``? Missing rules chosen greedily."""
    s = n.structure
    o = _check_outcome(s, o)
    o2 = _check_outcome(s, o2)
    s.require_forest()
    if o == o2:
        return False
    t = n.table

    def options(x):
        off = s.offsets[x]
        width = 1 << len(s.parents[x])
        return list(product(*[(t[off + c],) if t[off + c] is not None else (0, 1) for c in range(width)]))

    return FAIL not in _top_down(s, o, o2, options)


def greedy_completion(n: IncompleteCPNet, o, o2) -> CPNet:
    """A completion maximising every change count top-down (absent rules only)."""
    s = n.structure
    o = _check_outcome(s, o)
    o2 = _check_outcome(s, o2)
    s.require_forest()
    table = list(n.table)
    best = [FAIL] * s.n
    for x in s.order:
        off = s.offsets[x]
        width = 1 << len(s.parents[x])
        cands = product(*[(table[off + c],) if table[off + c] is not None else (0, 1) for c in range(width)])
        scored = []
        for c in cands:
            if width == 1:
                score = _root_changes(o[x], o2[x], c[0])
            else:
                y = s.parents[x][0]
                score = _max_changes(o[x], o2[x], best[y], c[o[y]], c[1 - o[y]])
            scored.append((score, c))
        best[x], chosen = max(scored, key=lambda sc: sc[0])
        table[off : off + width] = chosen
    return CPNet(s, table)
