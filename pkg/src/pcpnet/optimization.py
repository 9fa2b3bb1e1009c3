"""Optimal outcomes of deterministic and probabilistic nets."""

from __future__ import annotations

from .errors import IncompleteTable
from .model import IncompleteCPNet, PCPNet, _check_outcome


def det_optimal(n) -> tuple:
    """Forward sweep: every variable takes its preferred value given its parents."""
    s = n.structure
    if isinstance(n, IncompleteCPNet) and n.absent:
        raise IncompleteTable(f"no rule for slot {s.slot_label(n.absent[0])}")
    o = [0] * s.n
    for x in s.order:
        o[x] = n.table[s.slot_of(x, o)]
    return tuple(o)


def optimal_prob(pn: PCPNet, o) -> float:
    """Probability that ``o`` is the optimum of a net drawn from ``pn`` (any acyclic structure).

    ``o`` is optimal exactly when every variable's rule in the context ``o``
    prefers ``o``'s own value, so this is a product over variables.
    """
    s = pn.structure
    o = _check_outcome(s, o)
    prob = 1
    for x in range(s.n):
        prob *= pn.prob_toward(s.slot_of(x, o), o[x])
    return float(prob)


def _map_tables(pn: PCPNet):
    """Bottom-up tables: best[x][pv] and the set of maximising values opt[x][pv].

    ``pv`` is the parent's value, or 0 for roots.
    """
    s = pn.structure
    best = [None] * s.n
    opt = [None] * s.n
    for x in reversed(s.order):
        contexts = (0, 1) if s.parents[x] else (0,)
        best[x], opt[x] = [], []
        for pv in contexts:
            scores = []
            for v in (0, 1):
                score = pn.prob_toward(s.offsets[x] + pv, v)
                for c in s.children[x]:
                    score *= best[c][v]
                scores.append(score)
            top = max(scores)
            best[x].append(top)
            opt[x].append(tuple(v for v in (0, 1) if scores[v] == top))
    return best, opt


def map_optimal(pn: PCPNet) -> tuple:
    """Outcome with the highest probability of being optimal, and that probability.

    Forest structures only. Ties are broken toward the lexicographically
    least outcome in variable-index order.
    """
    s = pn.structure
    s.require_forest()
    best, opt = _map_tables(pn)
    prob = 1
    for x in s.order:
        if not s.parents[x]:
            prob *= best[x][0]
    o = [None] * s.n
    if all(p < x for x in range(s.n) for p in s.parents[x]):
        for x in range(s.n):
            pv = o[s.parents[x][0]] if s.parents[x] else 0
            o[x] = opt[x][pv][0]
    else:
        _lex_least(s, opt, o)
    return tuple(o), float(prob)


def _lex_least(s, opt, o):
    """Fix variables in index order to the least value that still admits a maximiser."""
    allowed = [(0, 1)] * s.n

    def feasible():
        ok = [None] * s.n
        for x in reversed(s.order):
            ok[x] = []
            for pv in ((0, 1) if s.parents[x] else (0,)):
                ok[x].append(
                    any(v in allowed[x] and all(ok[c][v] for c in s.children[x]) for v in opt[x][pv])
                )
        return all(ok[x][0] for x in s.order if not s.parents[x])

    for x in range(s.n):
        for v in (0, 1):
            allowed[x] = (v,)
            if feasible():
                o[x] = v
                break
