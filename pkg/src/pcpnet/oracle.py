"""Ground truth by exhaustive enumeration.

Everything here works straight from the flip semantics: search over
outcomes for one deterministic net, and sums over every compatible net for
the probabilistic queries. Exponential by design; guarded by slot counts.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import TooLargeForOracle
from .model import CPNet, IncompleteCPNet, PCPNet, _check_outcome, net_probability

MAX_ORACLE_SLOTS = 24
MAX_ABSENT_SLOTS = 20
_CHUNK_CELLS = 1 << 22


def worsening_successors(n: CPNet, o) -> set:
    """All outcomes reachable from ``o`` by a single worsening flip."""
    s = n.structure
    out = set()
    for x in range(s.n):
        if n.table[s.slot_of(x, o)] == o[x]:
            out.add(o[:x] + (1 - o[x],) + o[x + 1 :])
    return out


def entails_oracle(n: CPNet, o, o2) -> bool:
    """True iff a worsening sequence of at least one flip leads from ``o`` to ``o2``."""
    o = _check_outcome(n.structure, o)
    o2 = _check_outcome(n.structure, o2)
    seen = set()
    queue = deque(worsening_successors(n, o))
    seen.update(queue)
    while queue:
        cur = queue.popleft()
        if cur == o2:
            return True
        for nxt in worsening_successors(n, cur):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def is_undominated(n: CPNet, o) -> bool:
    """No worsening flip ends in ``o``, so no worsening sequence does either."""
    for x in range(n.structure.n):
        neighbour = o[:x] + (1 - o[x],) + o[x + 1 :]
        if o in worsening_successors(n, neighbour):
            return False
    return True


def _guard(count: int, limit: int, what: str):
    if count > limit:
        raise TooLargeForOracle(f"{count} {what} exceeds the oracle limit of {limit}")


def compatible_nets(pn: PCPNet):
    """Yield every compatible deterministic net with its probability.

    Order: slot order, orientation 1 first, the first slot varying slowest.
    """
    s = pn.structure
    _guard(s.n_slots, MAX_ORACLE_SLOTS, "slots")
    for table in product((1, 0), repeat=s.n_slots):
        net = CPNet(s, table)
        yield net, net_probability(pn, net)


def dominance_prob_oracle_naive(pn: PCPNet, o, o2) -> float:
    """Straight sum using :func:`entails_oracle` on every compatible net."""
    o = _check_outcome(pn.structure, o)
    o2 = _check_outcome(pn.structure, o2)
    return _exact_mass([entails_oracle(net, o, o2) for net, _ in compatible_nets(pn)], pn)


def _exact_weights(pn: PCPNet):
    """Slot probabilities as integers over one common denominator."""
    fracs = [Fraction(p) for p in pn.table]
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // math.gcd(denom, f.denominator)
    return [int(f * denom) for f in fracs], denom


def _fold(values: np.ndarray, numerators, denom: int, slots) -> np.ndarray:
    """Collapse the trailing ``len(slots)`` orientation axes, last slot first.

    ``values`` is indexed by net enumeration index restricted to those slots
    (orientation 1 first); each step returns ``p * v[pref 1] + (1 - p) * v[pref 0]``
    scaled by ``denom``.
    """
    for j in reversed(slots):
        pair = values.reshape(-1, 2)
        a = numerators[j]
        values = a * pair[:, 0] + (denom - a) * pair[:, 1]
    return values


def _exact_mass(mask, pn: PCPNet) -> float:
    """Probability of the nets selected by ``mask`` (indexed in enumeration order)."""
    nums, denom = _exact_weights(pn)
    m = pn.structure.n_slots
    total = _fold(np.asarray(mask, dtype=object).astype(int).astype(object), nums, denom, range(m))
    return float(Fraction(int(total[0]), denom**m))


class _Batch:
    """Bit-parallel reachability over a block of nets.

    Rows are outcomes (outcome ``o`` is the integer with bit ``x`` equal to
    ``o[x]``); each row is a bitset over the nets of the block, packed 64 to
    a ``uint64`` word. Blocks hold ``2**block_bits`` consecutive nets, i.e. a
    fixed orientation of the leading slots.
    """

    def __init__(self, pn: PCPNet):
        s = pn.structure
        self.s = s
        self.n_states = 1 << s.n
        states = np.arange(self.n_states)
        self.bits = [((states >> x) & 1).astype(bool) for x in range(s.n)]
        self.slot_at = []
        for x in range(s.n):
            idx = np.full(self.n_states, s.offsets[x])
            k = len(s.parents[x])
            for j, y in enumerate(s.parents[x]):
                idx += ((states >> y) & 1) << (k - 1 - j)
            self.slot_at.append(idx)
        words = max(1, _CHUNK_CELLS // (self.n_states * max(1, s.n)))
        self.block_bits = min(s.n_slots, (words * 64).bit_length() - 1)

    def _packed_orientations(self, start: int, stop: int) -> np.ndarray:
        """(slots, words) bitsets: bit set iff the net prefers value 1 in that slot."""
        m = self.s.n_slots
        count = stop - start
        padded = -(-count // 64) * 64
        ids = np.arange(start, start + padded, dtype=np.int64)
        shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
        pref = ((ids[None, :] >> shifts[:, None]) & 1) == 0
        return np.packbits(pref, axis=1, bitorder="little").view(np.uint64)

    def _step(self, frontier, canflip):
        # flipping bit x of the row index reverses the size-2 axis of a (-1, 2, 2**x, words) view
        words = frontier.shape[1]
        new = np.zeros_like(frontier)
        for x in range(self.s.n):
            src = (frontier & canflip[x]).reshape(-1, 2, 1 << x, words)
            view = new.reshape(-1, 2, 1 << x, words)
            view |= src[:, ::-1]
        return new

    def entailing(self, start: int, stop: int, src: int, dst: int) -> np.ndarray:
        pref = self._packed_orientations(start, stop)
        canflip = [np.where(self.bits[x][:, None], pref[self.slot_at[x]], ~pref[self.slot_at[x]]) for x in range(self.s.n)]
        frontier = np.zeros((self.n_states, pref.shape[1]), dtype=np.uint64)
        frontier[src] = ~np.uint64(0)
        reach = self._step(frontier, canflip)
        frontier = reach
        while frontier.any():
            frontier = self._step(frontier, canflip) & ~reach
            reach |= frontier
        hit = np.unpackbits(reach[dst].view(np.uint8), bitorder="little").astype(bool)
        return hit[: stop - start]


def dominance_prob_oracle(pn: PCPNet, o, o2, threads: int = 1) -> float:
    """Mass of compatible nets entailing ``o > o2``, by exhaustive enumeration.

    Nets are searched in blocks sharing the orientation of the leading
    slots; with ``threads > 1`` blocks run concurrently. The mass is summed
    in exact rational arithmetic, block results combined in block order, and
    rounded to float once.
    """
    s = pn.structure
    o = _check_outcome(s, o)
    o2 = _check_outcome(s, o2)
    _guard(s.n_slots, MAX_ORACLE_SLOTS, "slots")
    if o == o2:
        return 0.0
    batch = _Batch(pn)
    nums, denom = _exact_weights(pn)
    src = sum(v << x for x, v in enumerate(o))
    dst = sum(v << x for x, v in enumerate(o2))
    m = s.n_slots
    size = 1 << batch.block_bits
    inner = range(m - batch.block_bits, m)

    def block(i):
        hit = batch.entailing(i * size, (i + 1) * size, src, dst)
        return _fold(hit.astype(int).astype(object), nums, denom, inner)[0]

    n_blocks = 1 << (m - batch.block_bits)
    if threads > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, range(n_blocks)))
    else:
        parts = [block(i) for i in range(n_blocks)]
    total = _fold(np.array(parts, dtype=object), nums, denom, range(m - batch.block_bits))
    return float(Fraction(int(total[0]), denom**m))


def optimal_prob_oracle(pn: PCPNet, o) -> float:
    """Mass of compatible nets whose unique undominated outcome is ``o``."""
    o = _check_outcome(pn.structure, o)
    return _exact_mass([is_undominated(net, o) for net, _ in compatible_nets(pn)], pn)


def enumerate_completions(n: IncompleteCPNet) -> list[CPNet]:
    absent = n.absent
    _guard(len(absent), MAX_ABSENT_SLOTS, "absent slots")
    out = []
    for choice in product((1, 0), repeat=len(absent)):
        table = list(n.table)
        for i, v in zip(absent, choice):
            table[i] = v
        out.append(CPNet(n.structure, table))
    return out


def change_counts(n: CPNet, o, x: int, cap: int) -> dict:
    """Reachable ancestor assignments of ``x`` with the most changes of ``x`` seen.

    Searches worsening sequences (zero flips allowed) that only move ``x``
    and its ancestors, starting from ``o``. Returns a map from the assignment
    to ``ancestors(x) + [x]`` to the largest number of changes of ``x``,
    counted up to ``cap``, over all sequences reaching it.
    """
    s = n.structure
    scope = s.ancestors(x) + [x]
    start = (tuple(o), 0)
    seen = {start}
    queue = deque([start])
    while queue:
        cur, c = queue.popleft()
        for y in scope:
            if n.table[s.slot_of(y, cur)] == cur[y]:
                nxt = cur[:y] + (1 - cur[y],) + cur[y + 1 :]
                state = (nxt, min(cap, c + 1) if y == x else c)
                if state not in seen:
                    seen.add(state)
                    queue.append(state)
    best = {}
    for cur, c in seen:
        key = tuple(cur[y] for y in scope)
        best[key] = max(best.get(key, -1), c)
    return best


def change_sequence_exists(n: CPNet, o, o2, x: int, k: int) -> bool:
    """Is there a worsening sequence on ``x`` and its ancestors, from ``o`` to ``o2``
    restricted to them, in which ``x`` changes value at least ``k`` times?"""
    s = n.structure
    scope = s.ancestors(x) + [x]
    best = change_counts(n, tuple(o), x, k)
    return best.get(tuple(o2[y] for y in scope), -1) >= k
