import random

import pytest

from pcpnet import (
    CPNet,
    IncompleteCPNet,
    IncompleteTable,
    NotAForest,
    PCPNet,
    Structure,
    completion_dominance_exists,
    det_dominance,
    dominance_branchset,
    dominance_prob_fpt,
    dominance_prob_oracle,
    entails_oracle,
    enumerate_completions,
    greedy_completion,
)
from pcpnet.dominance import FAIL, change_profile
from pcpnet.generate import random_forest, random_incomplete, random_pair, random_pcpnet

from conftest import all_nets, chain, outcomes


def test_fpt_equal_outcomes_zero(chain_ab):
    assert dominance_prob_fpt(chain_ab, (1, 0), (1, 0)) == 0.0


def test_fpt_swap_pairs_exact(chain_ab):
    s = chain_ab.structure
    for o in outcomes(2):
        for x in range(2):
            o2 = o[:x] + (1 - o[x],) + o[x + 1 :]
            assert dominance_prob_fpt(chain_ab, o, o2) == chain_ab.prob_toward(s.slot_of(x, o), o[x])


def test_fpt_chain_fixture(chain_ab):
    assert dominance_prob_fpt(chain_ab, (1, 1), (0, 0)) == pytest.approx(0.56, abs=1e-12)


def test_fpt_xy_net_net(xy_net):
    # x y > x-bar y-bar: flip Y under x then X, or X first then Y under x-bar
    want = 0.1 * (1 - 0.8 * 0.7)
    assert dominance_prob_fpt(xy_net, (1, 1), (0, 0)) == pytest.approx(want, abs=1e-12)


def test_fpt_matches_oracle_random():
    rng = random.Random(99)
    for _ in range(60):
        s = random_forest(rng, rng.randint(2, 6))
        pn = random_pcpnet(rng, s)
        o, o2 = random_pair(rng, s.n, 4)
        assert dominance_prob_fpt(pn, o, o2) == pytest.approx(dominance_prob_oracle(pn, o, o2), abs=1e-9)


def test_fpt_rejects_dag():
    s = Structure.from_names(["A", "B", "C"], {"C": ["A", "B"]})
    pn = PCPNet(s, (0.5,) * s.n_slots)
    with pytest.raises(NotAForest):
        dominance_prob_fpt(pn, (1, 1, 1), (0, 0, 0))


def test_branch_count_bound():
    rng = random.Random(8)
    for _ in range(100):
        s = random_forest(rng, rng.randint(2, 8))
        o, o2 = random_pair(rng, s.n, 4)
        k = sum(a != b for a, b in zip(o, o2))
        assert len(dominance_branchset(s, o, o2)) <= 2 ** (2 * k * k)


def test_det_swap_pairs():
    n = CPNet(chain(2), (1, 0, 1))
    assert det_dominance(n, (1, 1), (1, 0))
    assert not det_dominance(n, (1, 0), (1, 1))
    assert not det_dominance(n, (1, 1), (1, 1))


def test_det_exhaustive_chain3():
    s = chain(3)
    for net in all_nets(s):
        for o in outcomes(3):
            for o2 in outcomes(3):
                assert det_dominance(net, o, o2) == entails_oracle(net, o, o2)


def test_det_star_and_two_roots():
    shapes = [
        Structure.from_names(list("ABCD"), {"B": ["A"], "C": ["A"], "D": ["A"]}),
        Structure.from_names(list("ABCD"), {"B": ["A"], "D": ["C"]}),
    ]
    rng = random.Random(4)
    for s in shapes:
        for _ in range(40):
            net = CPNet(s, tuple(rng.randint(0, 1) for _ in range(s.n_slots)))
            for o in outcomes(4):
                for o2 in outcomes(4):
                    assert det_dominance(net, o, o2) == entails_oracle(net, o, o2)


def test_det_rejects_incomplete():
    n = IncompleteCPNet(chain(2), (1, None, 1))
    with pytest.raises(IncompleteTable):
        det_dominance(n, (1, 1), (0, 0))


def test_det_accepts_filled_incomplete():
    n = IncompleteCPNet(chain(2), (1, 0, 1))
    assert det_dominance(n, (1, 1), (1, 0))


def test_change_profile_alternation():
    # B opposes A; C opposes B. A falls once, B can change twice, C three times
    s = chain(3)
    net = CPNet(s, (1, 1, 0, 1, 0))
    assert change_profile(net, (1, 0, 1), (0, 0, 0)) == [1, 2, 3]
    assert change_profile(net, (0, 0, 0), (1, 0, 0))[0] == FAIL


def _copy_chain(n):
    """Root prefers 1 and each child prefers its parent's value."""
    s = chain(n, [f"X{i}" for i in range(n)])
    return CPNet(s, tuple([1] + [0, 1] * (n - 1)))


def test_alternating_chain_small_matches_oracle():
    net = _copy_chain(8)
    o = (1,) * 8
    o2 = tuple(i % 2 for i in range(8))
    assert entails_oracle(net, o, o2)
    assert det_dominance(net, o, o2)
    assert change_profile(net, o, o2) == [1, 2, 3, 4, 5, 6, 7, 8]


def test_alternating_chain_large():
    n = 2000
    net = _copy_chain(n)
    o2 = tuple(i % 2 for i in range(n))
    assert det_dominance(net, (1,) * n, o2)
    assert change_profile(net, (1,) * n, o2)[-1] == n
    # the root cannot climb back to 1
    assert not det_dominance(net, (0,) * n, (1,) + (0,) * (n - 1))


def test_completion_full_net_equals_det():
    s = chain(3)
    for net in all_nets(s)[:8]:
        inc = IncompleteCPNet(s, net.table)
        for o in outcomes(3):
            for o2 in outcomes(3):
                assert completion_dominance_exists(inc, o, o2) == det_dominance(net, o, o2)


def test_completion_all_absent_roots():
    s = Structure(tuple("ABC"), ((),) * 3)
    inc = IncompleteCPNet(s, (None,) * 3)
    assert completion_dominance_exists(inc, (1, 0, 1), (0, 1, 1))
    assert not completion_dominance_exists(inc, (1, 0, 1), (1, 0, 1))


def test_completion_matches_enumeration_random():
    rng = random.Random(21)
    for _ in range(80):
        s = random_forest(rng, rng.randint(2, 6))
        inc = random_incomplete(rng, s, 6)
        o, o2 = random_pair(rng, s.n, 4)
        want = any(entails_oracle(n, o, o2) for n in enumerate_completions(inc))
        assert completion_dominance_exists(inc, o, o2) == want
        if want:
            done = greedy_completion(inc, o, o2)
            assert all(a is None or a == b for a, b in zip(inc.table, done.table))
            assert entails_oracle(done, o, o2)
