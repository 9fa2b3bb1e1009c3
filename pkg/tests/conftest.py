from itertools import product
from pathlib import Path

import pytest

from pcpnet import CPNet, PCPNet, Structure

FIXTURES = Path(__file__).parent / "fixtures"


def chain(n, names=None):
    names = names or [chr(ord("A") + i) for i in range(n)]
    return Structure(tuple(names), tuple([()] + [(i - 1,) for i in range(1, n)]))


def outcomes(n):
    return list(product((0, 1), repeat=n))


def all_nets(s):
    return [CPNet(s, t) for t in product((0, 1), repeat=s.n_slots)]


def _canonical(parents, x, children):
    return "(" + "".join(sorted(_canonical(parents, c, children) for c in children[x])) + ")"


def forest_shapes(n):
    """One structure per rooted forest on ``n`` unlabelled nodes."""
    seen, out = set(), []
    for choice in product(*[range(i + 1) for i in range(n)]):
        # choice[i] == i means root, otherwise the parent index
        parents = tuple(() if c == i else (c,) for i, c in enumerate(choice))
        children = [[] for _ in range(n)]
        for i, pa in enumerate(parents):
            for p in pa:
                children[p].append(i)
        key = tuple(sorted(_canonical(parents, r, children) for r in range(n) if not parents[r]))
        if key not in seen:
            seen.add(key)
            out.append(Structure(tuple(f"V{i}" for i in range(n)), parents))
    return out


@pytest.fixture
def chain_ab():
    """A -> B with p(A: 1>0)=0.8, p(A=1 -> B: 1>0)=0.5, p(A=0 -> B: 1>0)=0.4."""
    s = chain(2)
    return PCPNet(s, (0.8, 0.4, 0.5))


@pytest.fixture
def xy_net():
    s = Structure.from_names(["X", "Y"], {"Y": ["X"]})
    return PCPNet(s, (0.1, 0.3, 0.2))


def semantic_mismatches(s, k_max=4):
    """Compare the formulas with path search on every net and outcome pair over ``s``.

    Returns ``(checks, mismatches)``: change_k against bounded change counting
    for every variable and ``k <= k_max``, and the leaf conjunction against
    reachability.
    """
    from pcpnet import entails_oracle
    from pcpnet.formulas import FormulaBuilder, change_values
    from pcpnet.oracle import change_counts

    nets = all_nets(s)
    outs = outcomes(s.n)
    scope = [s.ancestors(x) + [x] for x in range(s.n)]
    counts = {
        (i, o, x): change_counts(net, o, x, k_max) for i, net in enumerate(nets) for o in outs for x in range(s.n)
    }
    checks = bad = 0
    for o in outs:
        for o2 in outs:
            b = FormulaBuilder(s, o, o2)
            for x in range(s.n):
                for k in range(k_max + 1):
                    b.change(x, k)
            leaves = [b.worsen(x) for x in s.leaves()]
            leaf_keys = [(node.var, node.k) for node in leaves]
            for i, net in enumerate(nets):
                vals = change_values(b, net.table)
                for x in range(s.n):
                    got = counts[(i, o, x)].get(tuple(o2[y] for y in scope[x]), -1)
                    for k in range(k_max + 1):
                        checks += 1
                        bad += vals[(x, k)] != (got >= k)
                reach = entails_oracle(net, o, o2)
                checks += 1
                bad += (o != o2 and all(vals[key] for key in leaf_keys)) != reach
    return checks, bad


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
