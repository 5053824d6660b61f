import random
from itertools import product

import pytest

from tdikit.geometry import Problem, ProblemError
from tdikit.hilbert import is_hilbert_basis
from tdikit.setpacking import Graph, build_system

# The six cliques of the worked example (0-based vertices), in the order a..f.
CHORDAL10_CLIQUES = [(0, 1), (1, 2, 4), (1, 3, 5), (1, 4, 5, 8), (4, 5, 6, 9), (6, 7)]


def random_problems(seed, count, dmax=3, nmax=6, entries=2, hilbert=False, cost="nonneg", accept=None):
    """Seeded stream of valid problems with small integer data.

    cost="nonneg" draws c >= 0; cost="mixed" draws c = y0 A + r with r >= 0,
    so Q_c is nonempty while c may have negative entries.
    """
    rng = random.Random(seed)
    made = 0
    while made < count:
        d = rng.randint(1, dmax)
        n = rng.randint(d, nmax)
        A = [[rng.randint(-entries, entries) for _ in range(n)] for _ in range(d)]
        if any(all(A[i][j] == 0 for i in range(d)) for j in range(n)):
            continue
        if cost == "nonneg":
            c = [rng.randint(0, 3) for _ in range(n)]
        else:
            y0 = [rng.randint(-1, 1) for _ in range(d)]
            c = [sum(y0[i] * A[i][j] for i in range(d)) + rng.randint(0, 3) for j in range(n)]
        try:
            p = Problem(A, c)
        except ProblemError:
            continue
        if hilbert and not is_hilbert_basis(p.A).is_basis:
            continue
        if accept is not None and not accept(p):
            continue
        made += 1
        yield p


def box_ip(p, b, box):
    """min c x over x in {0..box}^n with A x = b (None if nothing in the box)."""
    best = None
    cols = p.columns
    for x in product(range(box + 1), repeat=p.n):
        if all(sum(cols[j][i] * x[j] for j in range(p.n)) == b[i] for i in range(p.d)):
            v = sum(p.c[j] * x[j] for j in range(p.n))
            if best is None or v < best:
                best = v
    return best


@pytest.fixture(scope="session")
def chordal10():
    return build_system(Graph.from_cliques(10, CHORDAL10_CLIQUES))


@pytest.fixture(scope="session")
def triangle_wheel():
    return Problem([[1, 0, -1], [0, 1, -1]], [1, 1, 1])


def random_bipartite(rng, d, density=0.5):
    """Random bipartite graph on d vertices (sides split at random)."""
    side = [rng.random() < 0.5 for _ in range(d)]
    edges = [(u, v) for u in range(d) for v in range(u + 1, d) if side[u] != side[v] and rng.random() < density]
    return Graph(d, edges)


def random_chordal(rng, d):
    """Each new vertex joins a clique of the graph built so far, so the
    insertion order reversed is a perfect elimination ordering."""
    adj = {0: set()}
    edges = []
    for v in range(1, d):
        u = rng.randrange(v)
        clique = {u}
        for w in sorted(adj[u]):
            if w < v and all(w in adj[x] for x in clique) and rng.random() < 0.6:
                clique.add(w)
        if rng.random() < 0.15:
            clique = set()
        adj[v] = set(clique)
        for w in clique:
            adj[w].add(v)
            edges.append((w, v))
    return Graph(d, edges)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
