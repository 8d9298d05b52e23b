"""Independent oracles and generators used across the test suite.

Everything here is deliberately written from first principles (union-find,
Gaussian elimination, vertex enumeration, naive allocation scans) so tests
never certify library code with the library's own machinery.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from fairdiv.core import (
    ConsumptionGraph,
    FractionalAllocation,
    Instance,
    IntegralAllocation,
)

F = Fraction


# ---------------------------------------------------------------------------
# canonical instances
#
# goods_blocks: one big good A plus two blocks of identical small goods; the
# utilitarian optimum conflicts with proportionality, so it separates PROP1
# from plain welfare maximization. chores_blocks is its mirror with chores.
# identical_items admits no PROPX allocation at all.


def goods_blocks_instance() -> Instance:
    rows = (
        (F(3, 10),) + (F(1, 50),) * 10 + (F(1, 40),) * 20,
        (F(17, 50),) + (F(2, 125),) * 10 + (F(1, 40),) * 20,
        (F(4, 25),) + (F(1, 20),) * 10 + (F(17, 1000),) * 20,
    )
    return Instance(rows)


# owners over item order (A, b1..b10, c1..c20)
GOODS_BLOCKS_X = IntegralAllocation(3, (1,) + (0,) * 10 + (2,) * 20)
GOODS_BLOCKS_Y = IntegralAllocation(3, (0,) + (2,) * 10 + (1,) * 20)


def chores_blocks_instance() -> Instance:
    rows = (
        (F(-1, 25),) * 10 + (F(-1, 2), F(-1, 10)),
        (F(-3, 100),) * 10 + (F(-3, 5), F(-1, 10)),
        (F(-3, 50),) * 10 + (F(-1, 10), F(-3, 10)),
    )
    return Instance(rows)


# owners over item order (a1..a10, B, C)
CHORES_BLOCKS_X = IntegralAllocation(3, (1,) * 10 + (0, 2))
CHORES_BLOCKS_Y = IntegralAllocation(3, (0,) * 10 + (2, 1))


def identical_items_instance() -> Instance:
    return Instance(((3, 3, 3, 3, 1),) * 3)


IDENTICAL_ITEMS_BALANCED = IntegralAllocation(3, (0, 0, 2, 1, 1))


def forest_fixture():
    """Five agents, items a..h, sharing forest with two trees.

    Tree one: 2 - a - 1 - {b, c - 5 - h}, plus d hanging off agent 2.
    Tree two: 3 - {e, f - 4, g}. Shared items are a (agents 1,2), c (1,5)
    and f (3,4), each split half-half; sharers agree in sign everywhere.
    Returns (instance, allocation, default_owners, forced_roots_owners),
    owners over item order a..h with 0-based agents.
    """
    signs = (
        (+1, +1, -1, +1, -1, +1, +1, +1),
        (+1, -1, -1, +1, -1, +1, +1, +1),
        (+1, +1, -1, -1, -1, +1, +1, -1),
        (-1, +1, -1, -1, -1, +1, +1, -1),
        (-1, -1, -1, +1, -1, -1, +1, +1),
    )
    instance = Instance(signs)
    h = F(1, 2)
    z = F(0)
    rows = (
        (h, 1, h, z, z, z, z, z),
        (h, z, z, 1, z, z, z, z),
        (z, z, z, z, 1, h, 1, z),
        (z, z, z, z, z, h, z, z),
        (z, z, h, z, z, z, z, 1),
    )
    allocation = FractionalAllocation(rows)
    default_owners = (1, 0, 4, 1, 2, 2, 2, 4)
    forced_owners = (0, 0, 4, 1, 2, 3, 2, 4)
    return instance, allocation, default_owners, forced_owners


# ---------------------------------------------------------------------------
# random generators


def rand_instance(rng: random.Random, n: int, m: int, lo: int = -5, hi: int = 5,
                  weight_mode: str = "equal") -> Instance:
    utilities = [[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)]
    if weight_mode == "equal":
        weights = None
    elif weight_mode == "random":
        weights = [Fraction(rng.randint(1, 20)) for _ in range(n)]
    else:
        raise ValueError(weight_mode)
    return Instance(utilities, weights)


def rand_fractional(rng: random.Random, n: int, m: int) -> FractionalAllocation:
    """Random allocation: each item split over a random nonempty agent subset."""
    rows = [[Fraction(0)] * m for _ in range(n)]
    for o in range(m):
        k = rng.randint(1, n)
        consumers = rng.sample(range(n), k)
        parts = [rng.randint(1, 5) for _ in consumers]
        total = sum(parts)
        for i, p in zip(consumers, parts):
            rows[i][o] = Fraction(p, total)
    return FractionalAllocation(tuple(tuple(r) for r in rows))


def rand_lp(rng: random.Random):
    """Random bounded feasible LP: a box plus a few rows satisfied at the origin.

    The origin is feasible by construction (<= rows get nonnegative rhs,
    >= rows nonpositive rhs, = rows zero rhs) and the box keeps the region
    bounded, so vertex enumeration is a complete oracle. Zero right-hand
    sides make the origin degenerate, which stresses anti-cycling.
    """
    from fairdiv.lp import LpProblem

    k = rng.randint(1, 4)
    cons = []
    for v in range(k):
        unit = [Fraction(1) if j == v else Fraction(0) for j in range(k)]
        cons.append((unit, "<=", Fraction(rng.randint(1, 6))))
    for _ in range(rng.randint(0, 6 - k)):
        coeffs = [Fraction(rng.randint(-4, 4)) for _ in range(k)]
        rel = rng.choice(["<=", ">=", "="])
        if rel == "<=":
            rhs = Fraction(rng.randint(0, 8))
        elif rel == ">=":
            rhs = Fraction(-rng.randint(0, 8))
        else:
            rhs = Fraction(0)
        cons.append((coeffs, rel, rhs))
    objective = [Fraction(rng.randint(-5, 5)) for _ in range(k)]
    return LpProblem(k, tuple(objective), tuple(cons))


def blend(x: FractionalAllocation, y: FractionalAllocation, theta: Fraction) -> FractionalAllocation:
    rows = tuple(
        tuple(theta * a + (1 - theta) * b for a, b in zip(xr, yr))
        for xr, yr in zip(x.fractions, y.fractions)
    )
    return FractionalAllocation(rows)


# ---------------------------------------------------------------------------
# graph oracle


def union_find_is_forest(graph: ConsumptionGraph) -> bool:
    """Acyclicity by union-find, independent of any DFS."""
    n = graph.num_agents
    parent = list(range(n + graph.num_items))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, items in enumerate(graph.agent_items):
        for o in items:
            ri, ro = find(i), find(n + o)
            if ri == ro:
                return False
            parent[ri] = ro
    return True


# ---------------------------------------------------------------------------
# exact linear algebra


def solve_square(matrix: list, rhs: list):
    """Solve A x = b exactly by Gaussian elimination; None if singular."""
    k = len(matrix)
    aug = [list(row) + [rhs[r]] for r, row in enumerate(matrix)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][-1] for r in range(k)]


def matrix_rank(rows: list) -> int:
    """Rank of a rational matrix, by elimination."""
    work = [list(r) for r in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = Fraction(1) / work[rank][col]
        work[rank] = [v * inv for v in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [a - f * b for a, b in zip(work[r], work[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# LP oracle: exhaustive vertex enumeration


def vertex_enumeration_optimum(problem):
    """Optimal value and argmax vertex of a bounded feasible LP, by brute force.

    Every vertex of the feasible region is the unique solution of some
    square system of tight constraints, so enumerating all k-subsets of
    {constraint rows} union {nonnegativity rows}, solving each exactly and
    filtering by feasibility visits every vertex. Returns (value, point)
    maximizing the objective, or None when no vertex is feasible. Only
    sensible for small problems; intended as an oracle for the simplex.
    """
    k = problem.num_vars
    candidates = [(list(coeffs), rhs) for coeffs, _, rhs in problem.constraints]
    candidates += [([Fraction(1) if j == v else Fraction(0) for j in range(k)], Fraction(0))
                   for v in range(k)]
    best = None
    seen = set()
    for chosen in itertools.combinations(candidates, k):
        point = solve_square([c for c, _ in chosen], [b for _, b in chosen])
        if point is None:
            continue
        key = tuple(point)
        if key in seen:
            continue
        seen.add(key)
        if not _feasible(problem, point):
            continue
        value = sum(c * x for c, x in zip(problem.objective, point))
        if best is None or value > best[0]:
            best = (value, tuple(point))
    return best


def _feasible(problem, point) -> bool:
    if any(x < 0 for x in point):
        return False
    for coeffs, rel, rhs in problem.constraints:
        lhs = sum(c * x for c, x in zip(coeffs, point))
        if rel == "<=" and lhs > rhs:
            return False
        if rel == ">=" and lhs < rhs:
            return False
        if rel == "=" and lhs != rhs:
            return False
    return True


def is_vertex(problem, point) -> bool:
    """Tight-constraint rank check: the point is an extreme point iff the
    active constraint normals span the full variable space."""
    k = problem.num_vars
    if k == 0:
        return True
    tight = []
    for coeffs, rel, rhs in problem.constraints:
        lhs = sum(c * x for c, x in zip(coeffs, point))
        if rel == "=" or lhs == rhs:
            tight.append(list(coeffs))
    for v in range(k):
        if point[v] == 0:
            tight.append([Fraction(1) if j == v else Fraction(0) for j in range(k)])
    if not tight:
        return False
    return matrix_rank(tight) == k
