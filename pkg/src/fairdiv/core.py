"""Exact-arithmetic primitives: instances, allocations, consumption graphs.

All quantities are ``fractions.Fraction`` so that equality tests (LP optima,
Pareto comparisons, share thresholds) are decidable. Nothing in this package
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union


class FairDivisionError(Exception):
    """Base class for errors raised by this package."""


class InvariantViolation(FairDivisionError):
    """An internal guarantee failed; indicates a bug, not bad input."""


class EnumerationCapExceeded(FairDivisionError):
    """A brute-force search would exceed its configured cap."""


def as_fraction(value: Union[int, Fraction]) -> Fraction:
    """Coerce an int or Fraction to Fraction; reject floats outright."""
    if isinstance(value, float):
        raise ValueError("floats are not exact; pass int, Fraction, or a rational string")
    return Fraction(value)


@dataclass(frozen=True)
class Instance:
    """A fair division instance with additive utilities and agent weights.

    Agents and items are addressed by 0-based index. ``utilities[i][o]`` is
    agent i's value for item o; positive entries are goods for that agent,
    negative entries chores. Weights are entitlements; they are normalized to
    sum to 1 at construction, so only their proportions matter.
    """

    utilities: tuple
    weights: tuple = None

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(v) for v in row) for row in self.utilities)
        if not rows:
            raise ValueError("an instance needs at least one agent")
        m = len(rows[0])
        if any(len(row) != m for row in rows):
            raise ValueError("utility rows must all have the same length")
        if self.weights is None:
            w = tuple(Fraction(1, len(rows)) for _ in rows)
        else:
            w = tuple(as_fraction(v) for v in self.weights)
            if len(w) != len(rows):
                raise ValueError("need exactly one weight per agent")
            if any(v <= 0 for v in w):
                raise ValueError("weights must be strictly positive")
            total = sum(w)
            w = tuple(v / total for v in w)
        object.__setattr__(self, "utilities", rows)
        object.__setattr__(self, "weights", w)

    @property
    def num_agents(self) -> int:
        return len(self.utilities)

    @property
    def num_items(self) -> int:
        return len(self.utilities[0])

    @property
    def agents(self) -> range:
        return range(self.num_agents)

    @property
    def items(self) -> range:
        return range(self.num_items)

    def value(self, agent: int, item: int) -> Fraction:
        return self.utilities[agent][item]

    def total_value(self, agent: int) -> Fraction:
        """Agent's value for the whole item set O."""
        return sum(self.utilities[agent], Fraction(0))


@dataclass(frozen=True)
class FractionalAllocation:
    """A matrix x with x[i][o] in [0, 1] and every column summing to exactly 1."""

    fractions: tuple

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(v) for v in row) for row in self.fractions)
        if not rows:
            raise ValueError("allocation needs at least one agent row")
        m = len(rows[0])
        if any(len(row) != m for row in rows):
            raise ValueError("allocation rows must all have the same length")
        for row in rows:
            for v in row:
                if v < 0 or v > 1:
                    raise ValueError("allocation entries must lie in [0, 1]")
        for o in range(m):
            if sum(row[o] for row in rows) != 1:
                raise ValueError("each item must be fully allocated (column sum 1)")
        object.__setattr__(self, "fractions", rows)

    @property
    def num_agents(self) -> int:
        return len(self.fractions)

    @property
    def num_items(self) -> int:
        return len(self.fractions[0])


@dataclass(frozen=True)
class IntegralAllocation:
    """Each item owned by exactly one agent: ``owners[o]`` is item o's agent."""

    num_agents: int
    owners: tuple

    def __post_init__(self):
        owners = tuple(self.owners)
        if self.num_agents < 1:
            raise ValueError("an allocation needs at least one agent")
        for a in owners:
            if not isinstance(a, int) or not 0 <= a < self.num_agents:
                raise ValueError("every item must be owned by a valid agent index")
        object.__setattr__(self, "owners", owners)

    @property
    def num_items(self) -> int:
        return len(self.owners)

    def bundle(self, agent: int) -> tuple:
        return tuple(o for o, a in enumerate(self.owners) if a == agent)

    def bundles(self) -> tuple:
        out = [[] for _ in range(self.num_agents)]
        for o, a in enumerate(self.owners):
            out[a].append(o)
        return tuple(tuple(b) for b in out)

    def to_fractional(self) -> FractionalAllocation:
        one, zero = Fraction(1), Fraction(0)
        rows = [[zero] * self.num_items for _ in range(self.num_agents)]
        for o, a in enumerate(self.owners):
            rows[a][o] = one
        return FractionalAllocation(tuple(tuple(r) for r in rows))


Allocation = Union[FractionalAllocation, IntegralAllocation]


@dataclass(frozen=True)
class ConsumptionGraph:
    """Bipartite graph on agents and items: an edge means x[i][o] > 0."""

    agent_items: tuple  # per agent, ascending item indices
    item_agents: tuple  # per item, ascending agent indices

    @property
    def num_agents(self) -> int:
        return len(self.agent_items)

    @property
    def num_items(self) -> int:
        return len(self.item_agents)

    def shared_items(self) -> tuple:
        """Items consumed by two or more agents."""
        return tuple(o for o, agents in enumerate(self.item_agents) if len(agents) >= 2)

    def num_edges(self) -> int:
        return sum(len(items) for items in self.agent_items)


@dataclass(frozen=True)
class Cycle:
    """A simple cycle in a consumption graph, as alternating vertices.

    The vertex sequence is agents[0], items[0], agents[1], items[1], ...,
    closing from items[-1] back to agents[0]. Normalized so that agents[0]
    is the lowest agent index on the cycle.
    """

    agents: tuple
    items: tuple

    def edges(self) -> list:
        """(agent, item) pairs in walk order, starting from agents[0]."""
        k = len(self.agents)
        out = []
        for t in range(k):
            out.append((self.agents[t], self.items[t]))
            out.append((self.agents[(t + 1) % k], self.items[t]))
        return out


def _check_shape(instance: Instance, allocation: Allocation) -> None:
    if (allocation.num_agents, allocation.num_items) != (instance.num_agents, instance.num_items):
        raise ValueError("allocation shape does not match instance")


def utility(instance: Instance, allocation: Allocation, agent: int) -> Fraction:
    """Agent's additive utility for its (possibly fractional) bundle."""
    _check_shape(instance, allocation)
    row = instance.utilities[agent]
    if isinstance(allocation, IntegralAllocation):
        return sum((row[o] for o, a in enumerate(allocation.owners) if a == agent), Fraction(0))
    frac = allocation.fractions[agent]
    return sum((row[o] * frac[o] for o in instance.items if frac[o]), Fraction(0))


def utilities(instance: Instance, allocation: Allocation) -> tuple:
    """Utility profile of all agents under the allocation."""
    return tuple(utility(instance, allocation, i) for i in instance.agents)


def proportional_share(instance: Instance, agent: int) -> Fraction:
    """The weighted proportional benchmark b_i * u_i(O)."""
    return instance.weights[agent] * instance.total_value(agent)


def consumption_graph(allocation: Allocation) -> ConsumptionGraph:
    """Build the bipartite consumption graph of an allocation."""
    n, m = allocation.num_agents, allocation.num_items
    agent_items = [[] for _ in range(n)]
    item_agents = [[] for _ in range(m)]
    if isinstance(allocation, IntegralAllocation):
        for o, a in enumerate(allocation.owners):
            agent_items[a].append(o)
            item_agents[o].append(a)
    else:
        for i in range(n):
            row = allocation.fractions[i]
            for o in range(m):
                if row[o]:
                    agent_items[i].append(o)
                    item_agents[o].append(i)
    return ConsumptionGraph(
        tuple(tuple(items) for items in agent_items),
        tuple(tuple(agents) for agents in item_agents),
    )


def find_cycle(graph: ConsumptionGraph) -> Optional[Cycle]:
    """Return a simple cycle of the consumption graph, or None if acyclic.

    Deterministic: depth-first from the lowest-index agent, lowest-index
    neighbor first, so a fixed graph always yields the same cycle. Iterative
    to stay safe on long agent-item chains.
    """
    n = graph.num_agents
    # Vertices: agents are 0..n-1, item o is n+o.
    def neighbors(v: int) -> tuple:
        if v < n:
            return tuple(n + o for o in graph.agent_items[v])
        return graph.item_agents[v - n]

    visited = set()
    for start in range(n):
        if start in visited:
            continue
        path = [start]
        on_path = {start: 0}
        visited.add(start)
        iters = [iter(neighbors(start))]
        parent = [None]
        while iters:
            moved = False
            for w in iters[-1]:
                if w == parent[-1]:
                    continue
                if w in on_path:
                    cyc = path[on_path[w]:]
                    return _as_cycle(cyc, n)
                if w in visited:
                    # finished descendant; its back edge was examined already
                    continue
                visited.add(w)
                on_path[w] = len(path)
                parent.append(path[-1])
                path.append(w)
                iters.append(iter(neighbors(w)))
                moved = True
                break
            if not moved:
                del on_path[path.pop()]
                iters.pop()
                parent.pop()
    return None


def _as_cycle(vertices: list, n: int) -> Cycle:
    # Rotate so the lowest agent index leads; parity then alternates agent/item.
    agent_positions = [k for k, v in enumerate(vertices) if v < n]
    if len(vertices) % 2 or len(vertices) < 4:
        raise InvariantViolation("bipartite cycle must alternate and have length >= 4")
    lead = min(agent_positions, key=lambda k: vertices[k])
    rotated = vertices[lead:] + vertices[:lead]
    agents = tuple(rotated[0::2])
    items = tuple(v - n for v in rotated[1::2])
    if any(v >= n for v in agents) or any(v < 0 for v in items):
        raise InvariantViolation("cycle does not alternate between agents and items")
    return Cycle(agents, items)
