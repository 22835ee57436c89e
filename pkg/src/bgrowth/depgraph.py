"""Dependency structure of a bilinear system.

The dependency graph has the dimensions as vertices and an edge k -> i
whenever some coefficient c[k][i][j] or c[k][j][i] is nonzero, i.e. when
output k draws on input i.  Strongly connected components, their
reachability order, per-component classification and subsystem extraction
all live here; everything is a pure function over immutable data.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Tuple

from .system import BilinearMap, System


@dataclass(frozen=True)
class DepGraph:
    dim: int
    edges: frozenset  # of (k, i) pairs, 0-based

    def successors(self, k: int) -> tuple:
        return tuple(sorted(i for (a, i) in self.edges if a == k))


def build(system: System) -> DepGraph:
    edges = set()
    for k, i, j, _v in system.map.entries:
        edges.add((k, i))
        edges.add((k, j))
    return DepGraph(system.dim, frozenset(edges))


@dataclass(frozen=True)
class ComponentPoset:
    """Strongly connected components with their strict reachability order.

    components are sorted vertex tuples, listed by smallest vertex.
    order holds pairs (a, b) of component indices with a > b, i.e. some
    vertex of components[a] reaches some vertex of components[b]; it is
    transitively closed.
    """

    components: Tuple[Tuple[int, ...], ...]
    order: frozenset

    def component_of(self, vertex: int) -> int:
        for idx, comp in enumerate(self.components):
            if vertex in comp:
                return idx
        raise IndexError(f"vertex {vertex} not in any component")

    def lower_components(self, idx: int) -> tuple:
        return tuple(sorted(b for (a, b) in self.order if a == idx))

    def longest_chain(self) -> int:
        """Length (edge count) of the longest chain in the component order."""
        depth = {}

        def walk(i):
            if i not in depth:
                below = self.lower_components(i)
                depth[i] = 0 if not below else 1 + max(walk(b) for b in below)
            return depth[i]

        return max((walk(i) for i in range(len(self.components))), default=0)


def components(graph: DepGraph) -> ComponentPoset:
    """Tarjan's algorithm plus the transitive closure of the condensation."""
    index = {}
    low = {}
    onstack = set()
    stack = []
    sccs = []
    counter = [0]

    def connect(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        onstack.add(v)
        for w in graph.successors(v):
            if w not in index:
                connect(w)
                low[v] = min(low[v], low[w])
            elif w in onstack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                onstack.remove(w)
                comp.append(w)
                if w == v:
                    break
            sccs.append(tuple(sorted(comp)))

    for v in range(graph.dim):
        if v not in index:
            connect(v)
    comps = tuple(sorted(sccs))
    comp_of = {v: ci for ci, comp in enumerate(comps) for v in comp}

    direct = set()
    for (k, i) in graph.edges:
        a, b = comp_of[k], comp_of[i]
        if a != b:
            direct.add((a, b))
    # transitive closure over the condensation (dimension is small)
    closure = set(direct)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(closure):
            for (c, d) in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return ComponentPoset(comps, frozenset(closure))


@dataclass(frozen=True)
class ComponentClass:
    """Structural classification of one component.

    internal_triple: some coefficient c[k][i][j] > 0 has k, i, j all in the
    component (indices need not be distinct); this is the hook for the
    explicit supermultiplicative bound.
    half_self_dependent: every positive coefficient of the component's
    vertices uses at least one input from a strictly lower component.
    This is the structural half only; the growth-rate comparison half is
    re-checked with certified bounds in the rate module.
    sink_trivial: some vertex of the component has no coefficients at all.
    """

    internal_triple: bool
    half_self_dependent: bool
    sink_trivial: bool


def classify(system: System, poset: ComponentPoset) -> Tuple[ComponentClass, ...]:
    comp_of = {v: ci for ci, comp in enumerate(poset.components) for v in comp}
    has_coeff = [False] * system.dim
    internal = [False] * len(poset.components)
    for k, i, j, v in system.map.entries:
        if v <= 0:
            continue
        has_coeff[k] = True
        if comp_of[k] == comp_of[i] == comp_of[j]:
            internal[comp_of[k]] = True
    out = []
    for ci, comp in enumerate(poset.components):
        sink = any(not has_coeff[v] for v in comp)
        # an input of k always sits in k's component or a lower one, so
        # "every positive coefficient uses some strictly lower input" is
        # exactly the complement of having an internal triple
        out.append(ComponentClass(internal[ci], not internal[ci], sink))
    return tuple(out)


def subsystem_indices(poset: ComponentPoset, component_index: int) -> Tuple[int, ...]:
    """Original vertex indices kept by the subsystem at this component."""
    kept = set(poset.components[component_index])
    for b in poset.lower_components(component_index):
        kept.update(poset.components[b])
    return tuple(sorted(kept))


def subsystem(system: System, component_index: int, poset: Optional[ComponentPoset] = None) -> System:
    """Restrict the system to a component and everything below it, re-indexed.

    The discarded dimensions cannot influence any kept output (no edge
    from a kept vertex leaves the kept set), so per-coordinate maxima
    computed in the subsystem agree with the full system.
    """
    if poset is None:
        poset = components(build(system))
    if not 0 <= component_index < len(poset.components):
        raise ValueError(f"no component with index {component_index}")
    kept = subsystem_indices(poset, component_index)
    newidx = {v: t for t, v in enumerate(kept)}
    entries = []
    for k, i, j, v in system.map.entries:
        if k in newidx:
            # inputs of a kept output are reachable from it, hence kept
            entries.append((newidx[k], newidx[i], newidx[j], v))
    seed = tuple(system.seed[v] for v in kept)
    return System(BilinearMap(len(kept), entries), seed, system.allow_zero_seed)


def shortest_path(graph: DepGraph, i: int, j: int) -> Optional[int]:
    """Minimal edge count of a directed path i -> j; 0 when i == j.

    The zero-length convention keeps the explicit-constant machinery
    simple; positive self-returns are exposed by shortest_cycle.
    """
    path = shortest_path_vertices(graph, i, j)
    return None if path is None else len(path) - 1


def shortest_path_vertices(graph: DepGraph, i: int, j: int) -> Optional[tuple]:
    """The vertex sequence of one shortest path (smallest successors first)."""
    if not (0 <= i < graph.dim and 0 <= j < graph.dim):
        raise IndexError("vertex out of range")
    if i == j:
        return (i,)
    parent = {i: None}
    queue = deque([i])
    while queue:
        v = queue.popleft()
        for w in graph.successors(v):
            if w not in parent:
                parent[w] = v
                if w == j:
                    path = [w]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return tuple(reversed(path))
                queue.append(w)
    return None


def shortest_cycle(graph: DepGraph, i: int) -> Optional[int]:
    """Length >= 1 of the shortest directed cycle through i, if any."""
    best = None
    for w in graph.successors(i):
        back = shortest_path(graph, w, i)
        if back is not None:
            length = 1 + back
            if best is None or length < best:
                best = length
    return best


def render_dot(system: System, poset: Optional[ComponentPoset] = None) -> str:
    """Graphviz text: components as clusters, classification flags as labels."""
    graph = build(system)
    if poset is None:
        poset = components(graph)
    classes = classify(system, poset)
    lines = ["digraph dependencies {"]
    for ci, comp in enumerate(poset.components):
        cls = classes[ci]
        flags = (
            f"internal_triple={str(cls.internal_triple).lower()} "
            f"half_self_dependent={str(cls.half_self_dependent).lower()} "
            f"sink_trivial={str(cls.sink_trivial).lower()}"
        )
        lines.append(f"  subgraph cluster_{ci} {{")
        lines.append(f'    label="component {ci}: {flags}";')
        for v in comp:
            lines.append(f"    x{v + 1};")
        lines.append("  }")
    for (k, i) in sorted(graph.edges):
        lines.append(f"  x{k + 1} -> x{i + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"
