"""Small digraph utilities over adjacency mappings ``{vertex: iterable of successors}``."""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Mapping, TypeVar

T = TypeVar("T", bound=Hashable)


def strongly_connected_components(vertices: Iterable[T],
                                  edges: Mapping[T, Iterable[T]]) -> list[list[T]]:
    """Tarjan's algorithm, iterative.

    Components come out in reverse topological order: every component appears
    after all components reachable from it.  Vertices inside a component keep
    their order in ``vertices``.
    """
    order = {v: i for i, v in enumerate(vertices)}
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    result: list[list[T]] = []
    counter = 0
    for root in order:
        if root in index:
            continue
        work = [(root, iter(edges.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(edges.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comp.sort(key=order.__getitem__)
                result.append(comp)
    return result


def reachable(edges: Mapping[T, Iterable[T]], sources: Iterable[T]) -> set:
    seen = set(sources)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in edges.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def find_path(edges: Mapping[T, Iterable[T]], sources: Iterable[T], targets) -> list | None:
    """Shortest path (as a vertex list) from some source to some target, or None."""
    targets = set(targets)
    parent: dict = {}
    queue = deque()
    for s in sources:
        if s not in parent:
            parent[s] = None
            queue.append(s)
    while queue:
        v = queue.popleft()
        if v in targets:
            path = [v]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in edges.get(v, ()):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return None
