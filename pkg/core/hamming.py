#!/usr/bin/env python3
"""
Hamming Graphs - H(D,n) around the all-zero word and its full bipartite graph
Combinatorics only; the dense matrices are built in core/terwilliger.py
"""

from collections import deque
from math import comb

import numpy as np

from monitoring.telemetry import telemetry
from utils.report_utils import make_verdict


def hamming_distance(u, v):
    """
    Number of coordinates where two words differ

    Args:
        u (sequence): first word
        v (sequence): second word

    Returns:
        int: Hamming distance
    """
    if len(u) != len(v):
        raise ValueError(f"Words must have the same length, got {len(u)} and {len(v)}")
    return sum(1 for a, b in zip(u, v) if a != b)


class HammingSpace:
    """Words of length D over {0,...,n-1}, indexed base-n with the first coordinate most significant"""

    def __init__(self, D, n):
        if not isinstance(D, int) or D < 1:
            raise ValueError(f"D must be an integer >= 1, got {D}")
        if not isinstance(n, int) or n < 3:
            raise ValueError(f"n must be an integer >= 3 (H(D,2) is already bipartite), got {n}")
        self.D = D
        self.n = n
        self.order = n ** D
        self.base = 0

        # digits[y, k] is coordinate k of vertex y
        self.digits = np.array(
            [[(y // n ** (D - 1 - k)) % n for k in range(D)] for y in range(self.order)],
            dtype=np.int64,
        ).reshape(self.order, D)
        self.weights = (self.digits != 0).sum(axis=1)

    def word(self, index):
        if not 0 <= index < self.order:
            raise ValueError(f"Vertex index must be in [0, {self.order}), got {index}")
        return tuple(int(v) for v in self.digits[index])

    def index(self, word):
        if len(word) != self.D or any(not 0 <= letter < self.n for letter in word):
            raise ValueError(f"Word must have {self.D} letters from 0..{self.n - 1}, got {word}")
        value = 0
        for letter in word:
            value = value * self.n + int(letter)
        return value

    def weight(self, index):
        return int(self.weights[index])

    def neighbors(self, index):
        """Neighbours in H(D,n): words differing in exactly one coordinate"""
        word = list(self.word(index))
        result = []
        for k in range(self.D):
            original = word[k]
            for letter in range(self.n):
                if letter != original:
                    word[k] = letter
                    result.append(self.index(word))
            word[k] = original
        return sorted(result)

    def class_sizes(self):
        """Closed form |Gamma_i(x)| = C(D,i)(n-1)^i"""
        return [comb(self.D, i) * (self.n - 1) ** i for i in range(self.D + 1)]

    def __repr__(self):
        return f"HammingSpace(D={self.D}, n={self.n})"


def distance_partition(space):
    """
    Distance classes around the base vertex

    Args:
        space (HammingSpace): the instance

    Returns:
        list: sorted vertex-index lists Gamma_0(x), ..., Gamma_D(x)
    """
    classes = [[] for _ in range(space.D + 1)]
    for y in range(space.order):
        classes[space.weight(y)].append(y)
    return classes


class FullBipartiteGraph:
    """H(D,n) with every edge between equidistant vertices removed"""

    def __init__(self, space):
        self.space = space
        adjacency = {}
        flat = 0
        for y in range(space.order):
            kept = []
            for z in space.neighbors(y):
                if space.weight(z) == space.weight(y):
                    flat += 1
                else:
                    kept.append(z)
            adjacency[y] = tuple(kept)
        self.adjacency = adjacency
        self.edges = frozenset((y, z) for y, row in adjacency.items() for z in row if y < z)
        self.deleted_edges = flat // 2

    def degree(self, y):
        return len(self.adjacency[y])

    def distances_from_base(self):
        """Breadth-first distances from x inside the graph; None marks unreachable vertices"""
        distances = [None] * self.space.order
        distances[self.space.base] = 0
        queue = deque([self.space.base])
        while queue:
            y = queue.popleft()
            for z in self.adjacency[y]:
                if distances[z] is None:
                    distances[z] = distances[y] + 1
                    queue.append(z)
        return distances

    def is_connected(self):
        return all(d is not None for d in self.distances_from_base())

    def is_bipartite(self):
        """Every edge joins the even-weight part to the odd-weight part"""
        weights = self.space.weights
        return all((weights[y] - weights[z]) % 2 for y, z in self.edges)

    def bipartition_sizes(self):
        even = int((self.space.weights % 2 == 0).sum())
        return even, self.space.order - even

    def __repr__(self):
        return f"FullBipartiteGraph(D={self.space.D}, n={self.space.n}, edges={len(self.edges)})"


def full_bipartite(space):
    graph = FullBipartiteGraph(space)
    telemetry.local_function_log("hamming", "Full bipartite graph built", {
        "D": space.D, "n": space.n, "edges": len(graph.edges), "deleted": graph.deleted_edges
    })
    return graph


def _class_counts(space, adjacency, y):
    i = space.weight(y)
    counts = {"a": 0, "b": 0, "c": 0}
    for z in adjacency(y):
        step = space.weight(z) - i
        counts["b" if step == 1 else "c" if step == -1 else "a"] += 1
    return counts


def _constant_counts(space, adjacency, name, identity, expected):
    numbers = {"a": [], "b": [], "c": []}
    for i, members in enumerate(distance_partition(space)):
        first = members[0]
        reference = _class_counts(space, adjacency, first)
        for y in members[1:]:
            counts = _class_counts(space, adjacency, y)
            if counts != reference:
                return make_verdict(name, identity, False, witness={
                    "identity": identity,
                    "class": i,
                    "vertices": [first, y],
                    "counts": [reference, counts],
                })
        for key in numbers:
            numbers[key].append(reference[key])

    for key, values in expected.items():
        if numbers[key] != values:
            i = next(k for k, (got, want) in enumerate(zip(numbers[key], values)) if got != want)
            return make_verdict(name, identity, False, witness={
                "identity": identity,
                "class": i,
                "number": f"{key}_{i}",
                "counted": numbers[key][i],
                "closed_form": values[i],
            })
    return make_verdict(name, identity, True, details=numbers)


def intersection_numbers_around_x(graph):
    """
    Verify the full bipartite graph is distance-regular around x with no flat neighbours

    Args:
        graph (FullBipartiteGraph): the instance

    Returns:
        dict: verdict; details carry a, b, c lists (b_i = (D-i)(n-1), c_i = i, a_i = 0)
    """
    space = graph.space
    D, n = space.D, space.n
    expected = {
        "a": [0] * (D + 1),
        "b": [(D - i) * (n - 1) for i in range(D + 1)],
        "c": list(range(D + 1)),
    }
    return _constant_counts(
        space, graph.adjacency.__getitem__,
        "intersection_numbers", "distance-regular around x with a_i = 0", expected,
    )


def base_intersection_numbers(space):
    """H(D,n) itself around x: a_i = i(n-2), b_i = (D-i)(n-1), c_i = i"""
    D, n = space.D, space.n
    expected = {
        "a": [i * (n - 2) for i in range(D + 1)],
        "b": [(D - i) * (n - 1) for i in range(D + 1)],
        "c": list(range(D + 1)),
    }
    return _constant_counts(
        space, space.neighbors,
        "base_intersection_numbers", "H(D,n) distance-regular around x", expected,
    )


def flat_edge_count(space):
    """
    Count the edges of H(D,n) joining equidistant vertices, by enumeration

    Returns:
        tuple: (enumerated count, closed form sum_i |Gamma_i| * a_i / 2)
    """
    counted = sum(
        1 for y in range(space.order) for z in space.neighbors(y)
        if y < z and space.weight(y) == space.weight(z)
    )
    sizes = space.class_sizes()
    closed_form = sum(size * i * (space.n - 2) for i, size in enumerate(sizes)) // 2
    return counted, closed_form


def export_edge_list(graph):
    """One edge per line as "i j" with i < j, sorted"""
    return "".join(f"{y} {z}\n" for y, z in sorted(graph.edges))
