#!/usr/bin/env python3
"""
Terwilliger Context - A, A*, L, F, R and the dual idempotents of the full bipartite graph
Structural verifiers: dual idempotent blocks, uniform relation, tridiagonal relation, walk counts
"""

import itertools
import re
from fractions import Fraction

import numpy as np

from core.errors import ConsistencyError, ConstructionError
from core.exact_matrix import ExactMatrix
from core.qnum import normalize_radicand
from monitoring.telemetry import telemetry
from utils.report_utils import make_verdict

SHAPE_PATTERN = re.compile(r"^[lfr]+$")
MATRIX_NAME_PATTERN = re.compile(r"^(A|Astar|L|R|F|Estar(\d+))$")

# Pair distance classes in the full bipartite graph; 4 stands for "4 or more"
FAR = 4


class TerwilligerContext:
    """The matrices of T(x) for one (D, n), with cached powers of A and shaped walk products"""

    def __init__(self, graph, A, Astar, L, R, F, dual_idempotents, theta_star, s, m):
        self.graph = graph
        self.space = graph.space
        self.D = graph.space.D
        self.n = graph.space.n
        self.order = graph.space.order
        self.weights = graph.space.weights
        self.A = A
        self.Astar = Astar
        self.L = L
        self.R = R
        self.F = F
        self.dual_idempotents = dual_idempotents
        self.theta_star = theta_star
        self.s = s
        self.m = m
        self.identity = ExactMatrix.identity(self.order, m)
        self._powers = [self.identity, A]
        self._shapes = {"": self.identity}
        self._pair_distances = None

    def power(self, k):
        """A^k, each power computed once"""
        while len(self._powers) <= k:
            self._powers.append(self._powers[-1] @ self.A)
        return self._powers[k]

    def step_matrix(self, letter):
        return {"l": self.L, "f": self.F, "r": self.R}[letter]

    def shape_matrix(self, shape):
        """
        Matrix counting walks of a shape; the string lists steps in walk order from y

        "llr" is R @ L @ L, whose (z, y) entry counts walks y -l-> -l-> -r-> z.
        """
        if shape not in self._shapes:
            self._shapes[shape] = self.step_matrix(shape[-1]) @ self.shape_matrix(shape[:-1])
        return self._shapes[shape]

    def pair_distances(self):
        """Distance classes 0..3 of every vertex pair in the graph, FAR beyond that"""
        if self._pair_distances is None:
            distances = np.full((self.order, self.order), FAR, dtype=np.int8)
            for k in (3, 2, 1):
                distances[self.power(k).nonzero_mask()] = k
            np.fill_diagonal(distances, 0)
            self._pair_distances = distances
        return self._pair_distances

    def right_astar(self, matrix):
        """matrix @ A*"""
        return matrix.sandwich(self.identity, self.Astar)

    def left_astar(self, matrix):
        """A* @ matrix"""
        return matrix.sandwich(self.Astar, self.identity)

    def named_matrix(self, name):
        """A, Astar, L, R, F or Estar<i> by name"""
        match = MATRIX_NAME_PATTERN.match(name)
        if not match:
            raise ValueError(f"Unknown matrix '{name}'; expected A, Astar, L, R, F or Estar<i>")
        if match.group(2) is not None:
            i = int(match.group(2))
            if i > self.D:
                raise ValueError(f"Estar index must be in 0..{self.D}, got {i}")
            return self.dual_idempotents[i]
        return {"A": self.A, "Astar": self.Astar, "L": self.L, "R": self.R, "F": self.F}[name]

    def __repr__(self):
        return f"TerwilligerContext(D={self.D}, n={self.n}, m={self.m})"


def _require(condition, identity, details=None):
    if not condition:
        raise ConstructionError(identity, details)


def build_context(graph):
    """
    Build A, A*, L, F, R and E*_0..E*_D, verifying the construction identities

    Args:
        graph (FullBipartiteGraph): connected bipartite graph from core.hamming

    Returns:
        TerwilligerContext: the verified bundle
    """
    space = graph.space
    D, n, order = space.D, space.n, space.order
    s, m = normalize_radicand(n - 1)
    weights = space.weights

    _require(graph.is_connected(), "full bipartite graph is connected")
    _require(graph.is_bipartite(), "full bipartite graph is bipartite")

    adjacency = np.zeros((order, order), dtype=np.int64)
    for y, row in graph.adjacency.items():
        adjacency[list(row), y] = 1
    A = ExactMatrix(adjacency, m=m)
    _require(A.is_symmetric(), "A is symmetric")
    _require(not np.diagonal(adjacency).any(), "A has zero diagonal")

    theta_star = [D * (n - 1) - n * i for i in range(D + 1)]
    _require(len(set(theta_star)) == D + 1, "theta*_i pairwise distinct", {"theta_star": theta_star})

    dual = [ExactMatrix.from_integers(np.diag((weights == i).astype(np.int64)), m) for i in range(D + 1)]
    identity = ExactMatrix.identity(order, m)
    total = dual[0]
    for E in dual[1:]:
        total = total + E
    _require(total == identity, "sum of E*_i = I")
    for i, j in itertools.product(range(D + 1), repeat=2):
        product = dual[j].sandwich(dual[i], identity)
        expected = dual[i] if i == j else ExactMatrix.zeros(order, m)
        _require(product == expected, "E*_i E*_j = delta_ij E*_i", {"i": i, "j": j})

    Astar = ExactMatrix.diagonal([theta_star[int(w)] for w in weights], m)

    zero = ExactMatrix.zeros(order, m)
    L, R, F = zero, zero, zero
    for i in range(D + 1):
        F = F + A.sandwich(dual[i], dual[i])
        if i > 0:
            L = L + A.sandwich(dual[i - 1], dual[i])
        if i < D:
            R = R + A.sandwich(dual[i + 1], dual[i])

    _require(F.is_zero(), "F = 0", {"entry": F.first_nonzero()})
    _require(L + R == A, "A = L + R", {"entry": (L + R).first_difference(A)})
    _require(L.T == R, "R = L^T", {"entry": L.T.first_difference(R)})

    telemetry.local_function_log("terwilliger", "Context built", {
        "D": D, "n": n, "order": order, "m": m, "s": s, "theta_star": theta_star
    })
    return TerwilligerContext(graph, A, Astar, L, R, F, dual, theta_star, s, m)


def _matrix_verdict(name, identity, lhs, rhs, details=None):
    position = lhs.first_difference(rhs)
    if position is None:
        return make_verdict(name, identity, True, details=details)
    z, y = position
    return make_verdict(name, identity, False, witness={
        "identity": identity,
        "entry": [z, y],
        "lhs": str(lhs.entry(z, y)),
        "rhs": str(rhs.entry(z, y)),
    }, details=details)


def dual_idempotent_block(ctx, i, j):
    """E*_i A E*_j"""
    if not (0 <= i <= ctx.D and 0 <= j <= ctx.D):
        raise ValueError(f"Block indices must be in 0..{ctx.D}, got ({i}, {j})")
    return ctx.A.sandwich(ctx.dual_idempotents[i], ctx.dual_idempotents[j])


def verify_dual_idempotent_block(ctx):
    """E*_i A E*_j = 0 for |i - j| != 1; the diagonal blocks vanish because F = 0"""
    identity = "E*_i A E*_j = 0 unless |i - j| = 1"
    nonzero = []
    for i, j in itertools.product(range(ctx.D + 1), repeat=2):
        block = dual_idempotent_block(ctx, i, j)
        if abs(i - j) == 1:
            if not block.is_zero():
                nonzero.append([i, j])
            continue
        if not block.is_zero():
            z, y = block.first_nonzero()
            return make_verdict("dual_idempotent_blocks", identity, False, witness={
                "identity": identity, "block": [i, j], "entry": [z, y], "value": str(block.entry(z, y)),
            })
    return make_verdict("dual_idempotent_blocks", identity, True, details={"nonzero_blocks": nonzero})


def verify_uniform(ctx):
    """-1/2 R L^2 + L R L - 1/2 L^2 R = (n - 1) L"""
    half = Fraction(-1, 2)
    lhs = ctx.shape_matrix("llr") * half + ctx.shape_matrix("lrl") + ctx.shape_matrix("rll") * half
    rhs = ctx.L * (ctx.n - 1)
    return _matrix_verdict("uniform", "-1/2 RL^2 + LRL - 1/2 L^2R = (n-1)L", lhs, rhs)


def tridiagonal_sides(ctx):
    """Both sides of A^3A* - A*A^3 + 3(AA*A^2 - A^2A*A) = 4(n-1)(AA* - A*A)"""
    A, A2, A3 = ctx.A, ctx.power(2), ctx.power(3)
    cubic = ctx.right_astar(A3) - ctx.left_astar(A3)
    mixed = ctx.right_astar(A) @ A2 - ctx.right_astar(A2) @ A
    lhs = cubic + mixed * 3
    rhs = (ctx.right_astar(A) - ctx.left_astar(A)) * (4 * (ctx.n - 1))
    return lhs, rhs


def verify_tridiagonal(ctx):
    identity = "A^3A* - A*A^3 + 3(AA*A^2 - A^2A*A) = 4(n-1)(AA* - A*A)"
    lhs, rhs = tridiagonal_sides(ctx)
    distances = ctx.pair_distances()
    allowed = (distances == 1) | (distances == 3)
    outside = {
        side: int((matrix.nonzero_mask() & ~allowed).sum())
        for side, matrix in (("lhs", lhs), ("rhs", rhs))
    }
    verdict = _matrix_verdict("tridiagonal", identity, lhs, rhs, details={
        "nonzero_entries": lhs.nonzero_count(),
        "nonzero_outside_distance_1_or_3": outside,
    })
    if verdict["verdict"] == "pass" and any(outside.values()):
        return make_verdict("tridiagonal", identity, False, witness={
            "identity": "both sides vanish unless the pair is at distance 1 or 3",
            "nonzero_outside_distance_1_or_3": outside,
        })
    return verdict


def _validate_shape(shape):
    if not isinstance(shape, str) or not SHAPE_PATTERN.match(shape):
        raise ValueError(f"Shape must be a nonempty string over l, f, r; got {shape!r}")


def enumerate_shaped_walks(ctx, shape, y):
    """
    Count walks from y following a shape by explicit enumeration of the graph

    Returns:
        dict: endpoint z -> number of walks
    """
    _validate_shape(shape)
    step = {"l": -1, "f": 0, "r": 1}
    counts = {}

    def walk(vertex, depth):
        if depth == len(shape):
            counts[vertex] = counts.get(vertex, 0) + 1
            return
        level = ctx.space.weight(vertex) + step[shape[depth]]
        for nxt in ctx.graph.adjacency[vertex]:
            if ctx.space.weight(nxt) == level:
                walk(nxt, depth + 1)

    walk(y, 0)
    return counts


def shape_walk_count(ctx, shape, y, z):
    """
    Shaped walk count from y to z, computed from matrix products and by enumeration

    Returns:
        tuple: (matrix entry, enumerated count); they always agree
    """
    _validate_shape(shape)
    for vertex in (y, z):
        if not 0 <= vertex < ctx.order:
            raise ValueError(f"Vertex must be in [0, {ctx.order}), got {vertex}")

    vector = np.zeros(ctx.order, dtype=object)
    vector[y] = 1
    for letter in shape:
        matrix = ctx.step_matrix(letter)
        vector = matrix.a.astype(object) @ vector
    matrix_count = int(vector[z])
    walk_count = enumerate_shaped_walks(ctx, shape, y).get(z, 0)
    if matrix_count != walk_count:
        raise ConsistencyError(
            f"Shape '{shape}' from {y} to {z}: matrix gives {matrix_count}, enumeration gives {walk_count}",
            {"shape": shape, "y": y, "z": z},
        )
    return matrix_count, walk_count


def verify_walk_oracle(ctx, max_length=4):
    """Every shape up to max_length, every vertex pair: matrix entry equals enumerated walk count"""
    identity = "shaped walk count equals the matching matrix product entry"
    shapes = ["".join(p) for k in range(1, max_length + 1) for p in itertools.product("lfr", repeat=k)]
    for shape in shapes:
        matrix = ctx.shape_matrix(shape)
        for y in range(ctx.order):
            counts = enumerate_shaped_walks(ctx, shape, y)
            column = matrix.a[:, y]
            for z in range(ctx.order):
                if int(column[z]) != counts.get(z, 0):
                    return make_verdict("walk_oracle", identity, False, witness={
                        "identity": identity, "shape": shape, "pair": [z, y],
                        "matrix": int(column[z]), "walks": counts.get(z, 0),
                    })
    return make_verdict("walk_oracle", identity, True, details={
        "shapes": len(shapes), "pairs": ctx.order * ctx.order, "max_length": max_length,
    })


def verify_tridiagonal_entrywise(ctx):
    """
    Re-derive the tridiagonal relation from walk counts a = llr, b = lrl, c = rll

    For every pair with level(z) = level(y) - 1 the relation reduces to
    n(2a - 4b + 2c) = -4n(n-1) when z ~ y and 0 otherwise; pairs three levels
    apart at distance 3 carry exactly 6 walks of length 3.
    """
    identity = "-1/2 a + b - 1/2 c = n-1 if z ~ y, else 0"
    n = ctx.n
    a = ctx.shape_matrix("llr").a
    b = ctx.shape_matrix("lrl").a
    c = ctx.shape_matrix("rll").a
    adjacent = ctx.A.a != 0
    distances = ctx.pair_distances()
    levels = ctx.weights

    one_down = levels[:, None] == levels[None, :] - 1
    lhs = n * (2 * a - 4 * b + 2 * c)
    expected = np.where(adjacent, -4 * n * (n - 1), 0)
    bad = np.argwhere(one_down & (lhs != expected))
    if len(bad):
        z, y = (int(v) for v in bad[0])
        av, bv, cv = int(a[z, y]), int(b[z, y]), int(c[z, y])
        return make_verdict("tridiagonal_entrywise", identity, False, witness={
            "identity": identity, "pair": [z, y], "distance": int(distances[z, y]),
            "a": av, "b": bv, "c": cv,
            "value": str(Fraction(-av, 2) + bv - Fraction(cv, 2)),
            "expected": (n - 1) if adjacent[z, y] else 0,
        })

    three_down = (levels[:, None] == levels[None, :] - 3) & (distances == 3)
    walks3 = ctx.power(3).a
    bad = np.argwhere(three_down & (walks3 != 6))
    if len(bad):
        z, y = (int(v) for v in bad[0])
        return make_verdict("tridiagonal_entrywise", identity, False, witness={
            "identity": "six walks of length 3 between pairs three levels apart",
            "pair": [z, y], "walks": int(walks3[z, y]),
        })

    return make_verdict("tridiagonal_entrywise", identity, True, details={
        "pairs_one_level_apart": int(one_down.sum()),
        "adjacent_pairs": int((one_down & adjacent).sum()),
        "distance_3_pairs": int((one_down & (distances == 3)).sum()),
        "pairs_three_levels_apart": int(three_down.sum()),
    })


def verify_entry_lemma(ctx):
    """
    Check entries of A^3A* - A*A^3, AA*A^2 - A^2A*A and AA* - A*A against an
    explicit enumeration of all walks [y, v, w, z] of length 3
    """
    identity = "3-walk entry formulas for the tridiagonal relation terms"
    star = [ctx.theta_star[int(w)] for w in ctx.weights]
    A, A2, A3 = ctx.A, ctx.power(2), ctx.power(3)
    cubic = (ctx.right_astar(A3) - ctx.left_astar(A3)).a
    mixed = (ctx.right_astar(A) @ A2 - ctx.right_astar(A2) @ A).a
    linear = (ctx.right_astar(A) - ctx.left_astar(A)).a
    adjacency = ctx.graph.adjacency

    for y in range(ctx.order):
        walks, drift = {}, {}
        for v in adjacency[y]:
            for w in adjacency[v]:
                for z in adjacency[w]:
                    walks[z] = walks.get(z, 0) + 1
                    drift[z] = drift.get(z, 0) + star[w] - star[v]
        for z in range(ctx.order):
            terms = {
                "cubic": (int(cubic[z, y]), walks.get(z, 0) * (star[y] - star[z])),
                "mixed": (int(mixed[z, y]), drift.get(z, 0)),
                "linear": (int(linear[z, y]), (star[y] - star[z]) if z in adjacency[y] else 0),
            }
            for term, (matrix_value, walk_value) in terms.items():
                if matrix_value != walk_value:
                    return make_verdict("entry_lemma", identity, False, witness={
                        "identity": identity, "term": term, "pair": [z, y],
                        "matrix": matrix_value, "walks": walk_value,
                    })
    return make_verdict("entry_lemma", identity, True, details={"pairs": ctx.order * ctx.order})


def verify_level_action(ctx):
    """L lowers and R raises the level of every basis vector; A1 is the degree vector; A* = sum theta*_i E*_i"""
    identity = "L E*_i V in E*_(i-1) V, R E*_i V in E*_(i+1) V, A* = sum theta*_i E*_i"
    levels = ctx.weights
    for name, matrix, step in (("L", ctx.L, -1), ("R", ctx.R, 1)):
        bad = np.argwhere(matrix.nonzero_mask() & (levels[:, None] != levels[None, :] + step))
        if len(bad):
            z, y = (int(v) for v in bad[0])
            return make_verdict("level_action", identity, False, witness={
                "identity": f"{name} moves level by {step}", "basis_vector": y, "target": z,
            })

    degrees = ctx.A.a.sum(axis=1)
    for y in range(ctx.order):
        if int(degrees[y]) != ctx.graph.degree(y):
            return make_verdict("level_action", identity, False, witness={
                "identity": "A1 equals the degree vector", "vertex": y,
                "row_sum": int(degrees[y]), "degree": ctx.graph.degree(y),
            })

    rebuilt = ExactMatrix.zeros(ctx.order, ctx.m)
    for theta, E in zip(ctx.theta_star, ctx.dual_idempotents):
        rebuilt = rebuilt + E * theta
    if rebuilt != ctx.Astar:
        return _matrix_verdict("level_action", "A* = sum theta*_i E*_i", ctx.Astar, rebuilt)

    for i, (theta, E) in enumerate(zip(ctx.theta_star, ctx.dual_idempotents)):
        scaled = E * theta
        if ctx.right_astar(E) != scaled or ctx.left_astar(E) != scaled:
            return make_verdict("level_action", identity, False, witness={
                "identity": "A*E*_i = theta*_i E*_i = E*_i A*", "i": i,
            })
    return make_verdict("level_action", identity, True)
