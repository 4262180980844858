#!/usr/bin/env python3
"""
Spectral Structure - Exact primitive idempotents of A and the Q-polynomial checks
Idempotents are Lagrange polynomials in A, so every E_i lives in Q(sqrt(m))
"""

import itertools

import numpy as np

from core.exact_matrix import ExactMatrix, solve_rational
from core.qnum import QuadPolynomial, QuadScalar
from monitoring.telemetry import telemetry
from utils.report_utils import make_verdict

FLOAT_TOLERANCE = 1e-9


class SpectralData:
    """Eigenvalues theta_i = sqrt(n-1)(D-i), their idempotents E_i and multiplicities m_i = trace(E_i)"""

    def __init__(self, eigenvalues, coefficients, idempotents, multiplicities, verdict):
        self.eigenvalues = eigenvalues
        self.coefficients = coefficients
        self.idempotents = idempotents
        self.multiplicities = multiplicities
        self.verdict = verdict
        self.block_zero = None

    @property
    def count(self):
        return len(self.eigenvalues)

    def __repr__(self):
        return f"SpectralData(eigenvalues={[str(t) for t in self.eigenvalues]}, multiplicities={self.multiplicities})"


def eigenvalues(D, n):
    """
    theta_i = sqrt(n-1)(D-i) for 0 <= i <= 2D

    Returns:
        tuple: (list of QuadScalar, list of integer c_i with theta_i = c_i*sqrt(m))
    """
    root = QuadScalar.sqrt_of(n - 1)
    scale = root.b if root.m > 1 else root.a
    thetas = [root * (D - i) for i in range(2 * D + 1)]
    return thetas, [int(scale) * (D - i) for i in range(2 * D + 1)]


def lagrange_polynomial(thetas, i):
    """prod_{j != i} (t - theta_j) / (theta_i - theta_j)"""
    m = thetas[i].m
    others = [t for j, t in enumerate(thetas) if j != i]
    numerator = QuadPolynomial.from_roots(others, m)
    return numerator * numerator(thetas[i]).inverse()


def _check_idempotents(ctx, thetas, idempotents):
    """First violated idempotent identity as a witness, else None"""
    for i, E in enumerate(idempotents):
        if E.is_zero():
            return {"identity": "E_i != 0", "i": i}

    total = idempotents[0]
    for E in idempotents[1:]:
        total = total + E
    if total != ctx.identity:
        return {"identity": "sum E_i = I", "entry": list(total.first_difference(ctx.identity))}

    for i, (theta, E) in enumerate(zip(thetas, idempotents)):
        scaled = E * theta
        if ctx.A @ E != scaled:
            return {"identity": "(A - theta_i I)E_i = 0", "i": i, "entry": list((ctx.A @ E).first_difference(scaled))}
        if E @ ctx.A != scaled:
            return {"identity": "E_i A = theta_i E_i", "i": i}

    # E_j E_i = (E_i E_j)^T for symmetric idempotents
    zero = ExactMatrix.zeros(ctx.order, ctx.m)
    for i, j in itertools.combinations_with_replacement(range(len(idempotents)), 2):
        product = idempotents[i] @ idempotents[j]
        expected = idempotents[i] if i == j else zero
        if product != expected:
            return {"identity": "E_i E_j = delta_ij E_i", "i": i, "j": j,
                    "entry": list(product.first_difference(expected))}
    return None


def primitive_idempotents(ctx):
    """
    Build E_0..E_2D exactly from the cached powers of A and verify the idempotent identities

    Args:
        ctx (TerwilligerContext): verified context

    Returns:
        SpectralData: with .verdict holding the outcome of the identity checks
    """
    identity = "E_iE_j = delta_ij E_i, sum E_i = I, AE_i = theta_i E_i = E_iA, E_i != 0"
    thetas, coefficients = eigenvalues(ctx.D, ctx.n)
    count = len(thetas)

    idempotents = []
    for i in range(count):
        polynomial = lagrange_polynomial(thetas, i)
        E = ExactMatrix.zeros(ctx.order, ctx.m)
        for k in range(count):
            c = polynomial.coefficient(k)
            if c:
                E = E + ctx.power(k) * c
        idempotents.append(E)

    witness = _check_idempotents(ctx, thetas, idempotents)

    multiplicities = []
    for E in idempotents:
        trace = E.trace()
        multiplicities.append(int(trace.a) if trace.is_integer() else None)
    if witness is None:
        if None in multiplicities:
            i = multiplicities.index(None)
            witness = {"identity": "trace(E_i) is an integer", "i": i, "trace": str(idempotents[i].trace())}
        elif sum(multiplicities) != ctx.order:
            witness = {"identity": "sum m_i = n^D", "sum": sum(multiplicities), "order": ctx.order}
        elif multiplicities != multiplicities[::-1]:
            witness = {"identity": "m_i = m_(2D-i)", "multiplicities": multiplicities}

    verdict = make_verdict("idempotents", identity, witness is None, witness=witness, details={
        "multiplicities": multiplicities,
    })
    telemetry.local_function_log("spectral", "Primitive idempotents built", {
        "D": ctx.D, "n": ctx.n, "multiplicities": multiplicities, "verdict": verdict["verdict"]
    })
    return SpectralData(thetas, coefficients, idempotents, multiplicities, verdict)


def float_spectrum_oracle(ctx, sd):
    """numpy eigvalsh of A against the exact spectrum, A = sum theta_i E_i and the trace identities"""
    identity = "eigvalsh(A) matches {theta_i with multiplicity m_i}; A = sum theta_i E_i; trace identities"
    if None in sd.multiplicities:
        return make_verdict("float_spectrum", identity, False, witness={
            "identity": "integral multiplicities", "multiplicities": sd.multiplicities,
        })

    numeric = np.sort(np.linalg.eigvalsh(ctx.A.to_float()))[::-1]
    expected = np.array([t.to_float() for t, k in zip(sd.eigenvalues, sd.multiplicities) for _ in range(k)])
    deviation = float(np.max(np.abs(numeric - expected))) if len(numeric) == len(expected) else float("inf")
    if not np.allclose(numeric, expected, rtol=FLOAT_TOLERANCE, atol=FLOAT_TOLERANCE):
        return make_verdict("float_spectrum", identity, False, witness={
            "identity": "floating eigenvalues within 1e-9", "max_deviation": f"{deviation:.3e}",
        })

    rebuilt = ExactMatrix.zeros(ctx.order, ctx.m)
    for theta, E in zip(sd.eigenvalues, sd.idempotents):
        rebuilt = rebuilt + E * theta
    if rebuilt != ctx.A:
        return make_verdict("float_spectrum", identity, False, witness={
            "identity": "A = sum theta_i E_i", "entry": list(rebuilt.first_difference(ctx.A)),
        })

    edges = len(ctx.graph.edges)
    first = sum((t * k for t, k in zip(sd.eigenvalues, sd.multiplicities)), QuadScalar(0, 0, ctx.m))
    second = sum((t * t * k for t, k in zip(sd.eigenvalues, sd.multiplicities)), QuadScalar(0, 0, ctx.m))
    trace_square = ctx.power(2).trace()
    for name, value, target in (
        ("sum theta_i m_i = trace(A) = 0", first, 0),
        ("sum theta_i^2 m_i = 2|E_f|", second, 2 * edges),
        ("trace(A^2) = 2|E_f|", trace_square, 2 * edges),
    ):
        if value != target:
            return make_verdict("float_spectrum", identity, False, witness={
                "identity": name, "value": str(value), "expected": target,
            })
    return make_verdict("float_spectrum", identity, True, details={"max_deviation": f"{deviation:.1e}"})


def zero_block_scalar(theta_i, theta_j, n):
    """(theta_i - theta_j)((theta_i - theta_j)^2 - 4(n-1))"""
    gap = theta_i - theta_j
    return gap * (gap * gap - 4 * (n - 1))


def verify_zero_blocks(sd, ctx):
    """
    E_i A* E_j = 0 whenever |i - j| is not 0 or 2; fills sd.block_zero

    The scalar that annihilates each block is checked as an identity for every
    (i, j): it equals sqrt(n-1)(n-1)(j-i)(j-i-2)(j-i+2), which vanishes exactly
    when |i - j| is 0 or 2.
    """
    identity = "E_i A* E_j = 0 for |i-j| not in {0, 2}"
    scalar_identity = "(theta_i-theta_j)((theta_i-theta_j)^2-4(n-1)) = sqrt(n-1)(n-1)(j-i)(j-i-2)(j-i+2)"
    count = sd.count
    root = QuadScalar.sqrt_of(ctx.n - 1)
    for i, j in itertools.product(range(count), repeat=2):
        k = j - i
        closed_form = root * ((ctx.n - 1) * k * (k - 2) * (k + 2))
        scalar = zero_block_scalar(sd.eigenvalues[i], sd.eigenvalues[j], ctx.n)
        if scalar != closed_form or (not scalar) != (abs(k) in (0, 2)):
            return make_verdict("zero_blocks", identity, False, witness={
                "identity": scalar_identity,
                "i": i, "j": j, "scalar": str(scalar), "closed_form": str(closed_form),
            })

    zero = [[True] * count for _ in range(count)]
    witness = None
    for i, j in itertools.combinations_with_replacement(range(count), 2):
        block = ctx.right_astar(sd.idempotents[i]) @ sd.idempotents[j]
        zero[i][j] = zero[j][i] = block.is_zero()
        if witness is None and not zero[i][j] and abs(i - j) not in (0, 2):
            z, y = block.first_nonzero()
            witness = {"identity": identity, "block": [i, j], "entry": [z, y], "value": str(block.entry(z, y))}
    sd.block_zero = zero

    allowed_nonzero = [[i, j] for i, j in itertools.combinations_with_replacement(range(count), 2) if not zero[i][j]]
    return make_verdict("zero_blocks", identity, witness is None, witness=witness, details={
        "nonzero_blocks": allowed_nonzero,
        "zero_block_matrix": zero,
        "block_scalar": scalar_identity,
    })


def ordering_even_first(D):
    return list(range(0, 2 * D + 1, 2)) + list(range(1, 2 * D, 2))


def ordering_odd_first(D):
    return list(range(1, 2 * D, 2)) + list(range(0, 2 * D + 1, 2))


def _first_wide_block(order, block_zero):
    for k, l in itertools.product(range(len(order)), repeat=2):
        if abs(k - l) > 1 and not block_zero[order[k]][order[l]]:
            return k, l
    return None


def verify_orderings(sd, ctx):
    """
    A* acts block-tridiagonally on both Q-polynomial orderings; the natural order must not

    Returns:
        list: verdicts for the even-first, odd-first and natural-order control
    """
    if sd.block_zero is None:
        verify_zero_blocks(sd, ctx)
    identity = "E_s(k) A* E_s(l) = 0 whenever |k-l| > 1"
    verdicts = []
    for name, order in (
        ("ordering_even_first", ordering_even_first(ctx.D)),
        ("ordering_odd_first", ordering_odd_first(ctx.D)),
    ):
        wide = _first_wide_block(order, sd.block_zero)
        verdicts.append(make_verdict(name, identity, wide is None, witness=wide and {
            "identity": identity, "ordering": order, "positions": list(wide),
            "block": [order[wide[0]], order[wide[1]]],
        }, details={"ordering": order}))

    natural = list(range(sd.count))
    wide = _first_wide_block(natural, sd.block_zero)
    verdicts.append(make_verdict(
        "ordering_natural_control", "natural ordering is not block-tridiagonal", wide is not None,
        witness={"identity": "natural ordering is not block-tridiagonal", "ordering": natural},
        details={"ordering": natural, "first_wide_block": list(wide) if wide else None},
    ))
    return verdicts


def verify_tridiagonal_action(sd, ctx):
    """A* E_i = E_(i-2) A* E_i + E_i A* E_i + E_(i+2) A* E_i, i.e. A* V_i in V_(i-2) + V_i + V_(i+2)"""
    identity = "A*E_i = E_(i-2)A*E_i + E_iA*E_i + E_(i+2)A*E_i"
    for i, E in enumerate(sd.idempotents):
        moved = ctx.left_astar(E)
        parts = ExactMatrix.zeros(ctx.order, ctx.m)
        for j in (i - 2, i, i + 2):
            if 0 <= j < sd.count:
                parts = parts + sd.idempotents[j] @ moved
        if parts != moved:
            return make_verdict("tridiagonal_action", identity, False, witness={
                "identity": identity, "i": i, "entry": list(parts.first_difference(moved)),
            })
    return make_verdict("tridiagonal_action", identity, True)


def verify_dual_generation(ctx):
    """
    A* generates the dual adjacency algebra: each E*_i is a polynomial in A*

    Solves the Vandermonde system in theta*_0..theta*_D exactly and rebuilds E*_i
    from the powers of A*.
    """
    identity = "E*_i = sum_l c_il (A*)^l with theta*_i distinct"
    theta_star = ctx.theta_star
    if len(set(theta_star)) != len(theta_star):
        return make_verdict("dual_generation", identity, False, witness={
            "identity": "theta*_i pairwise distinct", "theta_star": theta_star,
        })

    powers = [ctx.identity]
    for _ in range(ctx.D):
        powers.append(ctx.right_astar(powers[-1]))

    vandermonde = [[t ** l for l in range(ctx.D + 1)] for t in theta_star]
    coefficients = {}
    for i, E in enumerate(ctx.dual_idempotents):
        solution = solve_rational(vandermonde, [1 if k == i else 0 for k in range(ctx.D + 1)])
        if solution is None:
            return make_verdict("dual_generation", identity, False, witness={
                "identity": "Vandermonde system solvable", "i": i,
            })
        rebuilt = ExactMatrix.zeros(ctx.order, ctx.m)
        for c, P in zip(solution, powers):
            if c:
                rebuilt = rebuilt + P * c
        if rebuilt != E:
            return make_verdict("dual_generation", identity, False, witness={
                "identity": identity, "i": i, "entry": list(rebuilt.first_difference(E)),
            })
        coefficients[str(i)] = [str(c) for c in solution]
    return make_verdict("dual_generation", identity, True, details={
        "theta_star": theta_star, "coefficients": coefficients,
    })


def qpolynomial_verdict(dual_generation, orderings):
    """A* is a dual adjacency matrix for both orderings, so A is Q-polynomial"""
    identity = "A* generates M* and acts block-tridiagonally on both orderings"
    required = [dual_generation] + [v for v in orderings if v["name"] != "ordering_natural_control"]
    failed = [v["name"] for v in required if v["verdict"] != "pass"]
    return make_verdict("q_polynomial", identity, not failed, witness={
        "identity": identity, "failed": failed,
    }, details={"orderings": [v["details"]["ordering"] for v in required[1:]]})


def _apply_step(ctx, vector, step):
    """L (step -1) or R (step +1) on a sparse vector {vertex: QuadScalar}"""
    out = {}
    for y, value in vector.items():
        target = ctx.space.weight(y) + step
        for z in ctx.graph.adjacency[y]:
            if ctx.space.weight(z) == target:
                out[z] = out[z] + value if z in out else value
    return {z: v for z, v in out.items() if v}


def _scaled(vector, factor):
    return {k: v * factor for k, v in vector.items()}


def _reduce(vector, rows):
    """Reduce against rows kept in reduced row echelon form, pivot = first nonzero vertex"""
    vector = dict(vector)
    for pivot, row in rows:
        c = vector.get(pivot)
        if c:
            for k, v in row.items():
                updated = vector.get(k, 0) - c * v
                if updated:
                    vector[k] = updated
                else:
                    vector.pop(k, None)
    return vector


def _insert(vector, rows):
    pivot = min(vector)
    vector = _scaled(vector, vector[pivot].inverse())
    cleared = []
    for p, row in rows:
        c = row.get(pivot)
        cleared.append((p, _reduce(row, [(pivot, vector)]) if c else row))
    cleared.append((pivot, vector))
    rows[:] = sorted(cleared, key=lambda item: item[0])
    return vector


def _split_levels(ctx, vector):
    parts = {}
    for y, value in vector.items():
        parts.setdefault(ctx.space.weight(y), {})[y] = value
    return [parts[level] for level in sorted(parts)]


def _thin_basis_check(ctx, slices, r, d):
    """
    Normalize w_(r+d) then set w_(i-1) = L w_i; check L w_r = 0,
    R w_(r+i) = x_(i+1) w_(r+i+1) with x_(i+1) = (i+1)(n-1)(d-i), and R w_(r+d) = 0
    """
    basis = {r + d: slices[r + d][0][1]}
    for level in range(r + d, r, -1):
        lowered = _apply_step(ctx, basis[level], -1)
        if not lowered:
            return {"passed": False, "failure": f"L w_{level} = 0 before reaching the endpoint"}
        basis[level - 1] = lowered
    if _apply_step(ctx, basis[r], -1):
        return {"passed": False, "failure": "L w_r != 0"}

    coefficients = []
    for i in range(d + 1):
        raised = _apply_step(ctx, basis[r + i], 1)
        x = (i + 1) * (ctx.n - 1) * (d - i)
        expected = _scaled(basis[r + i + 1], x) if i < d else {}
        coefficients.append({"i": i + 1, "x": x, "verified": raised == expected})
        if raised != expected:
            return {"passed": False, "failure": f"R w_(r+{i}) != {x} w_(r+{i + 1})", "coefficients": coefficients}
    return {"passed": True, "coefficients": coefficients[:-1], "top_vanishes": True}


def generate_submodule(ctx, seed):
    """
    Close span(seed) under L, R and every E*_i

    Vectors are stored per distance class, so closure under E*_i holds by
    construction and only L and R are applied.

    Args:
        ctx (TerwilligerContext): verified context
        seed (dict): sparse vector {vertex: QuadScalar}, nonzero

    Returns:
        dict: dimension, endpoint r, diameter d, thin and irreducible flags, slice dimensions and the basis check
    """
    seed = {y: v for y, v in seed.items() if v}
    if not seed:
        raise ValueError("Seed vector must be nonzero")

    slices = _close(ctx, seed)
    dims = [len(slices.get(i, [])) for i in range(ctx.D + 1)]
    levels = [i for i, k in enumerate(dims) if k]
    r, d = levels[0], len(levels) - 1
    thin = max(dims) <= 1
    contiguous = levels == list(range(r, r + d + 1))
    irreducible, reason = _irreducibility(ctx, slices, dims, thin, contiguous, r, d)
    report = {
        "dimension": sum(dims),
        "endpoint": r,
        "diameter": d,
        "thin": thin,
        "contiguous": contiguous,
        "irreducible": irreducible,
        "reason": reason,
        "slice_dimensions": dims,
        "basis_check": _thin_basis_check(ctx, slices, r, d) if irreducible else None,
    }
    telemetry.local_function_log("spectral", "Submodule closure finished", {
        "dimension": report["dimension"], "endpoint": r, "diameter": d, "thin": thin, "irreducible": irreducible,
    })
    return report


def _close(ctx, seed):
    """Reduced bases per distance class of the span of seed closed under L and R"""
    slices = {}
    queue = []

    def add(vector):
        if not vector:
            return
        level = ctx.space.weight(next(iter(vector)))
        rows = slices.setdefault(level, [])
        reduced = _reduce(vector, rows)
        if reduced:
            queue.append(_insert(reduced, rows))

    for part in _split_levels(ctx, seed):
        add(part)
    position = 0
    while position < len(queue):
        vector = queue[position]
        position += 1
        add(_apply_step(ctx, vector, -1))
        add(_apply_step(ctx, vector, 1))
    return slices


def _irreducibility(ctx, slices, dims, thin, contiguous, r, d):
    """
    (irreducible, reason) for a closure W

    Components of W with disjoint level supports are submodules, so a support
    gap means W is reducible. A thin W is irreducible exactly when the closure
    of its top vector w_(r+d) is all of W. Non-thin closures are not decomposed.
    """
    if not contiguous:
        return False, "support has a gap"
    if not thin:
        return None, "not thin; decomposition not attempted"
    top = _close(ctx, slices[r + d][0][1])
    if sum(len(rows) for rows in top.values()) != sum(dims):
        return False, "reducible closure"
    return True, None


def eigenvalue_note(c, m):
    """theta = c*sqrt(m), or the plain value when n-1 is a perfect square"""
    return f"θ = {c}·√{m}" if m > 1 else f"θ = {c}"


def spectrum_fragment(sd, ctx):
    """Report fragment: eigenvalues as c*sqrt(m), multiplicities, zero-block matrix"""
    return {
        "m": ctx.m,
        "s": ctx.s,
        "eigenvalues": [{"c": c, "note": eigenvalue_note(c, ctx.m)} for c in sd.coefficients],
        "multiplicities": sd.multiplicities,
        "zero_block_matrix": sd.block_zero,
        "notes": ["eigenvalue indices range over 0 <= i <= 2D"],
    }
