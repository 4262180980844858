#!/usr/bin/env python3
"""
T-Module Combinatorics - Admissible (r, d), multiplicities, tridiagonal representations
Characteristic polynomials through the three-term recurrence and normalized Krawtchouk polynomials
"""

from fractions import Fraction
from math import comb, factorial

import numpy as np

from core.errors import FalsificationError
from core.exact_matrix import ExactMatrix, exact_rank
from core.qnum import QuadPolynomial, QuadScalar, normalize_radicand
from core.spectral import eigenvalue_note, eigenvalues
from utils.report_utils import make_verdict


def admissible_params(D):
    """
    All (r, d) with 0 <= r <= r+d <= D <= 2r+d

    Args:
        D (int): diameter of H(D,n), at least 1

    Returns:
        list: (r, d) pairs, d descending then r ascending
    """
    if not isinstance(D, int) or D < 1:
        raise ValueError(f"D must be an integer >= 1, got {D}")
    pairs = [(r, d) for d in range(D, -1, -1) for r in range(D + 1) if r + d <= D <= 2 * r + d]
    return pairs


def _check_admissible(r, d, D, n):
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if not (0 <= r <= r + d <= D <= 2 * r + d):
        raise ValueError(f"(r, d) = ({r}, {d}) is not admissible for D = {D}: need 0 <= r <= r+d <= D <= 2r+d")


def falling_factorial(a, r):
    result = 1
    for k in range(r):
        result *= a - k
    return result


def multiplicity_forms(r, d, D, n):
    """
    Both closed forms of mult(r, d), as exact rationals

    Returns:
        tuple: (factorial form, binomial form)
    """
    _check_admissible(r, d, D, n)
    excess = 2 * r + d - D
    factorial_form = Fraction(
        falling_factorial(D + 1, r) * (n - 2) ** excess * (d + 1),
        factorial(D - r - d) * factorial(excess) * (D + 1),
    )
    span = 2 * D - 2 * r - d
    binomial_form = Fraction(d + 1, D - r + 1) * comb(D, span) * comb(span, D - r - d) * (n - 2) ** excess
    return factorial_form, binomial_form


def multiplicity(r, d, D, n):
    """Number of irreducible T-modules with endpoint r and diameter d; both forms must agree"""
    factorial_form, binomial_form = multiplicity_forms(r, d, D, n)
    if factorial_form != binomial_form or factorial_form.denominator != 1 or factorial_form <= 0:
        raise FalsificationError("mult(r,d) forms agree and are positive integers", {
            "r": r, "d": d, "D": D, "n": n,
            "factorial_form": str(factorial_form), "binomial_form": str(binomial_form),
        })
    return int(factorial_form)


class ModuleParams:
    """Isomorphism class (r, d) of an irreducible T-module with its multiplicity"""

    def __init__(self, r, d, D, n):
        self.r = r
        self.d = d
        self.mult = multiplicity(r, d, D, n)

    def to_dict(self):
        return {"r": self.r, "d": self.d, "mult": self.mult}

    def __repr__(self):
        return f"ModuleParams(r={self.r}, d={self.d}, mult={self.mult})"


def module_params(D, n):
    return [ModuleParams(r, d, D, n) for r, d in admissible_params(D)]


def verify_multiplicity_forms(D, n):
    identity = "factorial and binomial forms of mult(r,d) agree and are positive integers"
    for r, d in admissible_params(D):
        try:
            multiplicity(r, d, D, n)
        except FalsificationError as error:
            return make_verdict("multiplicity_forms", identity, False, witness=error.witness)
    return make_verdict("multiplicity_forms", identity, True, details={"pairs": len(admissible_params(D))})


def dimension_audit(D, n):
    """sum over admissible (r, d) of mult(r, d)(d + 1) = n^D"""
    identity = "sum mult(r,d)(d+1) = n^D"
    terms = [p.to_dict() for p in module_params(D, n)]
    total = sum(t["mult"] * (t["d"] + 1) for t in terms)
    return make_verdict("dimension_audit", identity, total == n ** D, witness={
        "identity": identity, "sum": total, "n^D": n ** D, "terms": terms,
    }, details={"sum": total})


class TridiagonalRep:
    """
    Action of A on an irreducible module with diameter d in the basis w_r..w_(r+d)

    Zero diagonal, ones above it and x_i = i(n-1)(d-i+1) below it; r does not enter.
    """

    def __init__(self, d, n):
        if d < 0 or n < 3:
            raise ValueError(f"Need d >= 0 and n >= 3, got d = {d}, n = {n}")
        self.d = d
        self.n = n
        self.subdiagonal = [i * (n - 1) * (d - i + 1) for i in range(1, d + 1)]
        self.superdiagonal = [1] * d
        self.diagonal = [0] * (d + 1)

    def to_array(self):
        size = self.d + 1
        array = np.zeros((size, size), dtype=np.int64)
        for i, x in enumerate(self.subdiagonal):
            array[i + 1, i] = x
            array[i, i + 1] = self.superdiagonal[i]
        return array

    def to_exact(self, m=1):
        return ExactMatrix.from_integers(self.to_array(), m)


def rep_matrix(d, n):
    return TridiagonalRep(d, n)


def char_poly_recurrence(d, n):
    """
    f_0..f_(d+1) with f_(i+1) = t f_i - i(n-1)(d-i+1) f_(i-1), f_0 = 1, f_1 = t

    Returns:
        list: QuadPolynomial over Q(sqrt(m)), m the squarefree part of n-1
    """
    if d < 0 or n < 3:
        raise ValueError(f"Need d >= 0 and n >= 3, got d = {d}, n = {n}")
    m = normalize_radicand(n - 1)[1]
    t = QuadPolynomial.variable(m)
    polys = [QuadPolynomial.constant(1, m), t]
    for i in range(1, d + 1):
        polys.append(t * polys[i] - polys[i - 1] * (i * (n - 1) * (d - i + 1)))
    return polys


def krawtchouk_polynomials(d, m=1):
    """Normalized Krawtchouk P_0..P_(d+1): P_(i+1) = (t - d/2) P_i - (i/4)(d-i+1) P_(i-1)"""
    shifted = QuadPolynomial([Fraction(-d, 2), 1], m)
    polys = [QuadPolynomial.constant(1, m), shifted]
    for i in range(1, d + 1):
        polys.append(shifted * polys[i] - polys[i - 1] * Fraction(i * (d - i + 1), 4))
    return polys


def _rescale(p, k, d, n):
    """(2 sqrt(n-1))^k p(t / (2 sqrt(n-1)) + d/2)"""
    scale = QuadScalar.sqrt_of(n - 1) * 2
    return p.shift_scale(scale.inverse(), Fraction(d, 2)) * scale ** k


def char_poly_krawtchouk(d, n):
    """
    f_(d+1) rebuilt from P_(d+1), cross-checked against the recurrence and the factored form

    Raises:
        FalsificationError: when the recurrence, Krawtchouk or factored forms disagree
    """
    recurrence = char_poly_recurrence(d, n)
    m = recurrence[0].m
    krawtchouk = krawtchouk_polynomials(d, m)

    for i, (f, p) in enumerate(zip(recurrence, krawtchouk)):
        g = _rescale(p, i, d, n)
        if f != g:
            raise FalsificationError("f_i(t) = (2sqrt(n-1))^i P_i(t/(2sqrt(n-1)) + d/2)", {
                "d": d, "n": n, "i": i, "recurrence": str(f), "krawtchouk": str(g),
            })

    factored = QuadPolynomial.from_roots(range(d + 1), m)
    if factored != krawtchouk[d + 1]:
        raise FalsificationError("P_(d+1)(x) = x(x-1)...(x-d)", {
            "d": d, "n": n, "krawtchouk": str(krawtchouk[d + 1]), "factored": str(factored),
        })
    return _rescale(krawtchouk[d + 1], d + 1, d, n)


def krawtchouk_agreement(d_max, n_max):
    """Recurrence, Krawtchouk and factored forms agree for every d <= d_max, 3 <= n <= n_max"""
    identity = "recurrence, Krawtchouk and factored characteristic polynomials agree"
    checked = 0
    for n in range(3, n_max + 1):
        for d in range(d_max + 1):
            try:
                char_poly_krawtchouk(d, n)
            except FalsificationError as error:
                return make_verdict("krawtchouk", identity, False, witness=error.witness)
            checked += 1
    return make_verdict("krawtchouk", identity, True, details={"d_max": d_max, "n_max": n_max, "pairs": checked})


def rep_roots(d, n):
    """Claimed simple roots sqrt(n-1)(d - 2j), 0 <= j <= d"""
    root = QuadScalar.sqrt_of(n - 1)
    return [root * (d - 2 * j) for j in range(d + 1)]


def rep_matrix_spectrum_check(d, n):
    """
    f_(d+1) has degree d+1, vanishes at each sqrt(n-1)(d-2j) and these d+1 roots are distinct;
    Cayley-Hamilton f_(d+1)(A_(r,d)) = 0 ties the polynomial to the matrix
    """
    identity = "A_(r,d) is multiplicity-free with eigenvalues sqrt(n-1)(d-2j)"
    f = char_poly_recurrence(d, n)[-1]
    roots = rep_roots(d, n)
    if f.degree != d + 1 or not f.is_monic():
        return make_verdict("rep_spectrum", identity, False, witness={
            "identity": "f_(d+1) monic of degree d+1", "d": d, "n": n, "degree": f.degree,
        })
    if len(set(roots)) != d + 1:
        return make_verdict("rep_spectrum", identity, False, witness={
            "identity": "roots pairwise distinct", "d": d, "n": n,
        })
    for j, root in enumerate(roots):
        value = f(root)
        if value:
            return make_verdict("rep_spectrum", identity, False, witness={
                "identity": identity, "d": d, "n": n, "j": j, "root": str(root), "value": str(value),
            })

    rep = rep_matrix(d, n).to_exact(f.m)
    evaluated = ExactMatrix.zeros(d + 1, f.m)
    for c in reversed(f.coeffs):
        evaluated = evaluated @ rep + ExactMatrix.identity(d + 1, f.m) * c
    if not evaluated.is_zero():
        return make_verdict("rep_spectrum", identity, False, witness={
            "identity": "f_(d+1)(A_(r,d)) = 0", "d": d, "n": n,
        })
    return make_verdict("rep_spectrum", identity, True, details={"d": d, "roots": [str(r) for r in roots]})


def eigenvalue_multiplicity_sum(i, D, n):
    """
    m_i as the sum of mult(r, d) over admissible (r, d) with |D-i| <= d <= D and d - D + i even

    The inner range over r is restricted to admissible pairs, where mult is defined.
    """
    if not 0 <= i <= 2 * D:
        raise ValueError(f"Eigenvalue index must be in 0..{2 * D}, got {i}")
    total = 0
    for r, d in admissible_params(D):
        if abs(D - i) <= d <= D and (d - D + i) % 2 == 0:
            total += multiplicity(r, d, D, n)
    return total


def verify_eigenvalue_multiplicities(traces, D, n):
    """trace(E_i) equals the module-count sum for every i, the sums add to n^D and are symmetric"""
    identity = "trace(E_i) = sum of mult(r,d) over modules containing theta_i"
    sums = [eigenvalue_multiplicity_sum(i, D, n) for i in range(2 * D + 1)]
    for i, (expected, trace) in enumerate(zip(sums, traces)):
        if trace != expected:
            return make_verdict("eigenvalue_multiplicities", identity, False, witness={
                "identity": identity, "i": i, "trace": trace, "sum": expected,
            })
    if sum(sums) != n ** D or sums != sums[::-1]:
        return make_verdict("eigenvalue_multiplicities", identity, False, witness={
            "identity": "sum m_i = n^D and m_i = m_(2D-i)", "sums": sums,
        })
    return make_verdict("eigenvalue_multiplicities", identity, True, details={
        "multiplicities": sums,
        "notes": ["inner sum over r restricted to admissible (r, d)"],
    })


def verify_eigenvalue_sums(D, n):
    """Without a graph: the module-count sums are positive, symmetric and add to n^D"""
    identity = "sum_i m_i = n^D with m_i = m_(2D-i) > 0"
    sums = [eigenvalue_multiplicity_sum(i, D, n) for i in range(2 * D + 1)]
    passed = sum(sums) == n ** D and sums == sums[::-1] and min(sums) > 0
    return make_verdict("eigenvalue_sums", identity, passed, witness={
        "identity": identity, "sums": sums, "n^D": n ** D,
    }, details={"multiplicities": sums})


def endpoint_census(ctx):
    """
    dim(ker L on E*_r V) by exact rank equals the number of irreducible modules with endpoint r

    Returns:
        dict: verdict with per-endpoint kernel dimension and module count
    """
    identity = "dim(ker L on E*_rV) = sum_d mult(r,d)"
    levels = [np.flatnonzero(ctx.weights == i) for i in range(ctx.D + 1)]
    lowering = ctx.L.a
    rows = []
    for r in range(ctx.D + 1):
        if r == 0:
            kernel = len(levels[0])
        else:
            block = lowering[np.ix_(levels[r - 1], levels[r])]
            kernel = len(levels[r]) - exact_rank(block)
        modules = sum(multiplicity(rr, d, ctx.D, ctx.n) for rr, d in admissible_params(ctx.D) if rr == r)
        rows.append({"r": r, "kernel": kernel, "modules": modules})
        if kernel != modules:
            return make_verdict("endpoint_census", identity, False, witness={
                "identity": identity, "r": r, "kernel": kernel, "modules": modules,
            })
    return make_verdict("endpoint_census", identity, True, details={"endpoints": rows})


def multiplicity_table(D, n):
    """Report fragment: (r, d, mult) rows"""
    return [p.to_dict() for p in module_params(D, n)]


def eigenvalue_table(D, n, traces):
    """Report fragment: theta_i as c*sqrt(m), m_i from the module sum and from trace(E_i)"""
    m = normalize_radicand(n - 1)[1]
    _, coefficients = eigenvalues(D, n)
    rows = []
    for i, c in enumerate(coefficients):
        from_sum = eigenvalue_multiplicity_sum(i, D, n)
        from_trace = traces[i] if traces else None
        rows.append({
            "i": i,
            "theta": {"c": c, "note": eigenvalue_note(c, m)},
            "m_sum": from_sum,
            "m_trace": from_trace,
            "agree": None if from_trace is None else from_sum == from_trace,
        })
    return rows
