#!/usr/bin/env python3
"""
Suite Checks - One function per reported check
Each takes an InstanceRun (core/verifier.py) and returns a list of verdicts
"""

from core.errors import FalsificationError
from core.hamming import base_intersection_numbers, distance_partition, flat_edge_count, intersection_numbers_around_x
from core.spectral import (
    float_spectrum_oracle, generate_submodule, qpolynomial_verdict, verify_dual_generation,
    verify_orderings, verify_tridiagonal_action, verify_zero_blocks,
)
from core.terwilliger import (
    verify_dual_idempotent_block, verify_entry_lemma, verify_level_action, verify_tridiagonal,
    verify_tridiagonal_entrywise, verify_uniform, verify_walk_oracle,
)
from core.tmodules import (
    dimension_audit, endpoint_census, krawtchouk_agreement, rep_matrix_spectrum_check,
    verify_eigenvalue_multiplicities, verify_multiplicity_forms,
)
from utils.report_utils import make_verdict, skipped_verdict
from utils.seed_parser import preset_seed


def _over_cap(run, name, identity, setting):
    """Skipped verdict when the instance is larger than a QHAM_* cap, else None"""
    cap = run.settings[setting]
    if run.order > cap:
        return skipped_verdict(name, identity, f"instance size {run.order} exceeds QHAM_{setting.upper()}={cap}")
    return None


# ---------------------------------------------------------------- structure

def check_distance_partition(run):
    identity = "Gamma_0(x), ..., Gamma_D(x) partition V with |Gamma_i| = C(D,i)(n-1)^i"
    classes = distance_partition(run.space)
    sizes = [len(c) for c in classes]
    closed_form = run.space.class_sizes()
    passed = sizes == closed_form and sum(sizes) == run.order
    return [make_verdict("distance_partition", identity, passed, witness={
        "identity": identity, "sizes": sizes, "closed_form": closed_form,
    }, details={"sizes": sizes})]


def check_full_bipartite(run):
    """Connected, bipartite, geodesic distances equal weights, edges of H(D,n) minus the flat ones"""
    identity = "full bipartite graph is connected and bipartite with d_f(x,y) = weight(y)"
    graph, space = run.graph, run.space
    D, n = space.D, space.n
    distances = graph.distances_from_base()
    witness = None

    if not graph.is_connected():
        witness = {"identity": "connected", "unreachable": distances.index(None)}
    elif not graph.is_bipartite():
        witness = {"identity": "bipartite"}
    else:
        for y in range(space.order):
            i = space.weight(y)
            if distances[y] != i:
                witness = {"identity": "d_f(x,y) = weight(y)", "vertex": y, "distance": distances[y], "weight": i}
                break
            if graph.degree(y) != (D - i) * (n - 1) + i:
                witness = {"identity": "degree = b_i + c_i", "vertex": y, "degree": graph.degree(y)}
                break

    counted, closed_form = flat_edge_count(space)
    hamming_edges = space.order * D * (n - 1) // 2
    if witness is None and not (counted == closed_form == graph.deleted_edges):
        witness = {"identity": "removed edges = sum |Gamma_i| a_i / 2", "counted": counted,
                   "closed_form": closed_form, "removed": graph.deleted_edges}
    if witness is None and len(graph.edges) + graph.deleted_edges != hamming_edges:
        witness = {"identity": "|E_f| + removed = |E(H(D,n))|", "edges": len(graph.edges),
                   "removed": graph.deleted_edges, "hamming_edges": hamming_edges}

    return [make_verdict("full_bipartite", identity, witness is None, witness=witness, details={
        "edges": len(graph.edges),
        "removed_edges": graph.deleted_edges,
        "bipartition": list(graph.bipartition_sizes()),
    })]


def check_intersection_numbers(run):
    return [intersection_numbers_around_x(run.graph)]


def check_base_intersection_numbers(run):
    return [base_intersection_numbers(run.space)]


def check_context(run):
    """Building the context raises ConstructionError on a broken identity; the verifier turns that into a failure"""
    ctx = run.ctx
    return [make_verdict(
        "context", "A symmetric 0/1, E*_i orthogonal idempotents summing to I, F = 0, A = L + R, R = L^T", True,
        details={
            "order": ctx.order,
            "m": ctx.m,
            "s": ctx.s,
            "theta_star": ctx.theta_star,
            "adjacency_nonzero": ctx.A.nonzero_count(),
        },
    )]


def check_dual_idempotent_blocks(run):
    return [verify_dual_idempotent_block(run.ctx)]


def check_level_action(run):
    return [verify_level_action(run.ctx)]


# ---------------------------------------------------------------- relations

def check_uniform(run):
    return [verify_uniform(run.ctx)]


def check_tridiagonal(run):
    return [verify_tridiagonal(run.ctx)]


def check_tridiagonal_entrywise(run):
    return [verify_tridiagonal_entrywise(run.ctx)]


def check_entry_lemma(run):
    skipped = _over_cap(run, "entry_lemma", "3-walk entry formulas for the tridiagonal relation terms", "module_cap")
    return [skipped or verify_entry_lemma(run.ctx)]


def check_walk_oracle(run):
    skipped = _over_cap(run, "walk_oracle", "shaped walk count equals the matching matrix product entry",
                        "walk_oracle_cap")
    return [skipped or verify_walk_oracle(run.ctx, run.settings["walk_oracle_length"])]


# ---------------------------------------------------------------- spectrum

def check_idempotents(run):
    return [run.spectral.verdict]


def check_float_spectrum(run):
    return [float_spectrum_oracle(run.ctx, run.spectral)]


def check_eigenvalue_multiplicities(run):
    return [verify_eigenvalue_multiplicities(run.spectral.multiplicities, run.D, run.n)]


def check_krawtchouk(run):
    return [krawtchouk_agreement(run.D, run.n)]


def check_rep_spectrum(run):
    identity = "A_(r,d) is multiplicity-free with eigenvalues sqrt(n-1)(d-2j)"
    for d in range(run.D + 1):
        verdict = rep_matrix_spectrum_check(d, run.n)
        if verdict["verdict"] != "pass":
            return [verdict]
    return [make_verdict("rep_spectrum", identity, True, details={"diameters": list(range(run.D + 1))})]


# ---------------------------------------------------------------- qpoly

def check_zero_blocks(run):
    return [verify_zero_blocks(run.spectral, run.ctx)]


def check_orderings(run):
    return verify_orderings(run.spectral, run.ctx)


def check_tridiagonal_action(run):
    return [verify_tridiagonal_action(run.spectral, run.ctx)]


def check_dual_generation(run):
    return [verify_dual_generation(run.ctx)]


def check_q_polynomial(run):
    dual = run.verdicts.get("dual_generation") or verify_dual_generation(run.ctx)
    orderings = [run.verdicts[name] for name in ("ordering_even_first", "ordering_odd_first")
                 if name in run.verdicts] or verify_orderings(run.spectral, run.ctx)
    return [qpolynomial_verdict(dual, orderings)]


# ---------------------------------------------------------------- modules

def module_verdict(name, ctx, seed, expected_r, expected_d):
    """
    Close a seed into a submodule and compare with the expected irreducible (r, d)

    Returns:
        dict: verdict; details carry the closure report
    """
    identity = f"seed generates a thin irreducible module with (r, d) = ({expected_r}, {expected_d})"
    report = generate_submodule(ctx, seed)
    check = report["basis_check"]
    passed = (
        report["thin"] and report["irreducible"]
        and report["endpoint"] == expected_r and report["diameter"] == expected_d
        and report["dimension"] == expected_d + 1
        and check is not None and check["passed"]
    )
    return make_verdict(name, identity, passed, witness={"identity": identity, **report}, details={
        "r": report["endpoint"],
        "d": report["diameter"],
        "dimension": report["dimension"],
        "thin": report["thin"],
        "coefficients": check.get("coefficients") if check else None,
    })


def check_primary_module(run):
    skipped = _over_cap(run, "primary_module", "T x is thin with (r, d) = (0, D)", "module_cap")
    if skipped:
        return [skipped]
    seed = preset_seed("primary", run.space, run.ctx.m)
    return [module_verdict("primary_module", run.ctx, seed, 0, run.D)]


def check_e1_diff_module(run):
    skipped = _over_cap(run, "e1_diff_module", "T(y - z) is thin with (r, d) = (1, D-1)", "module_cap")
    if skipped:
        return [skipped]
    seed = preset_seed("e1-diff", run.space, run.ctx.m)
    return [module_verdict("e1_diff_module", run.ctx, seed, 1, run.D - 1)]


def check_endpoint_census(run):
    skipped = _over_cap(run, "endpoint_census", "dim(ker L on E*_rV) = sum_d mult(r,d)", "module_cap")
    return [skipped or endpoint_census(run.ctx)]


# ---------------------------------------------------------------- audit

def check_multiplicity_forms(run):
    return [verify_multiplicity_forms(run.D, run.n)]


def check_dimension_audit(run):
    try:
        return [dimension_audit(run.D, run.n)]
    except FalsificationError as error:
        return [make_verdict("dimension_audit", "sum mult(r,d)(d+1) = n^D", False, witness=error.witness)]
