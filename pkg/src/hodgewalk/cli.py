"""Command-line front end.

Verbs map onto the library operations and print deterministic tables:
rationals in lowest terms, floats with 12 significant digits, no
timestamps.  Exit codes: 0 ok, 1 invalid input, 2 computation guard,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import cheeger as cheeger_mod
from . import complex_core, graded_cover, laplacians, operators, walks
from .cheeger import BruteForceGuardError
from .complex_core import ComplexFormatError
from .exact import ScaledMatrix
from .graded_cover import CoverSpecError, NonStrongGradingError
from .walks import CoherentComponentError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_GUARD = 2
EXIT_VERIFY = 3


def fmt(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def emit(rows, header, fmt_name: str) -> None:
    if fmt_name == "json":
        print(json.dumps({"header": header, "rows": [[fmt(v) for v in r] for r in rows]}))
        return
    print("\t".join(header))
    for row in rows:
        print("\t".join(fmt(v) for v in row))


def load_input(path: str):
    """Parse a complex file or a cover-spec file (detected by line syntax).

    Returns (cover, complex_or_None).
    """
    text = Path(path).read_text(encoding="utf-8")
    body = [
        ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")
    ]
    if body and all(ln.split()[0] in ("node", "edge") for ln in body):
        return graded_cover.parse_cover_spec(text), None
    cx = complex_core.parse_complex(text)
    return graded_cover.cover_from_complex(cx), cx


def rationalize(x: float) -> Fraction:
    """Nearest small-denominator rational, for table display of spectral gaps."""
    return Fraction(x).limit_denominator(10**6)


def cmd_lp(args) -> int:
    cover, _ = load_input(args.input)
    pw = graded_cover.compute_path_weights(cover)
    leaves, roots = graded_cover.leaves_and_roots(cover)
    rows = []
    for q in range(cover.n_quotient):
        role = "leaf" if q in leaves else ""
        if q in roots:
            role = (role + "+root").lstrip("+") if role else "root"
        rows.append((cover.dims[q], cover.labels[q], pw.lp[q], pw.rp[q], pw.h(q), role))
    emit(rows, ("k", "face", "lp", "rp", "h", "role"), args.format)
    return EXIT_OK


def cmd_stationary(args) -> int:
    cover, _ = load_input(args.input)
    pw = graded_cover.compute_path_weights(cover)
    rows = []
    if args.k is None:
        comps = graded_cover.components(cover, "quotient").members
        for ci, comp in enumerate(comps):
            pi = walks.stationary(cover, comp, "full", args.view, pw)
            e_len = walks.expected_path_length(cover, comp, pw)
            for node in pi.support:
                label = cover.labels[node] if args.view == "quotient" else cover.cover_label(node)
                rows.append((ci, label, pi.weights[node], pi.normalizer, e_len))
        emit(rows, ("component", "node", "pi", "normalizer", "expected_len"), args.format)
    else:
        kind = f"quotient-{args.direction}"
        comps = graded_cover.components(cover, kind, args.k).members
        for ci, comp in enumerate(comps):
            pi = walks.stationary(cover, comp, args.direction, args.view, pw)
            for node in pi.support:
                label = cover.labels[node] if args.view == "quotient" else cover.cover_label(node)
                rows.append((ci, label, pi.weights[node], pi.normalizer, ""))
        emit(rows, ("component", "node", "pi", "normalizer", "expected_len"), args.format)
    return EXIT_OK


def cmd_walk_sim(args) -> int:
    cover, _ = load_input(args.input)
    pw = graded_cover.compute_path_weights(cover)
    start = 0
    if args.start is not None:
        labels = [cover.cover_label(u) for u in range(cover.n_cover)]
        if args.start not in labels:
            print(f"error: unknown start node {args.start!r}", file=sys.stderr)
            return EXIT_INVALID
        start = labels.index(args.start)
    trace, empirical = walks.simulate(cover, start, args.steps, args.seed, pw=pw)
    comp = next(
        c
        for c in graded_cover.components(cover, "cover").members
        if trace.states[0] in c
    )
    quot_comp = sorted({u % cover.n_quotient for u in comp})
    pi = walks.stationary(cover, quot_comp, "full", "cover", pw)
    rows = []
    for u in sorted(comp):
        emp = empirical.get(u, Fraction(0))
        target = pi.weights.get(u, Fraction(0))
        rows.append((cover.cover_label(u), float(emp), target, f"{abs(float(emp - target)):.6f}"))
    tv = walks.total_variation(empirical, pi.weights)
    rows.append(("total-variation", float(tv), "", ""))
    emit(rows, ("node", "empirical", "stationary", "abs_diff"), args.format)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cover, _ = load_input(args.input)
    pw = graded_cover.compute_path_weights(cover)
    rows = []
    if args.k is None:
        bundle = operators.build_bundle(cover, pw)
        spec = operators.eigen(bundle.a_quotient)
        name = "full-quotient"
        for i, v in enumerate(spec.eigenvalues):
            rows.append((name, i, v))
        bound, holds = operators.min_eigenvalue_bound(cover, pw)
        rows.append(("min-eigenvalue-bound", "-1 + " + str(bound), holds))
    else:
        op = operators.build_conditional(cover, args.k, args.direction, args.flavor, pw=pw)
        spec = operators.eigen(op.sm)
        for i, v in enumerate(spec.eigenvalues):
            rows.append((op.kind, i, v))
        if args.rate:
            # the rate pairs the dim-k up-walk with the dim-(k+1) down-walk
            rate_k = args.k + 1 if args.direction == "up" else args.k
            try:
                rows.append(("convergence-rate", "", walks.convergence_rate(cover, rate_k, pw)))
            except CoherentComponentError as exc:
                rows.append(("convergence-rate", "", f"undefined: {exc}"))
    emit(rows, ("operator", "i", "value"), args.format)
    return EXIT_OK


def cmd_laplacian(args) -> int:
    cover, cx = load_input(args.input)
    if cx is None:
        print("error: laplacian requires a simplicial complex input", file=sys.stderr)
        return EXIT_INVALID
    lap = laplacians.hodge(cx, args.k, normalized=args.normalized)
    rows = []
    for which, mat in (("up", lap.up), ("down", lap.down)):
        labels = [str(f) for f in cx.faces_by_dim[args.k]]
        fl = mat.to_float()
        for i in range(mat.shape[0]):
            for j in range(mat.shape[1]):
                if mat.body[i, j] != 0:
                    rows.append((which, labels[i], labels[j], float(fl[i, j])))
    emit(rows, ("part", "row", "col", "value"), args.format)
    return EXIT_OK


def cmd_hodge(args) -> int:
    cover, cx = load_input(args.input)
    if cx is None:
        print("error: hodge requires a simplicial complex input", file=sys.stderr)
        return EXIT_INVALID
    rows = []
    for k in range(cx.dimension + 1):
        rep = laplacians.hodge_decomposition(cx, k, normalized=args.normalized)
        rows.append((k, rep.n_k, rep.rank_up, rep.rank_down, rep.harmonic))
    rows.append(("betti", "", "", "", " ".join(map(str, laplacians.betti_numbers(cx)))))
    emit(rows, ("k", "n_k", "rank_up", "rank_down", "harmonic"), args.format)
    return EXIT_OK


def cmd_coherent(args) -> int:
    cover, _ = load_input(args.input)
    cs = graded_cover.components(
        cover, f"quotient-{args.direction}", args.k, with_coherence=True
    )
    rows = []
    for ci, (comp, witness) in enumerate(zip(cs.members, cs.coherent)):
        if witness is None:
            rows.append((ci, len(comp), False, ""))
            continue
        desc = " ".join(("-" if flip else "+") + cover.labels[q] for q, flip in witness)
        rows.append((ci, len(comp), True, desc))
    emit(rows, ("component", "size", "coherent", "witness"), args.format)
    return EXIT_OK


def cmd_partition(args) -> int:
    cover, cx = load_input(args.input)
    if cx is None:
        print("error: partition requires a simplicial complex input", file=sys.stderr)
        return EXIT_INVALID
    comps = graded_cover.components(cover, "quotient-down", args.k).members
    rows = []
    for ci, comp in enumerate(comps):
        classes = graded_cover.find_partition(cover, comp)
        if classes is None:
            rows.append((ci, len(comp), "none"))
        else:
            rows.append((ci, len(comp), " | ".join(" ".join(cls) for cls in classes)))
    emit(rows, ("component", "size", "partition"), args.format)
    return EXIT_OK


def cmd_cheeger(args) -> int:
    cover, _ = load_input(args.input)
    pw = graded_cover.compute_path_weights(cover)
    rows = []
    for direction in ("up", "down") if args.direction is None else (args.direction,):
        comps = graded_cover.components(cover, f"quotient-{direction}", args.k).members
        for ci, comp in enumerate(comps):
            try:
                aux = cheeger_mod.build_aux(cover, comp, direction, pw)
            except ValueError:
                rows.append((direction, ci, len(comp), "", "", "", ""))
                continue
            hq = hs = ""
            wq = ws = ""
            if aux.n >= 2:
                hq, wit = cheeger_mod.cheeger_quotient(aux, args.threads)
                wq = " ".join(cover.labels[q] for q in wit)
            hs, (wnodes, worient) = cheeger_mod.cheeger_signed(aux, args.threads)
            ws = " ".join(("-" if worient[q] else "+") + cover.labels[q] for q in wnodes)
            rows.append((direction, ci, len(comp), hq, hs, wq, ws))
    emit(
        rows,
        ("direction", "component", "size", "h_quotient", "h_signed", "cut", "signed_cut"),
        args.format,
    )
    return EXIT_OK


def _bound_table_rows(cover, pw, threads):
    """Bound-table rows, one pair of tables over all k with complete pairs.

    Degenerate pairs (a singleton component on either side) are omitted:
    the combined inequality does not apply to them.
    """
    dim = max(cover.dims)
    quotient_rows, signed_rows = [], []
    for k in range(1, dim + 1):
        for rep in cheeger_mod.combined_report(cover, k, pw, threads):
            if rep.h_quotient_up is None or rep.h_quotient_down is None:
                continue
            quotient_rows.append(
                (
                    k,
                    rep.d_down,
                    rep.h_quotient_up,
                    rep.h_quotient_down,
                    rep.h_quotient_up ** 2 / (2 * k * (k + 1)),
                    rep.h_quotient_down ** 2 / (2 * rep.d_down * (k + 1)),
                    rationalize(rep.gap_quotient),
                    2 * rep.h_quotient_up / (k + 1),
                    2 * rep.h_quotient_down / (k + 1),
                )
            )
            if rep.coherent:
                signed_rows.append((k, rep.d_down, 0, 0, 0, 0, 0, 0, 0))
                continue
            ls_up = rep.h_signed_up ** 2 / (2 * k * (k + 1))
            ls_dn = rep.h_signed_down ** 2 / (2 * rep.d_down * (k + 1))
            signed_rows.append(
                (
                    k,
                    rep.d_down,
                    rep.h_signed_up,
                    rep.h_signed_down,
                    ls_up,
                    ls_dn,
                    rationalize(rep.gap_signed),
                    2 * rep.h_signed_up / (k + 1),
                    2 * rep.h_signed_down / (k + 1),
                )
            )
    return quotient_rows, signed_rows


def cmd_report(args) -> int:
    cover, _ = load_input(args.input)
    pw = graded_cover.compute_path_weights(cover)
    header = (
        "table", "k", "d_down", "h_up", "h_down",
        "lower_up", "lower_down", "gap", "upper_up", "upper_down",
    )
    if args.paper_tables:
        qrows, srows = _bound_table_rows(cover, pw, args.threads)
        rows = [("quotient",) + r for r in qrows] + [("signed",) + r for r in srows]
        emit(rows, header, args.format)
        return EXIT_OK
    ks = [args.k] if args.k is not None else list(range(1, max(cover.dims) + 1))
    rows = []
    for k in ks:
        for rep in cheeger_mod.combined_report(cover, k, pw, args.threads):
            rows.append(
                (
                    k,
                    f"up:{len(rep.up_component)} down:{len(rep.down_component)}",
                    "coherent" if rep.coherent else "",
                    rep.lower_quotient, rep.gap_quotient, rep.upper_quotient,
                    rep.sandwich_quotient_ok,
                    rep.lower_signed, rep.gap_signed, rep.upper_signed,
                    rep.sandwich_signed_ok,
                    rep.rate_lower, rep.rate_upper,
                )
            )
    emit(
        rows,
        (
            "k", "pair", "flags",
            "lower_q", "gap_q", "upper_q", "ok_q",
            "lower_s", "gap_s", "upper_s", "ok_s",
            "rate_lower", "rate_upper",
        ),
        args.format,
    )
    return EXIT_OK


def _verify_checks(cover, cx, threads):
    """The full invariant suite for one input; yields (name, ok, detail)."""
    pw = graded_cover.compute_path_weights(cover)
    # transition structure
    for view in ("quotient", "cover"):
        P = walks.transition_full(cover, view, pw)
        yield f"row_stochastic_{view}", all(s == 1 for s in P.row_sums()), ""
    P = walks.transition_full(cover, "quotient", pw)
    balanced = all(
        pw.through(a) * P.entries[a, b] == pw.through(b) * P.entries[b, a]
        for a in range(cover.n_quotient)
        for b in range(cover.n_quotient)
    )
    yield "detailed_balance_quotient", balanced, ""
    Pc = walks.transition_full(cover, "cover", pw).entries
    n = cover.n_quotient
    flip = lambda u: (u + n) % (2 * n)
    yield "flip_commutation", all(
        Pc[u, v] == Pc[flip(u), flip(v)] for u in range(2 * n) for v in range(2 * n)
    ), ""
    for comp in graded_cover.components(cover, "quotient").members:
        pi = walks.stationary(cover, comp, "full", "quotient", pw)
        vec = [pi.weights.get(q, Fraction(0)) for q in range(n)]
        fixed = all(
            sum(vec[a] * P.entries[a, b] for a in range(n)) == vec[b] for b in range(n)
        )
        yield f"stationary_fixed_point_{comp[0]}", fixed, ""
    # path-count oracle (brute force) on small covers
    total_paths = sum(pw.lp[q] for q in range(n) if cover.is_root(q))
    if total_paths <= 10**4:
        ok = _path_count_oracle(cover, pw)
        yield "path_count_oracle", ok, f"{total_paths} root-to-leaf paths"
    # operator identities and spectra
    for name, (ok, detail) in operators.verify_split(cover, pw).items():
        yield name, ok, detail
    bound, holds = operators.min_eigenvalue_bound(cover, pw)
    yield "min_eigenvalue_bound", holds, f"lambda_min <= -1 + {bound}"
    if cx is not None:
        for name, (ok, detail) in laplacians.verify_hodge_properties(cx).items():
            yield name, ok, detail
        yield "complex_adjacency_consistent", _adjacency_consistent(cover, cx), ""
    if cover.strong:
        yield from _verify_cheeger_checks(cover, pw, threads)


def _path_count_oracle(cover, pw) -> bool:
    def count_up(q):
        if cover.is_leaf(q):
            return 1
        return sum(count_up(v) for v in cover.parents[q])

    def count_down(q):
        if cover.is_root(q):
            return 1
        return sum(count_down(t) for t in cover.children[q])

    return all(
        pw.lp[q] == count_up(q) and pw.rp[q] == count_down(q)
        for q in range(cover.n_quotient)
    )


def _adjacency_consistent(cover, cx) -> bool:
    from .complex_core import adjacency

    for k in range(cx.dimension + 1):
        for direction, adj_of in (("up", cover.up_adjacency), ("down", cover.down_adjacency)):
            mine = adj_of(k)
            theirs = adjacency(cx, k, direction)
            for face, neighbors in theirs.items():
                q = cx.index_of(face)
                if {cx.index_of(g) for g in neighbors} != mine[q]:
                    return False
    return True


def _verify_cheeger_checks(cover, pw, threads):
    dim = max(cover.dims)
    for k in range(1, dim + 1):
        try:
            reports = cheeger_mod.combined_report(cover, k, pw, threads)
        except BruteForceGuardError as exc:
            yield f"cheeger_k{k}", True, f"skipped: {exc}"
            continue
        for rep in reports:
            tag = f"k{k}_comp{rep.down_component[0]}"
            if rep.sandwich_quotient_ok is not None:
                yield f"sandwich_quotient_{tag}", rep.sandwich_quotient_ok, ""
            if rep.sandwich_signed_ok is not None:
                yield f"sandwich_signed_{tag}", rep.sandwich_signed_ok, ""
            coherent = rep.coherent
            if rep.h_signed_down is not None:
                yield (
                    f"signed_zero_iff_coherent_{tag}",
                    (rep.h_signed_down == 0) == coherent,
                    f"h_signed_down = {rep.h_signed_down}",
                )
        # auxiliary Laplacian affine identities, per eligible component:
        # up in dimension m scales by m+2, down in dimension m by m+1
        for direction, kk in (("up", k - 1), ("down", k)):
            comps = graded_cover.components(cover, f"quotient-{direction}", kk).members
            for comp in comps:
                try:
                    aux = cheeger_mod.build_aux(cover, comp, direction, pw)
                except ValueError:
                    continue
                factor = Fraction(kk + 2 if direction == "up" else kk + 1)
                eye = ScaledMatrix.identity(aux.n)
                a_q = (
                    operators.build_conditional(cover, kk, direction, "quotient", pw=pw)
                    .restrict(comp)
                    .sm
                )
                a_s = (
                    operators.build_conditional(cover, kk, direction, "signed", pw=pw)
                    .restrict(comp)
                    .sm
                )
                lap_q = cheeger_mod.aux_laplacian(aux, "quotient").sm
                lap_s = cheeger_mod.aux_laplacian(aux, "signed").sm
                ok = lap_q.equals((eye - a_q).scale(factor)) and lap_s.equals(
                    (eye + a_s).scale(factor)
                )
                yield f"aux_laplacian_identity_{direction}_{kk}_{comp[0]}", ok, (
                    f"factor {factor}"
                )


def cmd_verify(args) -> int:
    cover, cx = load_input(args.input)
    rows = []
    failures = 0
    for name, ok, detail in _verify_checks(cover, cx, args.threads):
        rows.append((name, ok, detail))
        if not ok:
            failures += 1
    rows.append(("TOTAL", failures == 0, f"{len(rows)} checks, {failures} failures"))
    emit(rows, ("check", "ok", "detail"), args.format)
    return EXIT_OK if failures == 0 else EXIT_VERIFY


VERB_OPERATIONS = {
    "lp": ["parse_complex", "parse_cover_spec", "cover_from_complex",
           "compute_path_weights", "leaves_and_roots"],
    "stationary": ["components", "stationary", "expected_path_length"],
    "walk-sim": ["simulate"],
    "spectrum": ["build_bundle", "build_conditional", "eigen", "min_eigenvalue_bound",
                 "convergence_rate"],
    "laplacian": ["hodge", "boundary_matrix", "incidence_sign"],
    "hodge": ["hodge_decomposition"],
    "coherent": ["detect_coherent"],
    "partition": ["find_partition"],
    "cheeger": ["build_aux", "cheeger_quotient", "cheeger_signed"],
    "report": ["combined_report", "component_correspondence"],
    "verify": ["verify_split", "verify_hodge_properties", "check_laplacian_walk_identity",
               "aux_laplacian", "adjacency", "transition_full", "transition_conditional",
               "coherent_spectrum_check"],
    "self-test": ["run"],
}

ALL_OPERATIONS = [
    "parse_complex", "incidence_sign", "boundary_matrix", "adjacency",
    "cover_from_complex", "parse_cover_spec", "compute_path_weights",
    "leaves_and_roots", "components", "component_correspondence",
    "detect_coherent", "find_partition",
    "transition_full", "transition_conditional", "stationary",
    "expected_path_length", "simulate", "convergence_rate",
    "build_bundle", "build_conditional", "eigen", "verify_split",
    "min_eigenvalue_bound", "coherent_spectrum_check",
    "hodge", "hodge_decomposition", "verify_hodge_properties",
    "check_laplacian_walk_identity",
    "build_aux", "aux_laplacian", "cheeger_quotient", "cheeger_signed",
    "combined_report", "run",
]


def cmd_self_test(args) -> int:
    covered = {op: [] for op in ALL_OPERATIONS}
    unknown = []
    for verb, ops in VERB_OPERATIONS.items():
        for op in ops:
            if op in covered:
                covered[op].append(verb)
            else:
                unknown.append((verb, op))
    rows = [(op, bool(verbs), " ".join(verbs)) for op, verbs in covered.items()]
    ok = all(verbs for verbs in covered.values()) and not unknown
    rows.append(("TOTAL", ok, f"{len(ALL_OPERATIONS)} operations"))
    emit(rows, ("operation", "reachable", "verbs"), args.format)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hodgewalk",
        description="Root-to-leaf walks, normalized Hodge Laplacians and Cheeger bounds",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, func, needs_input=True, **extra):
        p = sub.add_parser(name)
        if needs_input:
            p.add_argument("input", help="complex (.cx) or cover-spec file")
        p.add_argument("--format", choices=("tsv", "json"), default="tsv")
        p.set_defaults(func=func)
        return p

    add("lp", cmd_lp)
    p = add("stationary", cmd_stationary)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--direction", choices=("up", "down"), default="up")
    p.add_argument("--view", choices=("quotient", "cover"), default="quotient")
    p = add("walk-sim", cmd_walk_sim)
    p.add_argument("--steps", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", default=None)
    p = add("spectrum", cmd_spectrum)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--direction", choices=("up", "down"), default="up")
    p.add_argument("--flavor", choices=("quotient", "signed", "cover"), default="quotient")
    p.add_argument("--rate", action="store_true", help="also print the convergence rate")
    p = add("laplacian", cmd_laplacian)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--normalized", action="store_true")
    p = add("hodge", cmd_hodge)
    p.add_argument("--normalized", action="store_true")
    p = add("coherent", cmd_coherent)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--direction", choices=("up", "down"), required=True)
    p = add("partition", cmd_partition)
    p.add_argument("--k", type=int, required=True)
    p = add("cheeger", cmd_cheeger)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--direction", choices=("up", "down"), default=None)
    p.add_argument("--threads", type=int, default=1)
    p = add("report", cmd_report)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--paper-tables", action="store_true", dest="paper_tables",
                   help="reproduce the worked-example bound tables")
    p.add_argument("--threads", type=int, default=1)
    p = add("verify", cmd_verify)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--tolerance", type=float, default=1e-8,
                   help="accepted for interface stability; exact checks ignore it")
    add("self-test", cmd_self_test, needs_input=False)
    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ComplexFormatError, CoverSpecError, FileNotFoundError, ValueError) as exc:
        if isinstance(exc, (BruteForceGuardError, NonStrongGradingError, CoherentComponentError)):
            print(f"guard: {exc}", file=sys.stderr)
            return EXIT_GUARD
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
