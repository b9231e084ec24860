"""Command-line front end.

Usage::

    opfarkas <subcommand> INSTANCE.json [--seed N] [--sides K] [--precision P/Q]
                                        [--orthant-budget B] [--parallel]

The instance ``kind`` must match the subcommand.  A JSON result document is
written to stdout; diagnostics go to stderr.  Exit codes: 0 positive
decision, 1 negative decision, 2 input error, 3 undecided or over budget.

Every certificate or witness is re-checked before printing by the
``verify_*`` functions, which recompute from the parsed instance.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from . import complex_engine as cx
from . import farkas as fk
from . import interval as iv
from . import oracle as orc
from .lattice import BudgetExceeded, DimensionError, Operator
from .schema import (
    InputError,
    complex_matrix,
    complex_value,
    enc_band,
    enc_c,
    enc_diag,
    enc_op,
    enc_q,
    enc_vec,
    list_of,
    matrix,
    optional_int,
    require,
    vector,
)

SUBCOMMANDS = (
    "dominance", "inhomogeneous", "matrix", "reconstruct", "interval",
    "complex-verify", "complex-search", "factor", "factor-positive", "oracle",
)

EXIT_CODES = {
    "certificate": 0, "holds": 0, "valid": 0,
    "witness": 1, "no-solution": 1, "violation": 1, "invalid": 1,
    "undecided": 3, "inconsistent-stratum": 3,
    "error": 2,
}


def _dims(doc):
    return optional_int(doc, "m"), optional_int(doc, "n")


def _operators(doc, key, count, m, n):
    return [matrix(a, f"{key}[{k}]", m, n) for k, a in enumerate(list_of(doc, key, count))]


def _points(doc, key, count, m):
    return [vector(p, f"{key}[{k}]", m) for k, p in enumerate(list_of(doc, key, count))]


def _dominance(doc, opts):
    m, n = _dims(doc)
    B = matrix(require(doc, "B"), "B", m, n)
    A = _operators(doc, "A", optional_int(doc, "N"), B.rows, B.cols)
    inst = fk.HomogeneousInstance(A, B)
    out = fk.decide_dominance(inst, parallel=opts.parallel)
    if isinstance(out, fk.DominanceCertificate):
        return "certificate", {"alphas": [enc_diag(a) for a in out.alphas]}, \
            fk.verify_dominance_certificate(inst, out)
    return "witness", {"x": enc_vec(out.x), "b": enc_band(out.b), "b_prime": enc_band(out.b_prime)}, \
        fk.verify_alternative_witness(inst, out)


def _inhomogeneous(doc, opts):
    m, n = _dims(doc)
    B = matrix(require(doc, "B"), "B", m, n)
    N = optional_int(doc, "N")
    A = _operators(doc, "A", N, B.rows, B.cols)
    inst = fk.InhomogeneousInstance(A, B, _points(doc, "u", len(A), B.rows),
                                    vector(require(doc, "v"), "v", B.rows))
    out = fk.decide_inhomogeneous(inst, parallel=opts.parallel)
    if isinstance(out, fk.DominanceCertificate):
        return "certificate", {"alphas": [enc_diag(a) for a in out.alphas]}, \
            fk.verify_inhomogeneous_certificate(inst, out)
    if isinstance(out, fk.Witness):
        return "witness", {"x": enc_vec(out.x), "b": enc_band(out.b)}, \
            fk.verify_inhomogeneous_witness(inst, out)
    return "inconsistent-stratum", {"band": enc_band(out.band), "multipliers": enc_vec(out.multipliers)}, \
        fk.verify_inconsistent_stratum(inst, out)


def _matrix(doc, opts):
    m, n = _dims(doc)
    s, t = optional_int(doc, "s"), optional_int(doc, "t")
    A_raw = list_of(doc, "A", t)
    if not A_raw:
        raise InputError("A: need at least one block")
    A0 = matrix(A_raw[0], "A[0]", m, n)
    m, n = A0.shape
    A = _operators(doc, "A", t, m, n)
    B = _operators(doc, "B", s, m, n)
    inst = fk.MatrixInstance(A, B, _points(doc, "u", len(A), m), _points(doc, "v", len(B), m))
    out = fk.decide_matrix_dominance(inst, parallel=opts.parallel)
    if isinstance(out, fk.MatrixCertificate):
        return "certificate", {"X": [[enc_diag(x) for x in row] for row in out.X]}, \
            fk.verify_matrix_certificate(inst, out)
    if isinstance(out, fk.MatrixWitness):
        return "witness", {"x": enc_vec(out.x), "b": enc_band(out.b), "block": out.block}, \
            fk.verify_matrix_witness(inst, out)
    return "inconsistent-stratum", {"band": enc_band(out.band), "multipliers": enc_vec(out.multipliers)}, \
        fk.verify_inconsistent_stratum(inst, out)


def _reconstruct(doc, opts):
    m, n = _dims(doc)
    A = matrix(require(doc, "A"), "A", m, n)
    B = matrix(require(doc, "B"), "B", A.rows, A.cols)
    out = fk.reconstruct(A, B)
    if isinstance(out, fk.ReconstructionResult):
        return "certificate", {"alpha": enc_diag(out.alpha), "kappa": enc_band(out.kappa)}, \
            fk.verify_reconstruction(A, B, out)
    return "no-solution", {"stratum": out.stratum, "reason": out.reason}, \
        fk.verify_no_reconstruction(A, B, out)


def _interval_op(value, where, m, n):
    if not isinstance(value, dict):
        raise InputError(f"{where}: expected an object with lower and upper")
    lo = matrix(require(value, "lower"), f"{where}.lower", m, n)
    hi = matrix(require(value, "upper"), f"{where}.upper", lo.rows, lo.cols)
    try:
        return iv.IntervalOperator(lo, hi)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def _interval(doc, opts):
    m, n = _dims(doc)
    Bi = _interval_op(require(doc, "B"), "B", m, n)
    m, n = Bi.shape
    Ai = [_interval_op(a, f"A[{k}]", m, n)
          for k, a in enumerate(list_of(doc, "A", optional_int(doc, "N")))]
    weak = iv.find_weak_solution(Ai, Bi, parallel=opts.parallel)
    incl = iv.check_interval_inclusion(Ai, Bi, orthant_budget=opts.orthant_budget,
                                       parallel=opts.parallel)
    if isinstance(weak, iv.WeakSolution):
        body = {
            "alphas": [enc_diag(a) for a in weak.alphas],
            "A_selections": [enc_op(S) for S in weak.A_selections],
            "B_selection": enc_op(weak.B_selection),
            "inclusion": "holds" if isinstance(incl, iv.Holds) else "violated",
        }
        ok = iv.verify_weak_solution(Ai, Bi, weak) and isinstance(incl, iv.Holds)
        return "certificate", body, ok
    if isinstance(incl, iv.Violation):
        body = {"x": enc_vec(incl.x), "b": enc_band(incl.b), "weak_solution_stratum": weak.stratum}
        return "violation", body, iv.verify_violation(Ai, Bi, incl)
    # the two sides disagree; report rather than guess
    return "no-solution", {"weak_solution_stratum": weak.stratum, "inclusion": "holds"}, False


def _complex_data(doc):
    m, n = _dims(doc)
    Braw = require(doc, "B")
    B = complex_matrix(Braw, "B", m, n)
    m, n = B.shape
    A = [complex_matrix(a, f"A[{k}]", m, n)
         for k, a in enumerate(list_of(doc, "A", optional_int(doc, "N")))]
    u = _points(doc, "u", len(A), m)
    v = vector(require(doc, "v"), "v", m)
    if any(c < 0 for p in u for c in p):
        raise InputError("u: modulus bounds must be nonnegative")
    return A, B, u, v


def _lower_sum_exceeds(c_list, u, v, i, budget):
    for step in range(budget + 1):
        prec = Fraction(1, 2 ** (step + 1))
        lo = sum((cx.modulus_enclosure(c.diag[i], prec).lower * uk[i] for c, uk in zip(c_list, u)),
                 Fraction(0))
        if lo > v[i]:
            return True
    return False


def _complex_verify(doc, opts):
    A, B, u, v = _complex_data(doc)
    m = B.rows
    c_raw = list_of(doc, "c", len(A))
    c_list = []
    for k, row in enumerate(c_raw):
        if not isinstance(row, list) or len(row) != m:
            raise InputError(f"c[{k}]: expected {m} complex entries")
        c_list.append(cx.ComplexDiagonalOrthomorphism([complex_value(z, f"c[{k}][{i}]")
                                                       for i, z in enumerate(row)]))
    budget = optional_int(doc, "budget")
    budget = cx.DEFAULT_REFINEMENTS if budget is None else budget
    verdict = cx.verify_complex_certificate(c_list, A, B, u, v, budget)
    sums = []
    for i in range(m):
        lo = hi = Fraction(0)
        for c, uk in zip(c_list, u):
            e = cx.modulus_enclosure(c.diag[i], opts.precision)
            lo += e.lower * uk[i]
            hi += e.upper * uk[i]
        sums.append([enc_q(lo), enc_q(hi)])
    body = {"stratum": verdict.stratum, "reason": verdict.reason, "modulus_sums": sums}
    # the identity is recomputed here; a valid verdict also needs every upper sum settled
    zero = cx.GaussianRational(Fraction(0))
    identity = all(
        sum((c.diag[i] * Ak.entries[i][j] for c, Ak in zip(c_list, A)), zero) == B.entries[i][j]
        for i in range(m) for j in range(B.cols))
    if verdict.status == "valid":
        ok = identity
    elif verdict.status == "invalid":
        ok = not identity or _lower_sum_exceeds(c_list, u, v, verdict.stratum, budget)
    else:
        ok = False
    return verdict.status, body, ok


def _complex_search(doc, opts):
    A, B, u, v = _complex_data(doc)
    out = cx.search_complex_certificate(A, B, u, v, sides=opts.sides)
    if isinstance(out, cx.NotFound):
        return "undecided", {"stratum": out.stratum, "reason": out.reason}, False
    verdict = cx.verify_complex_certificate(out, A, B, u, v)
    return "certificate", {"c": [[enc_c(z) for z in c.diag] for c in out]}, verdict.status == "valid"


def _factor_pair(doc):
    A = matrix(require(doc, "A"), "A", optional_int(doc, "p"), optional_int(doc, "n"))
    B = matrix(require(doc, "B"), "B", optional_int(doc, "m"), A.cols)
    return A, B


def _factor(doc, opts):
    A, B = _factor_pair(doc)
    out = fk.factor_through(A, B)
    if isinstance(out, Operator):
        return "certificate", {"X": enc_op(out)}, fk.verify_factor(A, B, out)
    return "no-solution", {"row": out.stratum, "kernel_vector": enc_vec(out.kernel_vector),
                           "reason": out.reason}, fk.verify_kernel_witness(A, B, out)


def _factor_positive(doc, opts):
    A, B = _factor_pair(doc)
    out = fk.factor_positive(A, B)
    if isinstance(out, Operator):
        return "certificate", {"X": enc_op(out)}, fk.verify_factor(A, B, out, positive=True)
    return "witness", {"x": enc_vec(out.x), "row": out.row}, fk.verify_positive_witness(A, B, out)


def _oracle(doc, opts):
    c = vector(require(doc, "c"), "c")
    n = len(c)
    M = [vector(r, f"M[{i}]", n) for i, r in enumerate(list_of(doc, "M"))]
    trials = optional_int(doc, "trials") or 1000
    res = orc.inclusion_oracle(M, c, n)
    sample = orc.falsify_by_sampling(M, c, trials=trials, seed=opts.seed, n=n)
    sampled = enc_vec(sample.x) if isinstance(sample, orc.Counterexample) else None
    gens = orc.extreme_rays(M, n)
    generators = {"rays": [enc_vec(r) for r in gens.rays],
                  "lineality_basis": [enc_vec(d) for d in gens.lineality_basis]}
    dot = lambda a, b: sum((x * y for x, y in zip(a, b)), Fraction(0))  # noqa: E731
    if isinstance(res, orc.Holds):
        ok = orc.verify_generators(M, gens) and sampled is None
        return "holds", {"generators": generators, "sampled_counterexample": sampled}, ok
    d = res.direction
    ok = all(dot(r, d) <= 0 for r in M) and dot(c, d) > 0
    return "violation", {"direction": enc_vec(d), "generators": generators,
                         "sampled_counterexample": sampled}, ok


HANDLERS = {
    "dominance": _dominance,
    "inhomogeneous": _inhomogeneous,
    "matrix": _matrix,
    "reconstruct": _reconstruct,
    "interval": _interval,
    "complex-verify": _complex_verify,
    "complex-search": _complex_search,
    "factor": _factor,
    "factor-positive": _factor_positive,
    "oracle": _oracle,
}


def _document(kind, result, body, verified):
    return {
        "kind": kind,
        "result": result,
        "body": body,
        "verified": bool(verified),
        "engine_version": __version__,
    }


def run(subcommand: str, input_path: str, opts) -> tuple[dict, int]:
    """Execute one subcommand; returns the result document and exit code."""
    try:
        if input_path == "-":
            doc = json.load(sys.stdin)
        else:
            with open(input_path, encoding="utf-8") as fh:
                doc = json.load(fh)
        if not isinstance(doc, dict):
            raise InputError("instance must be a JSON object")
        kind = doc.get("kind", subcommand)
        if kind != subcommand:
            raise InputError(f"instance kind {kind!r} does not match subcommand {subcommand!r}")
        result, body, verified = HANDLERS[subcommand](doc, opts)
    except (InputError, DimensionError, json.JSONDecodeError, OSError) as exc:
        print(f"opfarkas: {exc}", file=sys.stderr)
        return _document(subcommand, "error", {"message": str(exc)}, False), 2
    except BudgetExceeded as exc:
        print(f"opfarkas: {exc}", file=sys.stderr)
        return _document(subcommand, "undecided", {"reason": str(exc)}, False), 3
    if result in ("certificate", "witness") and not verified:
        print("opfarkas: re-verification failed", file=sys.stderr)
    return _document(subcommand, result, body, verified), EXIT_CODES[result]


def _precision(text: str) -> Fraction:
    try:
        p = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    if p <= 0:
        raise argparse.ArgumentTypeError("precision must be positive")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="instance JSON file, or - for stdin")
    common.add_argument("--seed", type=int, default=0, help="sampling seed (oracle)")
    common.add_argument("--sides", type=int, default=8, help="polygon sides for complex-search")
    common.add_argument("--precision", type=_precision, default=Fraction(1, 1000),
                        help="enclosure width reported by complex-verify, as p/q")
    common.add_argument("--orthant-budget", type=int, default=iv.DEFAULT_ORTHANT_BUDGET,
                        help="largest n for orthant enumeration (interval)")
    common.add_argument("--parallel", action="store_true",
                        help="evaluate strata on a thread pool; output is unchanged")
    parser = argparse.ArgumentParser(prog="opfarkas", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        opts = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if opts.sides < 4 or opts.sides % 2:
        print("opfarkas: --sides must be an even integer >= 4", file=sys.stderr)
        return 2
    doc, code = run(opts.subcommand, opts.input, opts)
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
