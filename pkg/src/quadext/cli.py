"""Command-line surface: norm, extend, verify, gen, selftest.

Instance files are JSON with a top-level "format": 1 field; floats are
serialized with Python's shortest round-trip representation, so a generated
file parses back to bitwise-identical matrices.

Exit codes: 0 success, 1 invalid input, 2 verification failure,
3 degenerate-z.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .core import QuadOnSubspace, Subspace, SymForm, TwoEllipsoidSpace
from .errors import (
    DegenerateZError,
    ExtensionVerificationError,
    InvalidInputError,
    PencilInfeasibleError,
    QuadExtError,
)
from .extend import extend
from .normcalc import norm_on_subspace
from .verify import InstanceSpec, random_instance, verify_extension

FILE_FORMAT = 1

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAIL = 2
EXIT_DEGENERATE_Z = 3


def _matrix(obj, name, rows=None, cols=None):
    try:
        m = np.array(obj, dtype=float)
    except (TypeError, ValueError) as err:
        raise InvalidInputError(f"field '{name}' is not a numeric matrix: {err}") from err
    if m.ndim != 2:
        raise InvalidInputError(f"field '{name}' must be a 2-d array")
    if rows is not None and m.shape[0] != rows:
        raise InvalidInputError(f"field '{name}' must have {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise InvalidInputError(f"field '{name}' must have {cols} columns, got {m.shape[1]}")
    return m


def load_instance(path):
    """Parse and validate an instance file into a space and a subspace form."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as err:
        raise InvalidInputError(f"cannot read instance file: {err}") from err
    except json.JSONDecodeError as err:
        raise InvalidInputError(f"instance file is not valid JSON: {err}") from err
    if doc.get("format") != FILE_FORMAT:
        raise InvalidInputError(f"unsupported file format {doc.get('format')!r}")
    for key in ("dim", "pi1", "pi2", "subspace_basis", "form"):
        if key not in doc:
            raise InvalidInputError(f"missing field '{key}'")
    n = int(doc["dim"])
    pi1 = _matrix(doc["pi1"], "pi1", n, n)
    pi2 = _matrix(doc["pi2"], "pi2", n, n)
    basis = _matrix(doc["subspace_basis"], "subspace_basis", cols=n)
    k = basis.shape[0]
    form = _matrix(doc["form"], "form", k, k)
    space = TwoEllipsoidSpace(pi1, pi2)
    quad = QuadOnSubspace(Subspace(basis), SymForm(form))
    return space, quad


def save_instance(path, space, quad):
    doc = {
        "format": FILE_FORMAT,
        "dim": space.n,
        "pi1": space.pi1.matrix.tolist(),
        "pi2": space.pi2.matrix.tolist(),
        "subspace_basis": quad.subspace.basis.tolist(),
        "form": quad.form.entries.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_extension(path, n):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as err:
        raise InvalidInputError(f"cannot read extension file: {err}") from err
    except json.JSONDecodeError as err:
        raise InvalidInputError(f"extension file is not valid JSON: {err}") from err
    if doc.get("format") != FILE_FORMAT:
        raise InvalidInputError(f"unsupported file format {doc.get('format')!r}")
    if "extended" not in doc:
        raise InvalidInputError("missing field 'extended'")
    return _matrix(doc["extended"], "extended", n, n)


def _error_object(err, kind):
    payload = {"error": kind, "message": str(err)}
    for attr in ("alpha", "min_eig", "achieved", "zero_multiplicities", "residuals"):
        value = getattr(err, attr, None)
        if value is not None:
            payload[attr] = value
    print(json.dumps(payload), file=sys.stderr)


def cmd_norm(args) -> int:
    space, quad = load_instance(args.file)
    result = norm_on_subspace(quad, space, tol=args.tol)
    print(f"norm: {result.value!r}")
    print(f"alpha: {result.certificate.alpha!r}")
    print(f"beta: {result.certificate.beta!r}")
    print(f"scale: {result.value!r}")
    print(f"witness: {json.dumps([float(v) for v in result.lower_witness])}")
    return EXIT_OK


def cmd_extend(args) -> int:
    space, quad = load_instance(args.file)
    report = extend(space, quad, tol=args.tol, retry_degenerate_z=args.retry_degenerate_z)
    doc = {
        "format": FILE_FORMAT,
        "extended": report.extended.entries.tolist(),
        "original_norm": report.original_norm.value,
        "extended_norm": report.extended_norm.value,
        "agreement_residual": report.agreement_residual,
        "steps": [step.summary() for step in report.steps],
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(f"original_norm: {report.original_norm.value!r}")
    print(f"extended_norm: {report.extended_norm.value!r}")
    print(f"steps: {len(report.steps)}")
    print(f"wrote: {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    space, quad = load_instance(args.file)
    btilde = load_extension(args.extension_file, space.n)
    report = verify_extension(
        space, quad, btilde, tol=args.tol_verify, samples=args.samples, seed=args.seed
    )
    print(f"restriction_residual: {report.restriction_residual!r}")
    print(f"original_norm: {report.original_norm!r}")
    print(f"extended_norm: {report.extended_norm!r}")
    print(f"sampler_bound: {report.sampler_bound!r}")
    print("result: " + ("pass" if report.passed else "fail"))
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def cmd_gen(args) -> int:
    if args.subdim < 1:
        raise InvalidInputError("--subdim must be at least 1")
    if args.dim < 1:
        raise InvalidInputError("--dim must be at least 1")
    spec = InstanceSpec(n=args.dim, k=args.subdim, seed=args.seed, conditioning=args.cond)
    space, quad = random_instance(spec)
    save_instance(args.out, space, quad)
    print(f"wrote: {args.out}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    if args.instances < 1:
        raise InvalidInputError("--instances must be at least 1")
    combos = [(n, k) for n in range(2, 7) for k in range(1, n)]
    failures = []
    degenerate_seeds = []
    worst_agreement = 0.0
    worst_excess = -float("inf")
    for i in range(args.instances):
        n, k = combos[i % len(combos)]
        seed = args.seed + i
        space, quad = random_instance(InstanceSpec(n=n, k=k, seed=seed))
        try:
            report = extend(space, quad, tol=args.tol)
        except DegenerateZError as err:
            degenerate_seeds.append(seed)
            failures.append((i, seed, f"degenerate-z: {err}"))
            continue
        except QuadExtError as err:
            failures.append((i, seed, f"{type(err).__name__}: {err}"))
            continue
        ver = verify_extension(
            space, quad, report.extended, samples=args.samples, seed=seed
        )
        worst_agreement = max(worst_agreement, ver.restriction_residual)
        worst_excess = max(worst_excess, ver.extended_norm - ver.original_norm)
        if not ver.passed:
            failures.append((i, seed, "verification failed"))
    print(f"instances: {args.instances}")
    print(f"passed: {args.instances - len(failures)}")
    print(f"failed: {len(failures)}")
    print(f"degenerate_z: {len(degenerate_seeds)}")
    if degenerate_seeds:
        print(f"degenerate_z_seeds: {degenerate_seeds}")
    print(f"worst_agreement_residual: {worst_agreement!r}")
    print(f"worst_norm_excess: {worst_excess!r}")
    for index, seed, reason in failures:
        print(f"FAIL instance {index} seed {seed}: {reason}")
    return EXIT_OK if not failures else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="pencil tolerance")
    common.add_argument(
        "--samples", type=int, default=100_000, help="sampler draws for verification"
    )
    common.add_argument("--seed", type=int, default=0, help="random seed")

    parser = argparse.ArgumentParser(
        prog="quadext",
        description="Norms and norm-preserving extensions of quadratic forms "
        "on two-ellipsoid normed spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", parents=[common], help="certified subspace norm")
    p_norm.add_argument("file", help="instance file")
    p_norm.set_defaults(func=cmd_norm)

    p_ext = sub.add_parser("extend", parents=[common], help="norm-preserving extension")
    p_ext.add_argument("file", help="instance file")
    p_ext.add_argument("out", help="output extension file")
    p_ext.add_argument(
        "--retry-degenerate-z",
        action="store_true",
        help="retry degenerate steps with reassigned zero eigenvalues",
    )
    p_ext.set_defaults(func=cmd_extend)

    p_ver = sub.add_parser("verify", parents=[common], help="check an extension file")
    p_ver.add_argument("file", help="instance file")
    p_ver.add_argument("extension_file", help="extension file")
    p_ver.add_argument(
        "--tol-verify", type=float, default=1e-6, help="relative slack for the norm checks"
    )
    p_ver.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("gen", parents=[common], help="generate a random instance")
    p_gen.add_argument("--dim", type=int, required=True)
    p_gen.add_argument("--subdim", type=int, required=True)
    p_gen.add_argument("--cond", type=float, default=1000.0)
    p_gen.add_argument("out", help="output instance file")
    p_gen.set_defaults(func=cmd_gen)

    p_self = sub.add_parser("selftest", parents=[common], help="end-to-end random suite")
    p_self.add_argument("--instances", type=int, default=25)
    p_self.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_INVALID if err.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except DegenerateZError as err:
        _error_object(err, "degenerate-z")
        return EXIT_DEGENERATE_Z
    except (ExtensionVerificationError, PencilInfeasibleError) as err:
        _error_object(err, type(err).__name__)
        return EXIT_VERIFY_FAIL
    except InvalidInputError as err:
        _error_object(err, "invalid-input")
        return EXIT_INVALID
    except QuadExtError as err:
        _error_object(err, type(err).__name__)
        return EXIT_VERIFY_FAIL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
