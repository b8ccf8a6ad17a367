"""Command-line front end.

Subcommands: report, sweep, distribution, channel, verify. State specs come
from flags or a JSON/TOML document; outputs are deterministic JSON or CSV.
Exit codes: 0 ok, 1 invariant failure, 2 config error, 3 inadmissible state.
"""

import argparse
import csv
import io
import json
import math
import sys

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from . import __version__
from .qmat import ValidationError, hermitian_spectrum
from .sud_basis import (
    BlockCorrelationSpec,
    DiagCorrelationSpec,
    GeneratorId,
    build_diag_state,
    closed_form_spectrum_diag3,
)
from .weakmeas import (
    Orientation,
    build_special_family,
    entropic_H,
    family_axiom_violations,
)
from .sqd import (
    correlation_difference_D,
    distribution_experiment,
    measured_mutual_information,
    sqd_upper_bound_block,
    sqd_upper_bound_diag,
)
from .channels import (
    apply_channel_local_A,
    bitflip01_kraus,
    evolved_diag_coeffs,
    sqd_bound_after_channel,
    werner_gap_T,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_CONFIG = 2
EXIT_INADMISSIBLE = 3

DISCREPANCY_LEDGER = [
    "entropy prefactor: reported theorem statements carry 2/d, but every "
    "eigendecomposition gives 2/d^2; all computed bounds use 2/d^2 and the "
    "2/d variant is emitted only for comparison.",
    "uniform-coefficient closed form: the reported spectrum term "
    "(1-3c)log2(1-3c) is inconsistent with the general eigenvalue formula, "
    "which gives (1+3c)log2(1+3c); the derived form is implemented.",
    "channel-gap example (c=(0.2,0.35,0.1), gamma=0.9, x=4, d=2): reported "
    "value -0.0180; closed form and eigendecomposition both give +0.0102.",
    "difference-statistic percentages: the reported 27.66% (x=0.5) arises "
    "only under the 2/d prefactor on the tetrahedron grid, and 88.55% "
    "(projective) only under the 2/d^2 prefactor on the signed octahedron; "
    "the experiment reports both conventions.",
    "Werner channel gap: the reported claim that T(c, gamma) increases on "
    "all of gamma in [0, 1] is false; T(c, 0) = T(c, 1) = 0 with T > 0 in "
    "between (gamma = 0 is a unitary flip, gamma = 1 the identity), so T "
    "increases only on [0, 1/2].",
]


def _write_out(text: str, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(payload: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, **payload}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _parse_c(text: str):
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"--c expects three comma-separated values, got {text!r}")
    return tuple(parts)


def load_state_spec(doc: dict):
    """State spec from a config document: either {"d", "coeffs": [...]} for
    the diagonal family or {"d", "T": 3x3} for the block family."""
    d = int(doc["d"])
    if "T" in doc:
        return BlockCorrelationSpec(d=d, T=np.asarray(doc["T"], dtype=float))
    coeffs = {}
    for entry in doc.get("coeffs", []):
        kind = entry["kind"]
        if kind == "w":
            gid = GeneratorId("w", int(entry["i"]))
        else:
            gid = GeneratorId(kind, int(entry["i"]), int(entry["j"]))
        coeffs[gid] = float(entry["c"])
    return DiagCorrelationSpec(d=d, coeffs=coeffs)


def _load_config(path: str) -> dict:
    with open(path, "rb") as fh:
        if path.endswith(".toml"):
            return tomllib.load(fh)
        return json.loads(fh.read().decode())


def _spec_from_args(args):
    if getattr(args, "spec", None):
        return load_state_spec(_load_config(args.spec))
    if getattr(args, "tmatrix", None):
        doc = _load_config(args.tmatrix)
        return BlockCorrelationSpec(d=int(doc.get("d", args.d)), T=np.asarray(doc["T"], dtype=float))
    if args.c is None:
        raise ValueError("a state spec is required: --c, --spec, or --tmatrix")
    return DiagCorrelationSpec.diag3(args.d, *_parse_c(args.c))


def _report_payload(rep) -> dict:
    return {
        "mutual_info": rep.mutual_info,
        "classical_corr_special": rep.classical_corr_special,
        "sqd_upper_bound": rep.sqd_upper_bound,
        "classical_corr_printed_factor": rep.classical_corr_printed,
        "sqd_upper_bound_printed_factor": rep.sqd_upper_bound_printed,
        "theta_star": rep.theta_star,
        "argmax_z": list(rep.argmax_z.as_array()),
        "method": rep.method,
        "notes": rep.notes,
    }


def cmd_report(args) -> int:
    try:
        spec = _spec_from_args(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if isinstance(spec, BlockCorrelationSpec):
            rep = sqd_upper_bound_block(spec, args.x)
        else:
            rep = sqd_upper_bound_diag(spec, args.x)
    except ValidationError as exc:
        print(f"inadmissible state: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    payload = _report_payload(rep)
    payload["d"] = spec.d
    payload["x"] = args.x
    payload["discrepancy_flags"] = DISCREPANCY_LEDGER[:2]
    _write_out(_json_doc(payload), args.out)
    return EXIT_OK


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:count, got {text!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError("grid count must be >= 1")
    return np.linspace(start, stop, count)


def cmd_sweep(args) -> int:
    try:
        c_grid = _parse_grid(args.c_grid)
        x_grid = _parse_grid(args.x_grid)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["d", "c", "x", "sqd_bound", "projective_bound", "difference"])
    for c in c_grid:
        spec = DiagCorrelationSpec.diag3(args.d, -c, -c, -c)
        try:
            rho_mi = sqd_upper_bound_diag(spec, 0.0).mutual_info
        except ValidationError as exc:
            print(f"inadmissible state at c={c}: {exc}", file=sys.stderr)
            return EXIT_INADMISSIBLE
        projective = rho_mi - (2.0 / args.d**2) * entropic_H(float(c))
        for x in x_grid:
            bound = rho_mi - (2.0 / args.d**2) * entropic_H(float(c) * abs(math.tanh(x)))
            writer.writerow(
                [args.d, repr(float(c)), repr(float(x)), repr(bound),
                 repr(projective), repr(bound - projective)]
            )
    _write_out(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_distribution(args) -> int:
    try:
        result = distribution_experiment(
            d=args.d,
            x=args.x,
            grid_step=args.step,
            sampler=args.sampler,
            seed=args.seed,
            region=args.region,
            n_random=args.n_random,
        )
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    payload = {
        "samples": result.samples,
        "fraction_nonneg": result.fraction_nonneg,
        "fraction_nonneg_printed_factor": result.fraction_nonneg_printed,
        "grid_step": result.grid_step,
        "d": result.d,
        "x": result.x,
        "region": result.region,
        "sampler": result.sampler,
        "reference_fractions": {"x=0.5": 0.2766, "projective": 0.8855},
    }
    _write_out(_json_doc(payload), args.out)
    if args.samples_out:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["c1", "c2", "c3", "D"])
        g = np.arange(0.0, 1.0 + args.step / 2.0, args.step)
        for c1 in g:
            for c2 in g:
                for c3 in g:
                    try:
                        dval = correlation_difference_D((c1, c2, c3), args.x, args.d)
                    except ValueError:
                        continue
                    writer.writerow([repr(float(c1)), repr(float(c2)),
                                     repr(float(c3)), repr(dval)])
        with open(args.samples_out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    return EXIT_OK


def cmd_channel(args) -> int:
    try:
        spec = _spec_from_args(args)
        if not isinstance(spec, DiagCorrelationSpec):
            raise ValueError("channel command expects a diagonal-family spec")
    except (ValueError, KeyError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        before = sqd_upper_bound_diag(spec, args.x)
        after = sqd_bound_after_channel(spec, args.gamma, args.x)
    except ValidationError as exc:
        print(f"inadmissible state: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    c = spec.pauli_coeffs()
    payload = {
        "d": spec.d,
        "x": args.x,
        "gamma": args.gamma,
        "coeffs": list(c),
        "evolved_coeffs": list(evolved_diag_coeffs(c, args.gamma)),
        "bound_before": _report_payload(before),
        "bound_after": _report_payload(after),
        "gap": before.sqd_upper_bound - after.sqd_upper_bound,
    }
    if c[0] == c[1] == c[2] and c[0] <= 0.0:
        payload["werner_gap_closed_form"] = werner_gap_T(-c[0], args.gamma)
    _write_out(_json_doc(payload), args.out)
    return EXIT_OK


def _verify_checks(tol: float, rng: np.random.Generator):
    """Named invariant checks; yields (name, max_violation)."""
    # Weak-measurement axioms on random orientations.
    worst = 0.0
    for d in (2, 3, 4):
        for _ in range(10):
            q = rng.normal(size=4)
            o = Orientation.normalized(*q)
            for x in (0.0, 0.7, 30.0):
                fam = build_special_family(o, x, d)
                v = family_axiom_violations(fam)
                worst = max(worst, v["completeness"], v["commutators"],
                            v["hermiticity"], max(0.0, -v["min_eigenvalue"]))
    yield "weak-measurement axioms", worst

    # Closed-form spectra vs eigendecomposition.
    worst = 0.0
    for d in (2, 3):
        for _ in range(20):
            c = rng.uniform(-1, 1, size=3)
            c *= rng.uniform(0, 1) / max(1e-12, np.sum(np.abs(c)))
            spec = DiagCorrelationSpec.diag3(d, *c)
            rho = build_diag_state(spec)
            expected = []
            for val, mult in closed_form_spectrum_diag3(*c, d):
                expected.extend([val] * mult)
            got = hermitian_spectrum(rho.mat)
            worst = max(worst, float(np.max(np.abs(np.sort(expected) - got))))
    yield "closed-form spectrum", worst

    # Measured mutual information prefactor.
    worst = 0.0
    for d in (2, 3):
        spec = DiagCorrelationSpec.diag3(d, 0.2, -0.3, 0.1)
        rho = build_diag_state(spec)
        for _ in range(5):
            q = rng.normal(size=4)
            o = Orientation.normalized(*q)
            from .weakmeas import z_from_orientation
            from .sqd import theta_diag
            z = z_from_orientation(o)
            theta = theta_diag((0.2, -0.3, 0.1), z, 0.8)
            fam = build_special_family(o, 0.8, d)
            mi = measured_mutual_information(rho, fam)
            worst = max(worst, abs(mi - (2.0 / d**2) * entropic_H(theta)))
    yield "measured-MI prefactor 2/d^2", worst

    # Channel coefficient map and completeness.
    worst = 0.0
    for d in (2, 3):
        for gamma in (0.0, 0.3, 1.0):
            ch = bitflip01_kraus(gamma, d)
            spec = DiagCorrelationSpec.diag3(d, 0.1, -0.2, 0.15)
            evolved = apply_channel_local_A(build_diag_state(spec), ch)
            direct = build_diag_state(
                DiagCorrelationSpec.diag3(d, *evolved_diag_coeffs((0.1, -0.2, 0.15), gamma))
            )
            worst = max(worst, float(np.max(np.abs(evolved.mat - direct.mat))))
    yield "channel coefficient map", worst

    # Werner gap: zero at both channel endpoints, nonnegative throughout,
    # monotone on [0, 1/2]. (Monotonicity on all of [0, 1] is the reported
    # claim; it is false, see the discrepancy ledger.)
    worst = 0.0
    cs = np.linspace(0.0, 0.99, 25)
    for c in cs:
        worst = max(worst, abs(werner_gap_T(c, 0.0)), abs(werner_gap_T(c, 1.0)))
        prev = None
        for g in np.linspace(0.0, 1.0, 25):
            t = werner_gap_T(c, g)
            worst = max(worst, max(0.0, -t))
            if prev is not None and g <= 0.5:
                worst = max(worst, max(0.0, prev - t))
            prev = t
    yield "Werner gap endpoints/sign/monotone-on-[0,1/2]", worst

    # Scaling of the diagonal bound.
    base = None
    worst = 0.0
    for d in (2, 3, 5):
        rep = sqd_upper_bound_diag(DiagCorrelationSpec.diag3(d, 0.2, 0.35, 0.1), 1.2)
        scaled = d**2 * rep.sqd_upper_bound
        if base is None:
            base = scaled
        else:
            worst = max(worst, abs(scaled - base))
    yield "d^2 scaling of the bound", worst


def cmd_verify(args) -> int:
    rng = np.random.Generator(np.random.Philox(key=(args.seed, 0)))
    tol = args.tol
    failures = 0
    for name, violation in _verify_checks(tol, rng):
        ok = violation <= tol
        print(f"{'PASS' if ok else 'FAIL'}  {name}: max violation {violation:.3e} "
              f"(tol {tol:.1e})")
        if not ok:
            failures += 1
    print("\nknown-discrepancy ledger:")
    for i, entry in enumerate(DISCREPANCY_LEDGER, 1):
        print(f"  [{i}] {entry}")
    if failures:
        print(f"\n{failures} invariant check(s) failed", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def build_parser(defaults: dict | None = None) -> argparse.ArgumentParser:
    """Build the argument parser; `defaults` (from --config) are applied to
    every subcommand so explicit flags still win."""
    parser = argparse.ArgumentParser(
        prog="sqdiscord",
        description="Correlation bounds for bipartite qudit states under weak measurement.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON or TOML document with defaults for this run")
        p.add_argument("--d", type=int, default=2, help="subsystem dimension")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output path (stdout if omitted)")
        p.add_argument("--format", choices=["csv", "json"], default=None,
                       help="output format (fixed per command; accepted for config symmetry)")

    p = sub.add_parser("report", help="correlation report for one state")
    common(p)
    p.add_argument("--c", help="c1,c2,c3 for the diagonal family")
    p.add_argument("--spec", help="state-spec document (JSON/TOML)")
    p.add_argument("--tmatrix", help="block-family document with a 3x3 T")
    p.add_argument("--x", type=float, default=1.0, help="measurement strength")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("sweep", help="bound surface over a (c, x) grid, CSV")
    common(p)
    p.add_argument("--c-grid", default="0:0.95:20", help="start:stop:count for c")
    p.add_argument("--x-grid", default="-5:5:21", help="start:stop:count for x")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("distribution", help="difference-statistic distribution")
    common(p)
    p.add_argument("--x", type=float, default=0.5)
    p.add_argument("--step", type=float, default=0.01, help="coefficient grid step")
    p.add_argument("--sampler", choices=["grid", "random"], default="grid")
    p.add_argument("--region", choices=["tetrahedron", "octahedron"],
                   default="tetrahedron")
    p.add_argument("--n-random", type=int, default=0)
    p.add_argument("--samples-out", help="optional per-sample CSV path")
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("channel", help="bounds before/after the built-in channel")
    common(p)
    p.add_argument("--c", help="c1,c2,c3 for the diagonal family")
    p.add_argument("--spec", help="state-spec document (JSON/TOML)")
    p.add_argument("--tmatrix", help=argparse.SUPPRESS)
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("verify", help="run invariant suites and the discrepancy ledger")
    common(p)
    p.add_argument("--tol", type=float, default=1e-9,
                   help="violation tolerance for every check")
    p.set_defaults(func=cmd_verify)
    if defaults:
        # Subcommands parse into their own namespace, so config-supplied
        # defaults must be set on each subparser, not just the root.
        for subparser in sub.choices.values():
            subparser.set_defaults(**defaults)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    # First pass picks up --config so the document can supply defaults;
    # explicit flags still win on the second pass.
    args, _ = parser.parse_known_args(argv)
    if getattr(args, "config", None):
        try:
            doc = _load_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        known = {a.replace("-", "_"): v for a, v in doc.items()}
        parser = build_parser(defaults=known)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
