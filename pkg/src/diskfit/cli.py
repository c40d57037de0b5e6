"""Command-line harness: ``diskfit reproduce | fit | verify``.

Exit status: 0 pass, 1 tolerance failure, 2 configuration (or file) error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from diskfit import reproduce, verify
from diskfit.errors import (
    AdmissibilityError,
    ConfigError,
    ContractError,
    DomainError,
    EvaluationError,
    SingularityError,
    UnknownTargetError,
)
from diskfit.evaluate import RingSpec, error_stats
from diskfit.fitter import PRECISIONS, fit
from diskfit.model import (
    BasisElement,
    BasisKind,
    FitProblem,
    Geometry,
    NormKind,
    builtin_target,
    expression_target,
    to_xreal,
)
from diskfit.scalars import XComplex

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_TOP_KEYS = {"geometry", "norm", "basis", "target", "rings", "assembly_precision",
             "truncate_smallest"}
_KINDS = {"pole", "pole_order_m", "log_origin", "log_paired", "inverse_z", "real_log",
          "real_dipole"}
_DEFAULT_RINGS = {
    Geometry.EXTERIOR: [{"radius": 1.0, "count": 1000}, {"radius": 2.0, "count": 1000}],
    Geometry.INTERIOR: [{"radius": 1.0, "count": 1000}, {"radius": 0.5, "count": 1000}],
}


@dataclass(frozen=True)
class FitConfig:
    problem: FitProblem
    rings: list
    precision: str = "extended"
    drop_count: int = 0


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def _point(value, path):
    """``[re, im]`` (numbers or exact decimal strings) or a bare real."""
    if isinstance(value, (int, float, str)) and not isinstance(value, bool):
        return value
    if isinstance(value, list) and len(value) == 2 and all(
            isinstance(v, (int, float, str)) and not isinstance(v, bool) for v in value):
        re, im = value
        if isinstance(re, str) or isinstance(im, str):
            try:
                return XComplex(to_xreal(re), to_xreal(im))
            except (ValueError, ArithmeticError) as exc:
                raise ConfigError(f"not a number: {exc}", path) from None
        return complex(float(re), float(im))
    raise ConfigError("expected [re, im]", path)


def _basis_item(item, idx):
    path = f"basis[{idx}]"
    if not isinstance(item, dict):
        raise ConfigError("expected an object", path)
    unknown = set(item) - {"kind", "z", "order", "paired", "axis"}
    if unknown:
        raise ConfigError(f"unknown fields {sorted(unknown)}", path)
    kind = item.get("kind")
    if kind not in _KINDS:
        raise ConfigError(f"kind must be one of {sorted(_KINDS)}, got {kind!r}", path + ".kind")
    if kind == "real_dipole":
        axis = item.get("axis", "x")
        if axis not in ("x", "y"):
            raise ConfigError("axis must be 'x' or 'y'", path + ".axis")
        kind = f"real_dipole_{axis}"
    elif "axis" in item:
        raise ConfigError("axis is only meaningful for real_dipole", path + ".axis")
    kind = BasisKind(kind)
    if kind is BasisKind.INVERSE_Z:
        z = 0
    elif "z" not in item:
        raise ConfigError("missing source location", path + ".z")
    else:
        z = _point(item["z"], path + ".z")
    order = item.get("order", 1)
    if not isinstance(order, int) or isinstance(order, bool):
        raise ConfigError("order must be an integer", path + ".order")
    paired = _point(item["paired"], path + ".paired") if "paired" in item else None
    try:
        return BasisElement(kind, z, order=order, paired=paired)
    except (ContractError, DomainError) as exc:
        raise ConfigError(str(exc), path) from None


def _target(spec, geometry, real):
    if not isinstance(spec, dict):
        raise ConfigError("expected an object", "target")
    if "samples" in spec:
        raise ConfigError("sampled targets are not supported; give a builtin or expression",
                          "target.samples")
    if "builtin" in spec:
        try:
            return builtin_target(spec["builtin"])
        except UnknownTargetError as exc:
            raise ConfigError(str(exc), "target.builtin") from None
    if "expression" in spec:
        a1 = spec.get("a1")
        if a1 is not None:
            a1 = _point(a1, "target.a1")
        return expression_target(spec["expression"], a1=a1, real=real, geometry=geometry)
    raise ConfigError("give either 'builtin' or 'expression'", "target")


def _rings(spec, geometry):
    if spec is None:
        spec = _DEFAULT_RINGS[geometry]
    if not isinstance(spec, list):
        raise ConfigError("expected a list", "rings")
    out = []
    for i, ring in enumerate(spec):
        path = f"rings[{i}]"
        if not isinstance(ring, dict) or "radius" not in ring:
            raise ConfigError("expected {radius, count}", path)
        try:
            out.append(RingSpec(ring["radius"], ring.get("count", 1000), ring.get("offset", 0.0)))
        except (ContractError, ValueError, TypeError) as exc:
            raise ConfigError(str(exc), path) from None
    return out


def parse_config(data):
    """Validate a config document and build the :class:`FitConfig`."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown fields {sorted(unknown)}")
    try:
        geometry = Geometry(data.get("geometry", "exterior"))
    except ValueError:
        raise ConfigError("must be 'exterior' or 'interior'", "geometry") from None
    if "norm" not in data:
        raise ConfigError("missing", "norm")
    try:
        norm = NormKind.from_name(data["norm"], geometry)
    except ContractError as exc:
        raise ConfigError(str(exc), "norm") from None
    basis = data.get("basis")
    if not isinstance(basis, list) or not basis:
        raise ConfigError("expected a non-empty list", "basis")
    elements = [_basis_item(item, i) for i, item in enumerate(basis)]
    if "target" not in data:
        raise ConfigError("missing", "target")
    target = _target(data["target"], geometry, norm is NormKind.ENERGY_REAL)
    try:
        problem = FitProblem(geometry, norm, elements, target)
    except (ContractError, DomainError) as exc:
        msg = str(exc)
        raise ConfigError(msg, None if msg.startswith("basis[") else "basis") from None
    precision = data.get("assembly_precision", "extended")
    if precision not in PRECISIONS:
        raise ConfigError(f"must be one of {list(PRECISIONS)}", "assembly_precision")
    drop = data.get("truncate_smallest", 0)
    if not isinstance(drop, int) or isinstance(drop, bool) or not 0 <= drop < len(elements):
        raise ConfigError(f"must be an integer in 0..{len(elements) - 1}", "truncate_smallest")
    return FitConfig(problem, _rings(data.get("rings"), geometry), precision, drop)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", str(path)) from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", str(path)) from None
    return parse_config(data)


# ---------------------------------------------------------------------------
# fit output
# ---------------------------------------------------------------------------

def _f(x):
    return float(x.hi) if hasattr(x, "hi") else float(x)


def fit_report(config):
    """Run a configured fit and return the JSON-ready result."""
    problem = config.problem
    result = fit(problem, precision=config.precision, drop_count=config.drop_count)
    mu = result.mu.to_complex()
    out = {
        "geometry": problem.geometry.value,
        "norm": problem.norm.value,
        "target": problem.target.label,
        "assembly_precision": config.precision,
        "truncate_smallest": config.drop_count,
        "basis": [b.describe() for b in result.basis],
        "mu": [[float(c.real), float(c.imag)] for c in np.atleast_1d(mu)],
        "condition_number": _f(result.condition_number),
        "retained_condition": _f(result.retained_condition),
        "eigenvalues": [float(v) for v in result.eigenvalues.to_float()],
        "collocation_residuals": [float(r) for r in result.collocation_residuals],
        "rings": [],
    }
    if result.determinant_check is not None:
        eig, cauchy = result.determinant_check
        c = complex(cauchy)
        out["determinant"] = {"eigen_route": _f(eig), "product_route": [c.real, c.imag]}
    for ring in config.rings:
        stats = error_stats(result, problem, ring)
        entry = {"radius": float(ring.radius), "count": ring.count}
        entry.update(stats.as_dict())
        out["rings"].append(entry)
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _write(text, out_path):
    if out_path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_reproduce(table, out_path=None, jobs=1):
    report = reproduce.TABLES[table](jobs=jobs)
    _write(report.to_csv(), out_path)
    log = sys.stdout if out_path not in (None, "-") else sys.stderr
    for c in report.criteria:
        print(c.line(), file=log)
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def cmd_fit(config_path, out_path=None):
    config = load_config(config_path)
    _write(json.dumps(fit_report(config), indent=2) + "\n", out_path)
    return EXIT_OK


def cmd_verify(suite, jobs=1):
    checks = verify.run_suite(suite, jobs=jobs)
    for c in checks:
        print(c.line())
    return EXIT_OK if all(c.passed for c in checks) else EXIT_TOLERANCE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="diskfit",
        description="Closed-form least-squares fits of analytic and harmonic functions on unit disks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="rerun a published table and compare")
    p.add_argument("table", choices=sorted(reproduce.TABLES))
    p.add_argument("-o", "--out", help="CSV output path (default: stdout)")
    p.add_argument("-j", "--jobs", type=int, default=1, help="worker processes")

    p = sub.add_parser("fit", help="fit a JSON-configured problem")
    p.add_argument("config", help="path to the JSON config")
    p.add_argument("-o", "--out", help="JSON output path (default: stdout)")

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", choices=sorted(verify.SUITES) + ["all"])
    p.add_argument("-j", "--jobs", type=int, default=1, help="worker processes")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "reproduce":
            return cmd_reproduce(args.table, args.out, args.jobs)
        if args.command == "fit":
            return cmd_fit(args.config, args.out)
        return cmd_verify(args.suite, args.jobs)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularityError, EvaluationError, AdmissibilityError, DomainError,
            ContractError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
