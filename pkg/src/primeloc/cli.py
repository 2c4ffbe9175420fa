"""Seeded experiment runner: ``primeloc <subcommand> [flags]``.

Every report echoes its full configuration, validates against
``schema/report.schema.json`` and is reproducible byte for byte apart from
``wall_time``.  Exit codes: 0 success, 1 invalid input, 2 budget exhausted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction
from importlib import resources

import jsonschema
import numpy as np

from . import SCHEMA_VERSION, __version__
from .arith import DEFAULT_SIEVE_LIMIT, Infinity, iterated_log
from .counts import (
    XiBudgetExceeded,
    _radius_sq,
    compute_E,
    compute_E_lower,
    count_Nprime,
    default_B,
    enumerate_Xi,
    variance_experiment,
)
from .forms import MONOMIAL_ORDER, Form, SamplingError, dims_for, monomial_basis
from .lattice import (
    DEFAULT_ENUM_BUDGET,
    BudgetExceeded,
    CongruenceSpec,
    IntegerLattice,
    congruence_lattice,
    frak_c_lattice,
    reduced_basis,
    solution_lattice,
    successive_minima,
)
from .local import (
    DEFAULT_P_MAX,
    RealConfig,
    classify_ploc,
    estimate_density,
    sigma_counts,
    sigma_from_count,
    sigma_mean_closed_form,
    sigma_mean_exact,
    tau_prime,
)

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2
VARIANCE_CSV_COLUMNS = ("form_id", "A", "B", "N_prime", "N_ploc", "diff_sq")


class InvalidInput(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which is reserved for budgets
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _to_jsonable(obj):
    if isinstance(obj, Infinity):
        return obj.to_json()
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        obj = float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _parse_form(text: str, d: int, n: int) -> Form:
    try:
        coeffs = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise InvalidInput(f"--form must be comma-separated integers: {exc}") from None
    return Form.from_coeffs(d, n, coeffs)


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise InvalidInput(f"expected comma-separated integers, got {text!r}") from None


def _check_counting_dims(d: int, n: int) -> None:
    if n + 1 <= d:
        raise InvalidInput(
            f"counting needs n + 1 > d: the radius exponent 1/(n+1-d) is undefined for (d, n) = ({d}, {n})"
        )


def _check_sieve(d: int, n: int, B: float, limit: int) -> None:
    if math.isqrt(_radius_sq(d, n, B)) > limit:
        raise BudgetExceeded(f"prime radius exceeds --sieve-limit {limit}")


# ---------------------------------------------------------------------------
# subcommands: each returns (results, warnings)


def run_density(a):
    est = estimate_density(a.d, a.n, a.A, a.samples, a.pmax, a.rmax, a.seed, real_cfg=RealConfig(seed=a.seed))
    warn = []
    if est.undetermined:
        warn.append(f"{est.undetermined} forms undetermined (excluded from rho_hat)")
    res = est.to_json()
    res["p_max_truncation"] = a.pmax
    return res, warn


def run_local_test(a):
    f = _parse_form(a.form, a.d, a.n)
    prof = classify_ploc(f, a.pmax, a.rmax, RealConfig(seed=a.seed))
    warn = [f"p={p} undecided at r_max" for p, v in prof.padic.items() if v.status == "Undecided"]
    if prof.real.status == "Unknown":
        warn.append("real place undecided")
    return {"form": f.to_json(), "profile": prof.to_json()}, warn


def run_count(a):
    _check_counting_dims(a.d, a.n)
    _check_sieve(a.d, a.n, a.B, a.sieve_limit)
    f = _parse_form(a.form, a.d, a.n)
    if not f.is_primitive:
        raise InvalidInput("count needs a primitive form")
    rep = count_Nprime(f, a.B, enumerate_Xi(a.d, a.n, a.B, a.enum_budget))
    return rep.to_json(), []


def run_sigma_stats(a):
    if a.N is None and (a.d is None or a.n is None):
        raise InvalidInput("sigma-stats needs --N or both --d and --n")
    d, n = (a.d, a.n) if a.d is not None and a.n is not None else dims_for(a.N)
    basis = monomial_basis(d, n)
    if a.N is not None and basis.N != a.N:
        raise InvalidInput(f"N_(d,n) = {basis.N} does not match --N {a.N}")
    exact = sigma_mean_exact(a.p, a.r, basis)
    closed = sigma_mean_closed_form(a.p, basis.N)
    res = {"p": a.p, "r": a.r, "d": d, "n": n, "N": basis.N, "mean": exact, "closed_form": closed, "equal": exact == closed}
    if a.samples:
        Q = a.p**a.r
        rng = np.random.default_rng(a.seed)
        A = rng.integers(0, Q, size=(a.samples * 2, basis.N))
        A = A[(A % a.p != 0).any(axis=1)][: a.samples]
        sig = [sigma_from_count(c, Q, n) for c in sigma_counts(A, Q, basis)]
        res["second_moment"] = math.fsum(float((s - 1) ** 2) for s in sig) / len(sig)
        res["samples"] = len(sig)
    return res, []


def run_tau(a):
    f = _parse_form(a.form, a.d, a.n)
    if a.gamma is None and a.B is None:
        raise InvalidInput("tau needs --gamma or --B")
    gamma = a.gamma if a.gamma is not None else math.log(a.B)
    est = tau_prime(f, gamma, a.mc_samples, a.seed)
    return {"gamma": gamma, **est.to_json()}, []


def run_lattice(a):
    if a.basis:
        try:
            L = IntegerLattice(json.loads(a.basis))
        except (ValueError, TypeError) as exc:
            raise InvalidInput(f"--basis must be a JSON list of integer vectors: {exc}") from None
    elif a.c:
        c = _parse_ints(a.c)
        L = congruence_lattice(CongruenceSpec(c, a.Q)) if a.Q else solution_lattice(c)
    else:
        raise InvalidInput("lattice needs --c or --basis")
    res = {
        "lattice": L.to_json(),
        "rank": L.rank,
        "det_sq": L.det_sq,
        "det": L.det,
        "successive_minima": list(successive_minima(L, a.enum_budget)),
        "reduced_basis": [list(v) for v in reduced_basis(L, a.enum_budget)],
    }
    warn = []
    try:
        lower, sup = frak_c_lattice(L)
        res["frak_c"] = {"reduced_basis": lower, "sup": sup}
    except BudgetExceeded as exc:
        warn.append(f"frak_c sup skipped: {exc}")
    return res, warn


def run_variance(a):
    _check_counting_dims(a.d, a.n)
    B = a.B if a.B is not None else default_B(a.A, a.n, a.epsilon)
    _check_sieve(a.d, a.n, B, a.sieve_limit)
    vr = variance_experiment(a.d, a.n, a.A, B, a.samples, a.seed, a.epsilon)
    res = vr.to_json()
    res["annotation"] = "comparison_scale = B^2 / (A^2 (log log A)^(n-2-epsilon)); constants not asserted"
    return res, []


def run_e_prime(a):
    _check_counting_dims(a.d, a.n)
    _check_sieve(a.d, a.n, a.B, a.sieve_limit)
    Xi = enumerate_Xi(a.d, a.n, a.B, a.enum_budget)
    E = compute_E(a.d, a.n, a.B, Xi=Xi)
    res = {
        "B": a.B,
        "xi_size": len(Xi),
        "omega_size": len(Xi) * (len(Xi) - 1),
        "E_prime": E,
        "E_lower": compute_E_lower(a.d, a.n, a.B, Xi=Xi),
        "E_over_B2": E / a.B**2,
        "upper_curve": a.B**2 * iterated_log(a.B, 3) ** (2 * a.n + 2),
        "annotation": "sandwich B^2 << E' << B^2 (log_(3) B)^(2n+2); constants not asserted",
    }
    return res, []


COMMANDS = {
    "density": run_density,
    "local-test": run_local_test,
    "count": run_count,
    "sigma-stats": run_sigma_stats,
    "tau": run_tau,
    "lattice": run_lattice,
    "variance": run_variance,
    "e-prime": run_e_prime,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--sieve-limit", type=int, default=DEFAULT_SIEVE_LIMIT)
    common.add_argument("--enum-budget", type=int, default=DEFAULT_ENUM_BUDGET)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = _Parser(prog="primeloc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"primeloc {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def dn(sp, required=True):
        sp.add_argument("--d", type=int, required=required)
        sp.add_argument("--n", type=int, required=required)

    s = sub.add_parser("density", parents=[common], help="estimate rho^ploc_{d,n}")
    dn(s)
    s.add_argument("--A", type=float, required=True)
    s.add_argument("--samples", type=int, default=2000)
    s.add_argument("--pmax", type=int, default=DEFAULT_P_MAX)
    s.add_argument("--rmax", type=int, default=None)

    s = sub.add_parser("local-test", parents=[common], help="local solubility profile of one form")
    dn(s)
    s.add_argument("--form", required=True)
    s.add_argument("--pmax", type=int, default=DEFAULT_P_MAX)
    s.add_argument("--rmax", type=int, default=None)

    s = sub.add_parser("count", parents=[common], help="N' and N^ploc for one form")
    dn(s)
    s.add_argument("--B", type=float, required=True)
    s.add_argument("--form", required=True)

    s = sub.add_parser("sigma-stats", parents=[common], help="exact mean of sigma' mod p^r")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--N", type=int, default=None)
    dn(s, required=False)
    s.add_argument("--samples", type=int, default=0, help="also estimate the mean of (sigma'-1)^2")

    s = sub.add_parser("tau", parents=[common], help="Monte-Carlo tau'(a; gamma)")
    dn(s)
    s.add_argument("--form", required=True)
    s.add_argument("--gamma", type=float, default=None)
    s.add_argument("--B", type=float, default=None, help="use gamma = log B")
    s.add_argument("--mc-samples", type=int, default=10**5)

    s = sub.add_parser("lattice", parents=[common], help="solution/congruence lattice invariants")
    s.add_argument("--c", default=None)
    s.add_argument("--Q", type=int, default=None)
    s.add_argument("--basis", default=None, help="JSON list of basis vectors")

    s = sub.add_parser("variance", parents=[common], help="ensemble mean of (N' - N^ploc)^2")
    dn(s)
    s.add_argument("--A", type=float, required=True)
    s.add_argument("--B", type=float, default=None)
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--epsilon", type=float, default=0.1)

    s = sub.add_parser("e-prime", parents=[common], help="E'_{d,n}(B) with its comparison curves")
    dn(s)
    s.add_argument("--B", type=float, required=True)
    return p


_CONFIG_SKIP = {"out", "format", "command"}


def run(argv: list[str] | None = None) -> tuple[int, dict | None, str | None]:
    """Parse, execute and validate; returns (exit code, report, error message)."""
    return _execute(build_parser().parse_args(argv))


def _execute(args: argparse.Namespace) -> tuple[int, dict | None, str | None]:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _CONFIG_SKIP}
    t0 = time.perf_counter()
    try:
        results, warnings = COMMANDS[args.command](args)
    except (BudgetExceeded, XiBudgetExceeded, SamplingError) as exc:
        return EXIT_BUDGET, None, f"budget exhausted: {exc}"
    except (InvalidInput, ValueError) as exc:
        return EXIT_INVALID, None, f"invalid input: {exc}"
    report = {
        "schema_version": SCHEMA_VERSION,
        "artifact_version": __version__,
        "monomial_order": MONOMIAL_ORDER,
        "command": args.command,
        "config": config,
        "results": results,
        "warnings": warnings,
        "wall_time": time.perf_counter() - t0,
    }
    report = _to_jsonable(report)
    jsonschema.validate(report, load_schema())
    return EXIT_OK, report, None


def load_schema() -> dict:
    return json.loads(resources.files("primeloc").joinpath("schema/report.schema.json").read_text())


def payload(report: dict) -> str:
    """The reproducible part of a report (everything except wall_time), canonically serialized."""
    return json.dumps({k: v for k, v in report.items() if k != "wall_time"}, sort_keys=True)


def _flatten(prefix: str, obj, out: list) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, json.dumps(obj) if isinstance(obj, list) else obj))


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    rows = report["results"].get("rows") if report["command"] == "variance" else None
    if rows is not None:
        w.writerow(VARIANCE_CSV_COLUMNS)
        for r in rows:
            w.writerow([r[c] for c in VARIANCE_CSV_COLUMNS])
    else:
        w.writerow(("key", "value"))
        flat: list = []
        _flatten("", {k: v for k, v in report.items() if k != "wall_time"}, flat)
        w.writerows(flat)
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    code, report, err = _execute(args)
    if err:
        print(err, file=sys.stderr)
        return code
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
