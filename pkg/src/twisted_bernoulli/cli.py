"""Command-line interface.

Subcommands (parameters come from a JSON config file, see README):

  compute-numbers     generalized twisted Bernoulli numbers B^(k)_0..B^(k)_n
  compute-polynomial  coefficients of the degree-n polynomial
  power-sum           the twisted character power sum T_k(n)
  verify              identity sweep over a parameter grid
  volkenborn          finite-level p-adic convergence / shift traces

Output is deterministic: the same config always produces byte-identical
bytes.  Fractions are serialized as "num/den" strings, never floats.
Exit codes: 0 success / all checks hold, 1 at least one check failed,
2 configuration error (the diagnostic names the offending key).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import bernoulli as bn
from . import identities as idn
from . import volkenborn as vk
from .characters import character_from_json, root_from_json
from .errors import ConfigError, TwistedBernoulliError
from .exact import INFINITY, cyclo_to_json, frac_to_str

JOBS_ENV_VAR = "TWISTED_BERNOULLI_JOBS"


@dataclass
class RunConfig:
    """One CLI invocation: command, parameter block, output destination."""

    command: str
    params: dict
    out: str | None = None
    format: str = "json"
    jobs: int = 1


# ---------------------------------------------------------------------------
# config validation

def _require_keys(params: dict, required: set, optional: set = frozenset()):
    if not isinstance(params, dict):
        raise ConfigError("config must be a JSON object")
    for key in params:
        if key not in required and key not in optional:
            raise ConfigError(f"unknown key '{key}' in config")
    for key in sorted(required):
        if key not in params:
            raise ConfigError(f"missing required key '{key}' in config")


def _int_param(params: dict, key: str, minimum: int | None = None) -> int:
    val = params[key]
    if not isinstance(val, int) or isinstance(val, bool):
        raise ConfigError(f"key '{key}' must be an integer")
    if minimum is not None and val < minimum:
        raise ConfigError(f"key '{key}' must be >= {minimum}")
    return val


def _spec_from_params(params: dict) -> bn.TwistSpec:
    chi = character_from_json(params["character"], modulus=params["modulus"])
    if chi.modulus != params["modulus"]:
        raise ConfigError("key 'modulus' disagrees with the character spec")
    xi = root_from_json(params["xi"])
    return bn.twist_spec(chi, xi)


# ---------------------------------------------------------------------------
# command handlers: each returns (payload, exit_code)

def _cmd_compute_numbers(params: dict):
    _require_keys(params, {"modulus", "character", "xi", "k", "n_max"})
    spec = _spec_from_params(params)
    k = _int_param(params, "k", 0)
    n_max = _int_param(params, "n_max", 0)
    fam = bn.numbers(spec, k, n_max)
    return [cyclo_to_json(c) for c in fam.numbers], 0


def _cmd_compute_polynomial(params: dict):
    _require_keys(params, {"modulus", "character", "xi", "k", "n"})
    spec = _spec_from_params(params)
    k = _int_param(params, "k", 0)
    n = _int_param(params, "n", 0)
    poly = bn.polynomial(spec, k, n)
    return [cyclo_to_json(c) for c in poly.coeffs], 0


def _cmd_power_sum(params: dict):
    _require_keys(params, {"modulus", "character", "xi", "k", "n"})
    spec = _spec_from_params(params)
    k = _int_param(params, "k", 0)
    n = _int_param(params, "n", 0)
    return cyclo_to_json(bn.power_sum(spec, k, n)), 0


def _cmd_verify(params: dict, jobs: int):
    if isinstance(params, dict) and "grids" in params:
        _require_keys(params, {"grids"}, {"include_sides"})
        grids = params["grids"]
        include_sides = bool(params.get("include_sides", False))
    else:
        grids = params
        include_sides = False
    if isinstance(grids, dict):
        grids = [grids]
    if not isinstance(grids, list):
        raise ConfigError("verify config must be a grid object, a list, or {'grids': [...]}")
    records, summary = idn.sweep(grids, include_sides=include_sides, jobs=jobs)
    payload = {"summary": summary, "reports": records}
    ok = summary["failures"] == 0 and summary["errors"] == 0
    return payload, 0 if ok else 1


def _val_str(v) -> str:
    return "inf" if v == INFINITY else frac_to_str(Fraction(v))


def _cmd_volkenborn(params: dict):
    _require_keys(
        params,
        {"p", "check", "modulus", "character", "xi", "moments"},
        {"level_max", "shift"},
    )
    p = _int_param(params, "p", 2)
    chi = character_from_json(params["character"], modulus=params["modulus"])
    if chi.modulus != params["modulus"]:
        raise ConfigError("key 'modulus' disagrees with the character spec")
    xi = root_from_json(params["xi"])
    moments = params["moments"]
    if isinstance(moments, int):
        moments = [moments]
    if not isinstance(moments, list) or not all(isinstance(m, int) for m in moments):
        raise ConfigError("key 'moments' must be an integer or list of integers")
    level_max = params.get("level_max", vk.DEFAULT_LEVEL_CAP.get(p, 5))
    if not isinstance(level_max, int) or level_max < 2:
        raise ConfigError("key 'level_max' must be an integer >= 2")
    kind = params["check"]
    checks = []
    all_pass = True
    if kind == "convergence":
        for n in sorted(moments):
            spec = vk.integrand_spec(chi, xi, n)
            trace = vk.convergence_check(spec, p, level_max)
            passed = trace.passes()
            all_pass = all_pass and passed
            checks.append(
                {
                    "moment": n,
                    "target": cyclo_to_json(vk.bernoulli_target(spec)),
                    "trace": [
                        {"p": p, "level": lev, "valuation": _val_str(v)}
                        for lev, v in zip(trace.levels, trace.valuations)
                    ],
                    "passed": passed,
                }
            )
    elif kind == "shift":
        if "shift" not in params:
            raise ConfigError("missing required key 'shift' in config")
        n_shift = _int_param(params, "shift", 1)
        for k in sorted(moments):
            if k < 1:
                raise ConfigError("shift checks need moments >= 1")
            spec = vk.integrand_spec(chi, xi, k)
            rows = []
            vals = []
            for lev in range(1, level_max + 1):
                res = vk.shift_identity_check(spec, p, n_shift, lev)
                vals.append(res.valuation)
                rows.append({"p": p, "level": lev, "valuation": _val_str(res.valuation)})
            passed = vk.ConvergenceTrace(
                levels=tuple(range(1, level_max + 1)), valuations=tuple(vals)
            ).passes()
            all_pass = all_pass and passed
            checks.append({"moment": k, "shift": n_shift, "trace": rows, "passed": passed})
    else:
        raise ConfigError("key 'check' must be \"convergence\" or \"shift\"")
    return {"p": p, "check": kind, "checks": checks}, 0 if all_pass else 1


# ---------------------------------------------------------------------------
# serialization

def _to_json_bytes(payload) -> bytes:
    return (json.dumps(payload, indent=2) + "\n").encode()


def _to_csv_bytes(command: str, payload) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if command == "volkenborn":
        writer.writerow(["moment", "p", "level", "valuation", "passed"])
        for check in payload["checks"]:
            for row in check["trace"]:
                writer.writerow(
                    [check["moment"], row["p"], row["level"], row["valuation"], check["passed"]]
                )
    elif command == "verify":
        writer.writerow(["identity", "n", "m", "d", "chi", "xi", "w1", "w2", "k", "shift", "holds"])
        for rec in payload["reports"]:
            par = rec["params"]
            writer.writerow(
                [
                    rec["identity"],
                    par.get("n", ""),
                    par.get("m", ""),
                    par.get("d", ""),
                    json.dumps(par.get("chi", ""), separators=(",", ":")),
                    f"{par['xi']['order']}^{par['xi']['exponent']}",
                    par.get("w1", ""),
                    par.get("w2", ""),
                    par.get("k", ""),
                    par.get("shift", ""),
                    rec["holds"],
                ]
            )
    else:
        raise ConfigError("csv output is limited to the verify and volkenborn commands")
    return buf.getvalue().encode()


def run(config: RunConfig) -> tuple[int, bytes]:
    """Execute a validated run configuration; returns (exit_code, output bytes)."""
    if config.command == "compute-numbers":
        payload, code = _cmd_compute_numbers(config.params)
    elif config.command == "compute-polynomial":
        payload, code = _cmd_compute_polynomial(config.params)
    elif config.command == "power-sum":
        payload, code = _cmd_power_sum(config.params)
    elif config.command == "verify":
        payload, code = _cmd_verify(config.params, config.jobs)
    elif config.command == "volkenborn":
        payload, code = _cmd_volkenborn(config.params)
    else:
        raise ConfigError(f"unknown command '{config.command}'")
    if config.format == "json":
        return code, _to_json_bytes(payload)
    if config.format == "csv":
        return code, _to_csv_bytes(config.command, payload)
    raise ConfigError(f"unknown format '{config.format}'")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twisted-bernoulli",
        description="Exact twisted Bernoulli computations, identity sweeps, and p-adic traces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("compute-numbers", "compute a family of generalized twisted Bernoulli numbers"),
        ("compute-polynomial", "compute one generalized twisted Bernoulli polynomial"),
        ("power-sum", "compute a twisted character power sum"),
        ("verify", "verify identities over a parameter grid"),
        ("volkenborn", "finite-level p-adic convergence and shift traces"),
    ):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--config", required=True, help="path to the JSON parameter file")
        cmd.add_argument("--out", default=None, help="output path (default: stdout)")
        cmd.add_argument("--format", default="json", choices=("json", "csv"))
        cmd.add_argument(
            "--jobs",
            type=int,
            default=None,
            help=f"parallel workers for verify (default: ${JOBS_ENV_VAR} or 1)",
        )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.jobs is not None:
        jobs = args.jobs
    else:
        try:
            jobs = int(os.environ.get(JOBS_ENV_VAR, "1"))
        except ValueError:
            jobs = 1
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            params = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return 2
    config = RunConfig(
        command=args.command,
        params=params,
        out=args.out,
        format=args.format,
        jobs=max(jobs, 1),
    )
    try:
        code, output = run(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TwistedBernoulliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if config.out:
        with open(config.out, "wb") as fh:
            fh.write(output)
    else:
        sys.stdout.buffer.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
