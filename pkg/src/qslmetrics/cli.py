"""Command-line client for the service.

By default every command spins up the service in process and talks to it
through an ASGI test transport, so no port is opened; ``--server URL``
points the same commands at a running instance instead.  Warnings always go
to stderr, keeping stdout machine-parseable in all three formats.

Exit codes: 0 success, 2 parse/usage error, 3 validation failure,
4 dimension mismatch, 5 degenerate state, 6 golden-table check failure,
7 fuzz violations found.

CSV column orders (fixed):
  phases:    theta_1..theta_n
  metric:    value,argmin_x,candidates_examined
  constants: p,x_c,a_p
  bound:     tau_c1,tau_c2,moment_ep,dpe,optimal_reference,epsilon,p,hbar,tight,phase_angles
             (phase_angles joined with ';')
  table1:    state_label,tau_exact,ratio_<p> per column
  fuzz:      mode,trials,dimension,p,mu,seed,tolerance,max_slack,violation_count
"""

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass

import httpx

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_DIMENSION = 4
EXIT_DEGENERATE = 5
EXIT_GOLDEN = 6
EXIT_VIOLATIONS = 7

TABLE1_CHECK_TOLERANCE = 5e-4

_CODE_EXITS = {
    "non_square": EXIT_VALIDATION,
    "not_unitary": EXIT_VALIDATION,
    "eigen_solver_failure": EXIT_VALIDATION,
    "out_of_range": EXIT_VALIDATION,
    "invalid_p": EXIT_VALIDATION,
    "error": EXIT_VALIDATION,
    "dimension_mismatch": EXIT_DIMENSION,
    "length_mismatch": EXIT_DIMENSION,
    "degenerate_state": EXIT_DEGENERATE,
    "never_attained": EXIT_DEGENERATE,
}


class CliParseError(Exception):
    """Unreadable input file or malformed inline value; maps to exit 2."""


@dataclass(frozen=True)
class CliConfig:
    """Global knobs shared by all commands."""

    hbar: float = 1.0
    precision: int = 6
    format: str = "text"
    seed: int = 0
    server: str | None = None

    def __post_init__(self):
        if not 1 <= self.precision <= 17:
            raise CliParseError(f"precision must be in [1, 17], got {self.precision}")
        if self.format not in ("json", "csv", "text"):
            raise CliParseError(f"unknown format {self.format!r}")
        if not self.hbar > 0:
            raise CliParseError(f"hbar must be positive, got {self.hbar}")


class ServiceClient:
    """Thin HTTP access: in-process ASGI by default, real sockets with a base URL."""

    def __init__(self, server: str | None = None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            # the installed starlette deprecates its httpx-backed test
            # client at import time; not actionable from here
            with warnings.catch_warnings():
                warnings.filterwarnings(
                    "ignore", message="Using `httpx` with `starlette.testclient`"
                )
                from fastapi.testclient import TestClient

            from .service.app import create_app

            self._client = TestClient(create_app())

    def get(self, path: str, params: dict | None = None):
        return self._client.get(path, params=params)

    def post(self, path: str, payload: dict):
        return self._client.post(path, json=payload)

    def close(self):
        self._client.close()


# ---------------------------------------------------------------------------
# Input parsing


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliParseError(f"{path} is not valid JSON: {exc}") from exc


def _load_matrix_payload(path: str) -> dict:
    data = _load_json(path)
    if not isinstance(data, dict) or not {"n", "re", "im"} <= set(data):
        raise CliParseError(f'{path} must be an object with keys "n", "re", "im"')
    return {"n": data["n"], "re": data["re"], "im": data["im"]}


def _load_state_payload(path: str) -> dict:
    data = _load_json(path)
    if not isinstance(data, dict) or not {"energies", "weights"} <= set(data):
        raise CliParseError(f'{path} must be an object with keys "energies", "weights"')
    return {"energies": data["energies"], "weights": data["weights"]}


def _mu_argument(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"weights must be a comma list of reals: {exc}")
    if not values:
        raise argparse.ArgumentTypeError("weight list is empty")
    return values


def _precision_argument(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 17:
        raise argparse.ArgumentTypeError("precision must be in [1, 17]")
    return value


# ---------------------------------------------------------------------------
# Output emission


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}f}"


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(payload: dict):
    _emit(json.dumps(payload, indent=2))


def _csv_line(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _warn(messages: list[str]):
    for message in messages or []:
        print(f"warning: {message}", file=sys.stderr)


def _emit_phases(data: dict, cfg: CliConfig):
    phases = data["phases"]
    if cfg.format == "json":
        _emit_json(data)
    elif cfg.format == "csv":
        header = [f"theta_{i + 1}" for i in range(len(phases))]
        _emit(_csv_line(header, [[repr(v) for v in phases]]))
    else:
        _emit(" ".join(_fmt(v, cfg.precision) for v in phases))


def _emit_metric(data: dict, cfg: CliConfig, pseudo: bool):
    if cfg.format == "json":
        _emit_json(data)
    elif cfg.format == "csv":
        row = [repr(data["value"]),
               "" if data.get("argmin_x") is None else repr(data["argmin_x"]),
               "" if data.get("candidates_examined") is None else data["candidates_examined"]]
        _emit(_csv_line(["value", "argmin_x", "candidates_examined"], [row]))
    elif pseudo:
        _emit(f"{_fmt(data['value'], cfg.precision)} {_fmt(data['argmin_x'], cfg.precision)}")
    else:
        _emit(_fmt(data["value"], cfg.precision))


def _emit_constants(data: dict, cfg: CliConfig):
    if cfg.format == "json":
        _emit_json(data)
    elif cfg.format == "csv":
        _emit(_csv_line(["p", "x_c", "a_p"],
                        [[repr(data["p"]), repr(data["x_c"]), repr(data["a_p"])]]))
    else:
        _emit(f"{_fmt(data['x_c'], cfg.precision)} {_fmt(data['a_p'], cfg.precision)}")


_BOUND_FIELDS = ["tau_c1", "tau_c2", "moment_ep", "dpe", "optimal_reference",
                 "epsilon", "p", "hbar", "tight", "phase_angles"]


def _emit_bound(data: dict, cfg: CliConfig):
    if cfg.format == "json":
        _emit_json(data)
        return
    if cfg.format == "csv":
        row = []
        for name in _BOUND_FIELDS:
            value = data[name]
            if name == "phase_angles":
                row.append(";".join(repr(v) for v in value))
            elif name == "tight":
                row.append("true" if value else "false")
            else:
                row.append(repr(value))
        _emit(_csv_line(_BOUND_FIELDS, [row]))
        return
    lines = []
    for name in _BOUND_FIELDS:
        value = data[name]
        if name == "phase_angles":
            text = ",".join(_fmt(v, cfg.precision) for v in value)
        elif name == "tight":
            text = "true" if value else "false"
        else:
            text = _fmt(value, cfg.precision)
        lines.append(f"{name}={text}")
    _emit("\n".join(lines))


def _emit_table1(data: dict, cfg: CliConfig):
    if cfg.format == "json":
        _emit_json(data)
        return
    p_keys = [f"{p:g}" for p in data["p_values"]]
    if cfg.format == "csv":
        header = ["state_label", "tau_exact"] + [f"ratio_{k}" for k in p_keys]
        rows = [
            [row["state_label"], repr(row["tau_exact"])]
            + [repr(row["ratios"][k]) for k in p_keys]
            for row in data["rows"]
        ]
        _emit(_csv_line(header, rows))
        return
    width = max(len(row["state_label"]) for row in data["rows"])
    header = f"{'state':<{width}}  {'tau_exact':>12}" + "".join(
        f"  {'p=' + k:>10}" for k in p_keys
    )
    lines = [header]
    for row in data["rows"]:
        cells = "".join(f"  {row['ratios'][k]:>10.4f}" for k in p_keys)
        lines.append(f"{row['state_label']:<{width}}  {row['tau_exact']:>12.6f}{cells}")
    _emit("\n".join(lines))


def _emit_fuzz(data: dict, cfg: CliConfig):
    if cfg.format == "json":
        _emit_json(data)
        return
    if cfg.format == "csv":
        mu = data.get("mu")
        row = [data["mode"], data["trials"], data["dimension"], repr(data["p"]),
               "" if mu is None else ";".join(repr(v) for v in mu),
               data["seed"], repr(data["tolerance"]), repr(data["max_slack"]),
               len(data["violations"])]
        _emit(_csv_line(
            ["mode", "trials", "dimension", "p", "mu", "seed", "tolerance",
             "max_slack", "violation_count"], [row]))
        return
    lines = [
        f"mode={data['mode']} trials={data['trials']} dimension={data['dimension']} "
        f"p={data['p']:g} seed={data['seed']}",
        f"max_slack={data['max_slack']:.3e} tolerance={data['tolerance']:.1e} "
        f"violations={len(data['violations'])}",
    ]
    for v in data["violations"][:10]:
        lines.append(f"  trial={v['trial']} seed={v['seed']} slack={v['slack']:.3e}")
    _emit("\n".join(lines))


# ---------------------------------------------------------------------------
# Error translation


def _service_error(resp) -> int:
    try:
        detail = resp.json().get("detail")
    except Exception:
        detail = None
    if isinstance(detail, dict) and "code" in detail:
        print(f"error: {detail.get('message', detail['code'])}", file=sys.stderr)
        if "defect" in detail:
            print(
                f"unitarity defect {detail['defect']:.6e} exceeds tolerance "
                f"{detail['tol']:.6e}",
                file=sys.stderr,
            )
        return _CODE_EXITS.get(detail["code"], EXIT_VALIDATION)
    print(f"error: service rejected the request (HTTP {resp.status_code}): "
          f"{resp.text[:500]}", file=sys.stderr)
    return EXIT_PARSE


# ---------------------------------------------------------------------------
# Commands


def cmd_phases(args, client: ServiceClient, cfg: CliConfig) -> int:
    payload = {"matrix": _load_matrix_payload(args.matrix_file)}
    if args.tol is not None:
        payload["tol"] = args.tol
    resp = client.post("/phases", payload)
    if resp.status_code != 200:
        return _service_error(resp)
    _emit_phases(resp.json(), cfg)
    return EXIT_OK


def cmd_metric(args, client: ServiceClient, cfg: CliConfig) -> int:
    payload = {
        "u": _load_matrix_payload(args.u_file),
        "v": _load_matrix_payload(args.v_file),
        "mu": args.mu,
        "p": args.p,
        "pseudo": args.pseudo,
    }
    resp = client.post("/metric", payload)
    if resp.status_code != 200:
        return _service_error(resp)
    data = resp.json()
    _warn(data.get("warnings"))
    _emit_metric(data, cfg, args.pseudo)
    return EXIT_OK


def cmd_bound(args, client: ServiceClient, cfg: CliConfig) -> int:
    payload = {
        "state": _load_state_payload(args.state_file),
        "p": args.p,
        "epsilon": args.epsilon,
        "hbar": cfg.hbar,
    }
    resp = client.post("/bound", payload)
    if resp.status_code != 200:
        return _service_error(resp)
    data = resp.json()
    _warn(data.get("warnings"))
    _emit_bound(data, cfg)
    return EXIT_OK


def cmd_constants(args, client: ServiceClient, cfg: CliConfig) -> int:
    resp = client.get("/constants", params={"p": args.p})
    if resp.status_code != 200:
        return _service_error(resp)
    _emit_constants(resp.json(), cfg)
    return EXIT_OK


def cmd_table1(args, client: ServiceClient, cfg: CliConfig) -> int:
    resp = client.get("/table1", params={"large_n": args.large_n, "hbar": cfg.hbar})
    if resp.status_code != 200:
        return _service_error(resp)
    data = resp.json()
    _emit_table1(data, cfg)
    if args.check:
        deviation = data["max_abs_deviation"]
        if deviation > TABLE1_CHECK_TOLERANCE:
            print(
                f"check failed: max deviation {deviation:.2e} exceeds "
                f"{TABLE1_CHECK_TOLERANCE:.0e}",
                file=sys.stderr,
            )
            return EXIT_GOLDEN
        print(f"check passed: max deviation {deviation:.2e}", file=sys.stderr)
    return EXIT_OK


def cmd_fuzz(args, client: ServiceClient, cfg: CliConfig) -> int:
    payload = {
        "mode": args.mode,
        "n": args.n,
        "p": args.p,
        "mu": args.mu,
        "trials": args.trials,
        "seed": cfg.seed,
        "k_range": args.k_range,
        "grid_points": args.grid_points,
    }
    resp = client.post("/fuzz", payload)
    if resp.status_code != 200:
        return _service_error(resp)
    data = resp.json()
    _warn(data.get("warnings"))
    _emit_fuzz(data, cfg)
    if data["violations"]:
        print(f"{len(data['violations'])} violation(s) found", file=sys.stderr)
        return EXIT_VIOLATIONS
    return EXIT_OK


def cmd_serve(args, client: ServiceClient, cfg: CliConfig) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text",
                        help="output format (default text)")
    common.add_argument("--precision", type=_precision_argument, default=6,
                        help="decimal places for text output, 1-17 (default 6)")
    common.add_argument("--hbar", type=float, default=1.0,
                        help="value of hbar in your units (default 1)")
    common.add_argument("--seed", type=int, default=0,
                        help="base seed for randomized commands (default 0)")
    common.add_argument("--server", default=None, metavar="URL",
                        help="base URL of a running service; default runs in process")

    parser = argparse.ArgumentParser(
        prog="qslmetrics",
        description=(
            "Weighted-lp distances on the unitary group and quantum-speed-limit "
            "bounds.\n\n"
            "File formats:\n"
            '  matrix: {"n": 2, "re": [[..],[..]], "im": [[..],[..]]}\n'
            '  state:  {"energies": [..], "weights": [..]}\n'
        ),
        epilog=__doc__.split("CSV column orders (fixed):", 1)[-1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("phases", parents=[common],
                        help="eigenphases of a unitary matrix file")
    sp.add_argument("matrix_file")
    sp.add_argument("--tol", type=float, default=None,
                    help="unitarity tolerance override (default 1e-10 * n)")
    sp.set_defaults(handler=cmd_phases)

    sp = sub.add_parser("metric", parents=[common],
                        help="distance between two unitary matrix files")
    sp.add_argument("u_file")
    sp.add_argument("v_file")
    sp.add_argument("--mu", type=_mu_argument, required=True,
                    help="comma-separated nonnegative weights")
    sp.add_argument("--p", type=float, required=True, help="norm exponent (p > 0)")
    sp.add_argument("--pseudo", action="store_true",
                    help="minimize over a global phase; prints value then argmin shift")
    sp.set_defaults(handler=cmd_metric)

    sp = sub.add_parser("bound", parents=[common],
                        help="evolution-time lower bounds for a spectral state file")
    sp.add_argument("state_file")
    sp.add_argument("--p", type=float, required=True, help="norm exponent (p > 0)")
    sp.add_argument("--epsilon", type=float, required=True,
                    help="target fidelity in [0, 1]")
    sp.set_defaults(handler=cmd_bound)

    sp = sub.add_parser("constants", parents=[common],
                        help="critical angle and amplitude constant for an exponent")
    sp.add_argument("--p", type=float, required=True)
    sp.set_defaults(handler=cmd_constants)

    sp = sub.add_parser("table1", parents=[common],
                        help="recompute the six-state tightness table")
    sp.add_argument("--check", action="store_true",
                    help="compare with embedded reference values; exit 6 beyond 5e-4")
    sp.add_argument("--large-n", type=int, default=1000, dest="large_n",
                    help="comb size for the finite large-n cross-check (default 1000)")
    sp.set_defaults(handler=cmd_table1)

    sp = sub.add_parser("fuzz", parents=[common],
                        help="randomized campaigns: triangle, pseudo-oracle, generator")
    sp.add_argument("--mode", choices=("triangle", "pseudo-oracle", "generator"),
                    required=True)
    sp.add_argument("--n", type=int, required=True, help="matrix dimension")
    sp.add_argument("--p", type=float, required=True, help="norm exponent")
    sp.add_argument("--mu", type=_mu_argument, default=None,
                    help="comma-separated weights (default: all ones)")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--k-range", type=int, default=2, dest="k_range",
                    help="branch offset range for generator mode (default 2)")
    sp.add_argument("--grid-points", type=int, default=100_000, dest="grid_points",
                    help="grid size for pseudo-oracle mode (default 100000)")
    sp.set_defaults(handler=cmd_fuzz)

    sp = sub.add_parser("serve", parents=[common],
                        help="run the HTTP service on a real port")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = CliConfig(
            hbar=args.hbar,
            precision=args.precision,
            format=args.format,
            seed=args.seed,
            server=args.server,
        )
    except CliParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    client = None
    try:
        if args.handler is not cmd_serve:
            client = ServiceClient(cfg.server)
        return args.handler(args, client, cfg)
    except CliParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConnectionError, httpx.TransportError) as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return 1
    finally:
        if client is not None:
            client.close()


if __name__ == "__main__":
    sys.exit(main())
