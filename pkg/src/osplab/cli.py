"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed (or output could not be
written), 2 usage or configuration error.

Settings come from built-in defaults, then a ``key=value`` file given by
``--config``, then command-line flags, later sources winning. The resolved
config is echoed into every output.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import exact, shift, stats, tasep
from .runner import run_replicas

SCHEMA_VERSION = 1

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# (dest, type, default, help); every option is also a valid config-file key
COMMON = [
    ("seed", int, 0, "master seed"),
    ("workers", int, 1, "worker processes"),
    ("out", str, None, "output directory (default runs/<command>)"),
]
OPTIONS = {
    "simulate": COMMON + [
        ("n", int, 10, "system size N"),
        ("replicas", int, 1000, "number of replicas"),
        ("vectors", _bool, False, "store U (osp) or V (lpp) vectors in each record"),
        ("timing", _bool, True, "record wall times and a timestamp (disable for byte-identical reruns)"),
    ],
    "identity": COMMON + [
        ("n", int, 4, "system size N"),
        ("exact", _bool, False, "exact rational certificate instead of Monte Carlo"),
        ("long", _bool, False, "allow N = 6 in exact mode"),
        ("marginals", _bool, False, "exact mode: also certify every last-swap marginal"),
        ("replicas", int, 100_000, "Monte Carlo replicas per side"),
        ("alpha", float, 0.001, "KS significance level"),
    ],
    "pushback": COMMON + [
        ("n", int, 4, "system size N"),
        ("streams", int, 1000, "shared clock streams"),
        ("horizon", float, 10.0, "time horizon"),
        ("eps_trunc", float, tasep.DEFAULT_EPS_TRUNC, "window truncation error budget"),
    ],
    "height-identity": COMMON + [
        ("trajectories", int, 1000, "random trajectories"),
        ("horizon", float, 5.0, "time horizon"),
        ("eps_trunc", float, tasep.DEFAULT_EPS_TRUNC, "window truncation error budget"),
    ],
    "shift": COMMON + [
        ("n", int, 5, "system size N for --corollary"),
        ("t", float, 2.0, "observation time"),
        ("corollary", _bool, False, "test the two height vectors linked by a chain of shifts"),
        ("generic", int, 0, "number of random valid instances to test"),
        ("instance", str, None, "explicit instance, e.g. 'k=1,2;y=5/2,1/2;iota=1'"),
        ("replicas", int, 100_000, "replicas per side"),
        ("alpha", float, 0.001, "family-wise significance level"),
        ("eps_trunc", float, tasep.DEFAULT_EPS_TRUNC, "window truncation error budget"),
    ],
    "calibration": COMMON + [
        ("engine", str, "lpp", "engine sampled on both sides (osp or lpp)"),
        ("n", int, 3, "system size N"),
        ("tests", int, 1000, "number of repeated KS tests"),
        ("replicas", int, 200, "replicas per side per test"),
        ("alpha", float, 0.01, "KS significance level"),
    ],
    "tw": COMMON + [
        ("n", int, 100, "system size N"),
        ("replicas", int, 1000, "number of replicas"),
        ("statistic", str, "t", "t (absorbing time), u (OSP last swap) or v (LPP anti-diagonal)"),
        ("k_frac", float, 0.5, "edge k = round(k_frac * N) for u/v"),
        ("bins", int, 40, "histogram bins"),
        ("svg", _bool, False, "also write an SVG histogram"),
        ("tolerance", float, None, "fail when |mean - reference mean| exceeds this"),
    ],
}
VERIFY_KINDS = {"identity": "identity", "pushback": "pushback", "min-identity": "pushback",
                "height-identity": "height-identity", "shift": "shift", "calibration": "calibration"}


def _add_options(parser: argparse.ArgumentParser, key: str) -> None:
    parser.add_argument("--config", help="key=value file; flags override it")
    for dest, typ, _default, text in OPTIONS[key]:
        flag = "--" + dest.replace("_", "-")
        if typ is _bool:
            parser.add_argument(flag, dest=dest, action=argparse.BooleanOptionalAction, help=text)
        else:
            parser.add_argument(flag, dest=dest, type=typ, help=text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="osplab", description="Oriented swap process and corner growth experiments.")
    parser.add_argument("--version", action="version", version=f"osplab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="sample absorbing times and last-swap vectors")
    sim.add_argument("engine", choices=("osp", "lpp"))
    _add_options(sim, "simulate")

    ver = sub.add_parser("verify", help="run a verification campaign")
    ver_sub = ver.add_subparsers(dest="target", required=True)
    for name, key in VERIFY_KINDS.items():
        _add_options(ver_sub.add_parser(name), key)

    tw = sub.add_parser("tw", help="scaled fluctuations against Tracy-Widom references")
    tw.add_argument("engine", choices=("osp", "lpp"))
    _add_options(tw, "tw")
    return parser


def read_config_file(path: str, key: str) -> dict:
    types = {dest: typ for dest, typ, *_ in OPTIONS[key]}
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        name, value = (part.strip() for part in line.split("=", 1))
        name = name.replace("-", "_")
        if name not in types:
            raise UsageError(f"{path}:{num}: unknown key {name!r}")
        try:
            out[name] = types[name](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{num}: {exc}") from exc
    return out


def resolve_config(args: argparse.Namespace, key: str) -> dict:
    config = {dest: default for dest, _t, default, _h in OPTIONS[key]}
    if args.config:
        config.update(read_config_file(args.config, key))
    for dest in config:
        value = getattr(args, dest, None)
        if value is not None:
            config[dest] = value
    _validate(config)
    return config


def _validate(config: dict) -> None:
    positive = ("replicas", "streams", "trajectories", "tests", "bins", "workers")
    for name in positive:
        if name in config and config[name] is not None and config[name] < 1:
            raise UsageError(f"{name} must be positive")
    if "n" in config and config["n"] < 2:
        raise UsageError("N must be at least 2")
    for name in ("alpha",):
        if name in config and not 0 < config[name] < 1:
            raise UsageError("alpha must lie in (0, 1)")
    for name in ("horizon", "t"):
        if name in config and config[name] < 0:
            raise UsageError(f"{name} must be nonnegative")
    if "k_frac" in config and not 0 < config["k_frac"] < 1:
        raise UsageError("k-frac must lie in (0, 1)")
    if "eps_trunc" in config and not 0 < config["eps_trunc"] < 1:
        raise UsageError("eps-trunc must lie in (0, 1)")


def _outdir(config: dict, default: str) -> Path:
    path = Path(config["out"] or Path("runs") / default)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=_json_default)


def _write_report(out: Path, subcommand: str, config: dict, body: dict) -> Path:
    report = {"schema_version": SCHEMA_VERSION, "subcommand": subcommand, "config": config,
              "code_version": __version__, "timing": {"timestamp": _timestamp()}, **body}
    path = out / "report.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n")
    return path


def _verdict(passed: bool, line: str) -> int:
    print(("PASS " if passed else "FAIL ") + line)
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_simulate(args) -> int:
    config = resolve_config(args, "simulate")
    config["engine"] = args.engine
    out = _outdir(config, f"simulate-{args.engine}")
    subcommand = f"simulate {args.engine}"
    block = run_replicas(args.engine, config["n"], config["replicas"], config["seed"],
                         workers=config["workers"], keep_vectors=config["vectors"])
    vec_name = "U" if args.engine == "osp" else "V"
    with open(out / "records.jsonl", "w") as fh:
        header = {"schema_version": SCHEMA_VERSION, "subcommand": subcommand, "config": config,
                  "replica": None, "seed": config["seed"],
                  "payload": {"record": "header", "code_version": __version__}}
        if config["timing"]:
            header["timing"] = {"timestamp": _timestamp()}
        fh.write(_dumps(header) + "\n")
        for row, r in enumerate(block.replicas):
            payload = {"N": config["n"], "T": float(block.T[row])}
            if config["vectors"]:
                payload[vec_name] = block.vectors[row].tolist()
            record = {"schema_version": SCHEMA_VERSION, "subcommand": subcommand, "config": config,
                      "replica": int(r), "seed": {"master_seed": config["seed"], "replica_index": int(r),
                                                  "engine_tag": args.engine},
                      "payload": payload}
            if config["timing"]:
                record["timing"] = {"wall_time": float(block.wall_time[row])}
            fh.write(_dumps(record) + "\n")
    rows = [stats.summary_row("T", config["n"], block.T)]
    if config["vectors"]:
        for k in range(config["n"] - 1):
            rows.append(stats.summary_row(f"{vec_name}{k + 1}", config["n"], block.vectors[:, k]))
    _write_summary(out / "summary.csv", rows)
    r0 = rows[0]
    print(f"{subcommand}: N={config['n']} replicas={config['replicas']} mean(T)={r0['mean']:.6g} "
          f"var(T)={r0['var']:.6g} -> {out}")
    return EXIT_PASS


def _write_summary(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=stats.SUMMARY_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})


def _verify_identity(config: dict):
    n = config["n"]
    if config["exact"]:
        if n > 6 or (n == 6 and not config["long"]):
            raise UsageError("exact mode supports N <= 5, or N = 6 with --long")
        osp_chain, corner_chain = exact.build_osp_chain(n), exact.build_corner_chain(n)
        cert = exact.lst_equal(osp_chain, corner_chain)
        body = {"mode": "exact", "passed": cert.passed, "certificate": cert.to_dict()}
        passed = cert.passed
        line = f"identity N={n} exact: {cert.n_points} LST points, states {cert.d1} vs {cert.d2}"
        if config["marginals"]:
            marg = []
            for k in range(1, n):
                c = exact.lst_equal(exact.marginal_U_chain(n, k), exact.marginal_V_chain(n, k))
                marg.append({"k": k, "passed": c.passed, "n_points": c.n_points, "d1": c.d1, "d2": c.d2})
                passed = passed and c.passed
            body["marginals"] = marg
            body["passed"] = passed
            line += f"; marginals k=1..{n - 1} {'agree' if all(m['passed'] for m in marg) else 'differ'}"
        return passed, line, body
    a = run_replicas("osp", n, config["replicas"], config["seed"], workers=config["workers"])
    b = run_replicas("lpp", n, config["replicas"], config["seed"], workers=config["workers"])
    ks = stats.ks_two_sample(a.T, b.T)
    passed = not ks.rejects(config["alpha"])
    body = {"mode": "monte-carlo", "passed": passed,
            "ks": {"D": ks.D, "p_value": ks.p_value, "method": ks.method, "n1": ks.n1, "n2": ks.n2},
            "osp": stats.summary_row("T_osp", n, a.T), "lpp": stats.summary_row("T_lpp", n, b.T)}
    line = f"identity N={n} monte-carlo: KS D={ks.D:.5f} p={ks.p_value:.4g} (alpha={config['alpha']})"
    return passed, line, body


def _verify_pushback(config: dict, target: str):
    name = "pushback" if target == "pushback" else "min-identity"
    rep = tasep.verify_coupling_many(name, config["n"], config["streams"], config["horizon"],
                                     config["seed"], config["eps_trunc"])[name]
    line = (f"{name} N={config['n']}: {rep.streams} streams, {rep.events} events, "
            f"{rep.checks} checks" + ("" if rep.passed else f", counterexample {rep.counterexample}"))
    return rep.passed, line, {"passed": rep.passed, "result": rep.to_dict()}


def _verify_height_identity(config: dict):
    rep = tasep.verify_height_identity(config["trajectories"], config["horizon"], config["seed"],
                                    eps_trunc=config["eps_trunc"])
    line = f"height identity: {rep.streams} trajectories, {rep.checks} checks"
    return rep.passed, line, {"passed": rep.passed, "result": rep.to_dict()}


def parse_instance(text: str, t: float) -> shift.ShiftInstance:
    fields = {}
    for part in text.replace(" ", "").split(";"):
        if not part:
            continue
        if "=" not in part:
            raise UsageError(f"bad instance field {part!r}")
        key, value = part.split("=", 1)
        fields[key] = value
    try:
        k = tuple(int(v) for v in fields["k"].split(","))
        y = tuple(Fraction(v) for v in fields["y"].split(","))
        iota = int(fields["iota"])
        return shift.ShiftInstance(float(fields.get("t", t)), k, y, iota)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad instance {text!r}: {exc}") from exc


def _verify_shift(config: dict):
    chosen = sum(bool(x) for x in (config["corollary"], config["generic"], config["instance"]))
    if chosen != 1:
        raise UsageError("choose exactly one of --corollary, --generic COUNT, --instance SPEC")
    common = dict(replicas=config["replicas"], alpha=config["alpha"], eps_trunc=config["eps_trunc"])
    reports = []
    if config["corollary"]:
        lhs, rhs = shift.corollary_instance(config["n"])
        reports.append(shift.run_shift_test(lhs, rhs, t=config["t"], seed=config["seed"],
                                            label=f"corollary N={config['n']}", **common))
    elif config["instance"]:
        inst = parse_instance(config["instance"], config["t"])
        problem = shift.validate_instance(inst)
        if problem:
            raise UsageError(f"instance violates: {problem}")
        reports.append(shift.run_shift_test(inst, seed=config["seed"], **common))
    else:
        rng = np.random.default_rng(config["seed"])
        for j in range(config["generic"]):
            inst = shift.random_instance(rng)
            reports.append(shift.run_shift_test(inst, seed=config["seed"] + j, **common))
    passed = not any(r.rejected for r in reports)
    worst = min(r.min_p / r.threshold for r in reports)
    line = (f"shift: {len(reports)} instance(s), {config['replicas']} replicas per side, "
            f"smallest p / threshold = {worst:.3g}")
    return passed, line, {"passed": passed, "instances": [r.to_dict() for r in reports]}


def ks_calibration(engine: str, n: int, tests: int, replicas: int, alpha: float, seed: int) -> dict:
    """Rejection count of repeated null KS tests against a binomial 3-sigma band."""
    rejections = 0
    pvals = []
    for j in range(tests):
        a = run_replicas(engine, n, replicas, seed + 2 * j).T
        b = run_replicas(engine, n, replicas, seed + 2 * j + 1).T
        res = stats.ks_two_sample(a, b)
        pvals.append(res.p_value)
        rejections += res.rejects(alpha)
    mean = tests * alpha
    sd = math.sqrt(tests * alpha * (1 - alpha))
    lo, hi = mean - 3 * sd, mean + 3 * sd
    return {"rejections": rejections, "tests": tests, "rate": rejections / tests, "band": [lo / tests, hi / tests],
            "passed": lo <= rejections <= hi, "p_values": pvals}


def _verify_calibration(config: dict):
    if config["engine"] not in ("osp", "lpp"):
        raise UsageError("engine must be osp or lpp")
    res = ks_calibration(config["engine"], config["n"], config["tests"], config["replicas"],
                         config["alpha"], config["seed"])
    line = (f"KS calibration: {res['rejections']}/{res['tests']} rejections at alpha={config['alpha']}, "
            f"band [{res['band'][0]:.4f}, {res['band'][1]:.4f}]")
    return res["passed"], line, {"passed": res["passed"], "result": res}


def cmd_verify(args) -> int:
    key = VERIFY_KINDS[args.target]
    config = resolve_config(args, key)
    out = _outdir(config, f"verify-{args.target}")
    if key == "identity":
        passed, line, body = _verify_identity(config)
    elif key == "pushback":
        passed, line, body = _verify_pushback(config, args.target)
    elif key == "height-identity":
        passed, line, body = _verify_height_identity(config)
    elif key == "shift":
        passed, line, body = _verify_shift(config)
    else:
        passed, line, body = _verify_calibration(config)
    _write_report(out, f"verify {args.target}", config, body)
    return _verdict(passed, line)


def _svg_histogram(counts, edges, ref: stats.TwReference, title: str) -> str:
    width, height, pad = 640, 360, 40
    top = max(int(counts.max()), 1)
    x0, x1 = float(edges[0]), float(edges[-1])

    def sx(v):
        return pad + (v - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(c):
        return height - pad - c / top * (height - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<text x="{pad}" y="20" font-size="14">{title}</text>']
    for c, a, b in zip(counts, edges[:-1], edges[1:]):
        parts.append(f'<rect x="{sx(a):.2f}" y="{sy(c):.2f}" width="{max(sx(b) - sx(a) - 1, 0.5):.2f}" '
                     f'height="{height - pad - sy(c):.2f}" fill="#7a9cc6"/>')
    for p in (0.05, 0.5, 0.95):
        q = float(ref.ppf(p))
        if x0 <= q <= x1:
            parts.append(f'<line x1="{sx(q):.2f}" y1="{pad}" x2="{sx(q):.2f}" y2="{height - pad}" '
                         f'stroke="#c0392b" stroke-dasharray="4 3"/>')
            parts.append(f'<text x="{sx(q) + 3:.2f}" y="{pad + 12}" font-size="10">q{int(p * 100)}</text>')
    parts.append(f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>')
    parts.append(f'<text x="{pad}" y="{height - 10}" font-size="10">{x0:.3g}</text>')
    parts.append(f'<text x="{width - pad - 30}" y="{height - 10}" font-size="10">{x1:.3g}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_tw(args) -> int:
    config = resolve_config(args, "tw")
    config["engine"] = args.engine
    n, stat = config["n"], config["statistic"].lower()
    if stat not in ("t", "u", "v"):
        raise UsageError("statistic must be t, u or v")
    if (stat == "u" and args.engine != "osp") or (stat == "v" and args.engine != "lpp"):
        raise UsageError("u is the OSP statistic and v the LPP one")
    out = _outdir(config, f"tw-{args.engine}-{stat}")
    block = run_replicas(args.engine, n, config["replicas"], config["seed"], workers=config["workers"],
                         keep_vectors=stat != "t")
    if stat == "t":
        beta, k = 1, None
        scaled = stats.scaled_absorbing_stat(block.T, n)
    else:
        beta = 2
        k = min(max(int(round(config["k_frac"] * n)), 1), n - 1)
        scaled = stats.scaled_last_swap_stat(block.vectors[:, k - 1], n, k)
    ref = stats.tw_reference(beta)
    rep = stats.moment_report(scaled, ref, seed=config["seed"])
    np.savetxt(out / "samples.csv", scaled, fmt="%.17g", header="scaled", comments="")
    counts, edges = stats.histogram(scaled, bins=config["bins"])
    with open(out / "histogram.csv", "w") as fh:
        fh.write("bin_lo,bin_hi,count\n")
        for c, a, b in zip(counts, edges[:-1], edges[1:]):
            fh.write(f"{a!r},{b!r},{int(c)}\n")
    if config["svg"]:
        title = f"{args.engine} {stat} N={n}" + (f" k={k}" if k else "") + f" vs TW beta={beta}"
        (out / "histogram.svg").write_text(_svg_histogram(counts, edges, ref, title))
    passed = True
    if config["tolerance"] is not None:
        passed = abs(rep.mean - ref.mean) <= config["tolerance"]
    body = {"passed": passed, "beta": beta, "k": k, "moments": rep.to_dict(),
            "histogram": {"edges": edges.tolist(), "counts": counts.tolist()}}
    _write_report(out, f"tw {args.engine}", config, body)
    line = (f"tw {args.engine} {stat} N={n}" + (f" k={k}" if k else "") +
            f": mean {rep.mean:.4f} (ref {ref.mean:.4f}), sd {rep.std:.4f} (ref {ref.std:.4f})")
    return _verdict(passed, line)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"simulate": cmd_simulate, "verify": cmd_verify, "tw": cmd_tw}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"osplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"osplab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
