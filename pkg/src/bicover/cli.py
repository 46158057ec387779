"""Command-line entry point.

Every invocation is first turned into an :class:`ExperimentSpec`; ``run``
executes a spec and returns the exit status plus the artifacts it produced,
so a saved spec (``--save-spec``) replays to byte-identical output via
``bicover replay``.

Exit status: 0 success, 1 verification failure, 2 usage error, 3 resource
cap refusal.  Failures print one ``bicover: error=<kind> exit=<code>
msg=<text>`` line on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from . import io
from .approximation import cover_via_coloring_sweep
from .battery import BatteryConfig, load_seed_file, run_battery
from .constructions import ConstructionError, hbc, kn_trace, mbc
from .core import Hypergraph, greedy_hitting_set, greedy_maximal_matching, verify_cover
from .generators import (
    CoverFriendlyParams,
    GeneratorError,
    gen_clique_gap,
    gen_complete,
    gen_cover_friendly,
    gen_g1,
    gen_odd_cycle,
    gen_random_kuniform,
    gen_random_m_edges,
)
from .oracles import (
    DEFAULT_CAP,
    DEFAULT_XCAP,
    M_SEARCH_BUDGET,
    CapExceeded,
    OracleInvariantError,
    m_search,
    oracle_report,
)
from .randomized import NonTermination, PreconditionError, check_run, mtc, sparse_random_cover

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class ExperimentSpec:
    command: str
    instance: str | None = None
    generator: str | None = None
    algorithm: str | None = None
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    trials: int = 1
    output: str | None = None
    fmt: str = "text"

    def to_json(self) -> str:
        return io.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        data = json.loads(text)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise UsageError(f"unknown spec fields {sorted(unknown)}")
        if "command" not in data:
            raise UsageError("spec has no command")
        return cls(**data)


@dataclass
class Outcome:
    status: int
    artifacts: dict[str, str]
    message: str = ""


def _load_graph(spec: ExperimentSpec) -> Hypergraph:
    if spec.instance is None:
        raise UsageError("no hypergraph file given")
    path = Path(spec.instance)
    if not path.is_file():
        raise UsageError(f"file not found: {path}")
    return io.read_bhg(path)


def _read_vertex_lines(path: str) -> list[list[int]]:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"file not found: {p}")
    out = []
    for line in p.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        try:
            out.append([int(v) - 1 for v in line.split()])
        except ValueError as exc:
            raise UsageError(f"{p}: non-integer vertex id") from exc
    return out


def _emit(spec: ExperimentSpec, payload: dict[str, Any], text: str) -> dict[str, str]:
    body = io.dumps(payload) if spec.fmt == "json" else text + "\n"
    return {spec.output or "-": body}


def _cmd_gen(spec: ExperimentSpec) -> Outcome:
    p = spec.params
    name = spec.generator
    seed = 0 if spec.seed is None else spec.seed
    extra: dict[str, str] = {}
    try:
        if name == "complete":
            G = gen_complete(p["n"], p["k"])
        elif name == "cycle":
            G = gen_odd_cycle(p["n"])
        elif name == "g1":
            G = gen_g1()
        elif name == "coverfriendly":
            G = gen_cover_friendly(CoverFriendlyParams(p["p"], p["q"]))
        elif name == "random":
            if p.get("m") is not None:
                G = gen_random_m_edges(p["n"], p["k"], p["m"], seed)
            elif p.get("prob") is not None:
                G = gen_random_kuniform(p["n"], p["k"], p["prob"], seed)
            else:
                raise UsageError("random needs --prob or --m")
        elif name == "cliquegap":
            G, rep = gen_clique_gap(p["k"], p["t"], p["n"], seed)
            if p.get("report"):
                extra[p["report"]] = io.dumps(io.clique_gap_to_dict(rep))
        else:
            raise UsageError(f"unknown generator {name!r}")
    except KeyError as exc:
        raise UsageError(f"generator {name} needs --{exc.args[0]}") from exc
    comments = [f"generator {name} {json.dumps(p, sort_keys=True)} seed {seed}"]
    return Outcome(EXIT_OK, {spec.output or "-": io.format_bhg(G, comments), **extra})


def _cmd_cover(spec: ExperimentSpec) -> Outcome:
    G = _load_graph(spec)
    algo = spec.algorithm
    p = spec.params
    if algo == "kn":
        trace = kn_trace(G.n, G.k)
    elif algo == "mbc":
        M = _read_vertex_lines(p["matching_file"]) if p.get("matching_file") else greedy_maximal_matching(G)
        trace = mbc(G, M)
    elif algo == "hbc":
        if p.get("hitting_file"):
            H = [v for line in _read_vertex_lines(p["hitting_file"]) for v in line]
        else:
            H = greedy_hitting_set(G)
        trace = hbc(G, H)
    else:
        raise UsageError(f"unknown cover algorithm {algo!r}")
    cert = verify_cover(G, trace.cover)
    status = EXIT_OK if cert.valid and trace.within_bound else EXIT_INVALID
    text = (f"{algo}: {trace.size} bicolorings (bound {trace.bound}), valid {cert.valid}\n"
            + "\n".join(str(X) for X in trace.cover.colorings))
    return Outcome(status, _emit(spec, io.trace_to_dict(trace), text.rstrip()),
                   "" if status == EXIT_OK else "invalid: cover failed verification or bound")


def _cmd_rcover(spec: ExperimentSpec) -> Outcome:
    G = _load_graph(spec)
    x = spec.params.get("x")
    if x is None:
        raise UsageError("rcover needs --x")
    override = bool(spec.params.get("override"))
    algo = spec.algorithm
    if algo not in ("sparse", "mtc"):
        raise UsageError(f"unknown randomized algorithm {algo!r}")
    base = 0 if spec.seed is None else spec.seed
    fn = sparse_random_cover if algo == "sparse" else mtc
    if spec.trials < 1:
        raise UsageError("--trials must be positive")
    if spec.trials == 1 and spec.fmt != "csv":
        run = fn(G, x, base, override=override)
        ok = check_run(G, run)
        text = (f"{algo}: x={x} seed={base} iterations={run.iterations} bits={run.bits_used} valid={ok}\n"
                + "\n".join(str(X) for X in run.cover.colorings))
        return Outcome(EXIT_OK if ok else EXIT_INVALID, _emit(spec, io.run_to_dict(run), text))
    rows = []
    for seed in range(base, base + spec.trials):
        run = fn(G, x, seed, override=override)
        rows.append((seed, run.iterations, run.bits_used, check_run(G, run)))
    status = EXIT_OK if all(r[3] for r in rows) else EXIT_INVALID
    return Outcome(status, {spec.output or "-": io.mc_csv(rows)})


def _cmd_approx(spec: ExperimentSpec) -> Outcome:
    G = _load_graph(spec)
    budget = spec.params.get("budget")
    rep = cover_via_coloring_sweep(G) if budget is None else cover_via_coloring_sweep(G, budget)
    valid = verify_cover(G, rep.cover).valid
    text = (f"sweep: size {rep.size} via {rep.heuristic} (s* = {rep.s_star}, top {rep.top}), valid {valid}\n"
            + "\n".join(str(X) for X in rep.cover.colorings))
    return Outcome(EXIT_OK if valid else EXIT_INVALID, _emit(spec, io.sweep_to_dict(rep), text.rstrip()))


def _cmd_oracle(spec: ExperimentSpec) -> Outcome:
    G = _load_graph(spec)
    cap = spec.params.get("cap") or DEFAULT_CAP
    xcap = spec.params.get("xcap") or DEFAULT_XCAP
    r = oracle_report(G, cap=cap, xcap=xcap)
    text = (f"n={r.n} k={r.k} m={r.m} chi_c={r.chi_c} chi={r.chi} alpha={r.alpha} "
            f"gamma={r.gamma} omega={r.omega}{' (flagged)' if r.omega_flagged else ''}")
    if r.notes:
        text += "\n" + "\n".join(f"note: {s}" for s in r.notes)
    return Outcome(EXIT_OK, _emit(spec, io.oracle_report_to_dict(r), text))


def _extract_cover(data: Any) -> dict[str, Any]:
    """Accept a bare cover or any artifact that embeds one under "cover"."""
    if isinstance(data, dict) and "colorings" in data:
        return data
    if isinstance(data, dict) and isinstance(data.get("cover"), dict):
        return data["cover"]
    raise io.FormatError("no cover found in JSON (expected 'colorings' or a 'cover' object)")


def _cmd_verify(spec: ExperimentSpec) -> Outcome:
    G = _load_graph(spec)
    path = spec.params.get("cover_file")
    if not path or not Path(path).is_file():
        raise UsageError(f"cover file not found: {path}")
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise io.FormatError(f"{path}: invalid JSON: {exc}") from exc
    C = io.cover_from_dict(_extract_cover(data))
    if C.n != G.n:
        raise UsageError(f"cover has n={C.n}, hypergraph has n={G.n}")
    cert = verify_cover(G, C)
    missing = [j + 1 for j in cert.uncovered()]
    text = f"valid {cert.valid}" + ("" if cert.valid else f"; uncovered edges {missing}")
    out = _emit(spec, io.certificate_to_dict(cert), text)
    if cert.valid:
        return Outcome(EXIT_OK, out)
    return Outcome(EXIT_INVALID, out, f"invalid: {len(missing)} uncovered edge(s), first {missing[0]}")


def _cmd_battery(spec: ExperimentSpec) -> Outcome:
    p = spec.params
    cfg = load_seed_file(p["seed_file"]) if p.get("seed_file") else BatteryConfig()
    if spec.seed is not None:
        cfg.master_seed = spec.seed
    cfg.quick = bool(p.get("quick"))
    result = run_battery(cfg, p.get("only"))
    outdir = spec.output or "battery-out"
    arts = {
        str(Path(outdir) / "battery.json"): io.dumps(result.to_dict()),
        str(Path(outdir) / "battery.csv"): result.csv(),
        str(Path(outdir) / "mc_sparse.csv"): result.mc_sparse,
        str(Path(outdir) / "mc_mtc.csv"): result.mc_mtc,
        "-": (io.dumps(result.to_dict()) if spec.fmt == "json" else
              result.csv() if spec.fmt == "csv" else result.table() + "\n"),
    }
    failed = [r.id for r in result.rows if not r.passed]
    return Outcome(EXIT_OK if not failed else EXIT_INVALID, arts,
                   f"invalid: criteria failed {failed}" if failed else "")


def _cmd_msearch(spec: ExperimentSpec) -> Outcome:
    p = spec.params
    rep = m_search(p["k"], p["x"], p["n"], p.get("budget") or M_SEARCH_BUDGET)
    text = (f"m(k={rep.k}, x={rep.x}; n={rep.n}) = {rep.value}; bracket ({rep.lower_bound}, "
            f"{rep.upper_bound}] via {rep.upper_witness}")
    return Outcome(EXIT_OK, _emit(spec, io.msearch_to_dict(rep), text))


COMMANDS = {
    "gen": _cmd_gen, "cover": _cmd_cover, "rcover": _cmd_rcover, "approx": _cmd_approx,
    "oracle": _cmd_oracle, "verify": _cmd_verify, "battery": _cmd_battery, "msearch": _cmd_msearch,
}


def run(spec: ExperimentSpec) -> Outcome:
    """Execute a spec.  Errors are mapped to exit codes, never raised."""
    fn = COMMANDS.get(spec.command)
    if fn is None:
        return Outcome(EXIT_USAGE, {}, f"usage: unknown command {spec.command!r}")
    try:
        return fn(spec)
    except CapExceeded as exc:
        arts = {}
        report = getattr(exc, "report", None)
        if report is not None and spec.command == "msearch":
            arts = _emit(spec, io.msearch_to_dict(report), f"refused: {exc}")
        return Outcome(EXIT_CAP, arts, f"cap: {exc}")
    except GeneratorError as exc:
        code = EXIT_CAP if "budget" in str(exc) else EXIT_USAGE
        return Outcome(code, {}, f"{'cap' if code == EXIT_CAP else 'usage'}: {exc}")
    except OracleInvariantError as exc:
        return Outcome(EXIT_INVALID, {}, f"invariant: {exc}")
    except NonTermination as exc:
        return Outcome(EXIT_INVALID, {}, f"nontermination: {exc}")
    except (UsageError, io.FormatError, ConstructionError, PreconditionError, ValueError) as exc:
        return Outcome(EXIT_USAGE, {}, f"usage: {exc}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bicover", description="Bicoloring covers of k-uniform hypergraphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, seed: bool = False) -> None:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", action="store_const", const="json", dest="fmt")
        g.add_argument("--csv", action="store_const", const="csv", dest="fmt")
        p.add_argument("-o", "--output", help="output file (directory for battery)")
        p.add_argument("--save-spec", metavar="FILE", help="write the experiment spec as JSON first")
        if seed:
            p.add_argument("--seed", type=int)
        p.set_defaults(fmt="text")

    g = sub.add_parser("gen", help="generate a hypergraph in bhg format")
    g.add_argument("generator", choices=["complete", "cycle", "g1", "coverfriendly", "random", "cliquegap"])
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--p", type=int, help="rows of the cover-friendly grid")
    g.add_argument("--q", type=int, help="columns of the cover-friendly grid")
    g.add_argument("--prob", type=float, help="edge probability (random)")
    g.add_argument("--m", type=int, help="exact edge count (random)")
    g.add_argument("--t", type=int, help="gap exponent (cliquegap)")
    g.add_argument("--report", help="write the clique-gap report JSON here")
    common(g, seed=True)

    c = sub.add_parser("cover", help="deterministic cover construction")
    c.add_argument("file")
    c.add_argument("--algo", choices=["mbc", "hbc", "kn"], required=True)
    src = c.add_mutually_exclusive_group()
    src.add_argument("--matching-file")
    src.add_argument("--hitting-file")
    common(c)

    r = sub.add_parser("rcover", help="randomized cover")
    r.add_argument("file")
    r.add_argument("--x", type=int, required=True)
    r.add_argument("--algo", choices=["sparse", "mtc"], required=True)
    r.add_argument("--trials", type=int, default=1)
    r.add_argument("--override", action="store_true", help="run even if the precondition fails")
    common(r, seed=True)

    a = sub.add_parser("approx", help="coloring-sweep approximation")
    a.add_argument("file")
    a.add_argument("--budget", type=int, help="backtracking node budget")
    common(a)

    o = sub.add_parser("oracle", help="exact parameters with witnesses")
    o.add_argument("file")
    o.add_argument("--cap", type=int)
    o.add_argument("--xcap", type=int)
    common(o)

    v = sub.add_parser("verify", help="check a cover against a hypergraph")
    v.add_argument("file")
    v.add_argument("cover_file")
    common(v)

    b = sub.add_parser("battery", help="run the invariant battery")
    b.add_argument("--quick", action="store_true")
    b.add_argument("--seed-file")
    b.add_argument("--only", type=int, nargs="+", metavar="ID")
    common(b, seed=True)

    m = sub.add_parser("msearch", help="exhaustive m(k,x) search on n vertices")
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--x", type=int, required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--budget", type=int)
    common(m)

    rp = sub.add_parser("replay", help="run a saved experiment spec")
    rp.add_argument("spec_file")
    return ap


_TOP_LEVEL = {"command", "save_spec", "fmt", "output", "seed", "trials", "file", "generator", "algo"}


def spec_from_args(ns: argparse.Namespace) -> ExperimentSpec:
    params = {k: v for k, v in vars(ns).items() if k not in _TOP_LEVEL and v is not None}
    return ExperimentSpec(
        command=ns.command,
        instance=getattr(ns, "file", None),
        generator=getattr(ns, "generator", None),
        algorithm=getattr(ns, "algo", None),
        params=params,
        seed=getattr(ns, "seed", None),
        trials=getattr(ns, "trials", 1),
        output=getattr(ns, "output", None),
        fmt=ns.fmt,
    )


def _fail(code: int, message: str) -> int:
    kind, _, text = message.partition(": ")
    text = " ".join(text.split())
    print(f"bicover: error={kind} exit={code} msg={text}", file=sys.stderr)
    return code


def write_artifacts(artifacts: dict[str, str]) -> None:
    for target, text in artifacts.items():
        if target == "-":
            sys.stdout.write(text)
        else:
            path = Path(target)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if ns.command == "replay":
        try:
            spec = ExperimentSpec.from_json(Path(ns.spec_file).read_text())
        except (OSError, json.JSONDecodeError, UsageError, TypeError) as exc:
            return _fail(EXIT_USAGE, f"usage: bad spec file: {exc}")
    else:
        spec = spec_from_args(ns)
    if getattr(ns, "save_spec", None):
        Path(ns.save_spec).write_text(spec.to_json())
    outcome = run(spec)
    write_artifacts(outcome.artifacts)
    if outcome.status != EXIT_OK:
        return _fail(outcome.status, outcome.message or "invalid: output failed verification")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
