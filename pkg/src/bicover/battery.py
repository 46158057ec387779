"""The theorem-invariant battery: twelve checks, each comparing a bound with
an observed value, with seeds derived from one seed file.

Artifacts (``battery.json``, ``battery.csv``, ``mc_sparse.csv``,
``mc_mtc.csv``) contain no timings or paths, so two runs from the same seed
file are byte-identical.
"""
from __future__ import annotations

import csv
import io as io_mod
import json
import math
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import io
from .approximation import cover_via_coloring_sweep
from .constructions import check_trace, hbc, kn_cover, mbc
from .core import (
    Hypergraph,
    ceil_log2,
    ceil_log2_ratio,
    dependency,
    greedy_hitting_set,
    greedy_maximal_matching,
    verify_cover,
)
from .generators import (
    CoverFriendlyParams,
    gen_bounded_dependency,
    gen_clique_gap,
    gen_complete,
    gen_cover_friendly,
    gen_g1,
    gen_odd_cycle,
    gen_random_kuniform,
    gen_random_m_edges,
)
from .oracles import (
    CapExceeded,
    OracleReport,
    exact_chi_c,
    exact_chromatic,
    exact_gamma,
    lower_bound_checks,
    m_search,
    oracle_report,
)
from .randomized import check_run, max_dependency_for, mtc, sparse_random_cover

DEFAULT_MASTER_SEED = 20240607
BATTERY_XCAP = 4
BATTERY_CSV_HEADER = ("id", "name", "bound", "observed", "pass")


@dataclass
class Row:
    id: int
    name: str
    bound: str
    observed: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)


@dataclass
class BatteryConfig:
    master_seed: int = DEFAULT_MASTER_SEED
    quick: bool = False

    def seed(self, criterion: int, index: int = 0) -> int:
        ss = np.random.SeedSequence([self.master_seed, criterion, index])
        return int(ss.generate_state(1)[0])


def load_seed_file(path: str | Path) -> BatteryConfig:
    """Seed files are JSON ``{"master_seed": int}`` or a bare integer."""
    text = Path(path).read_text().strip()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"seed file {path}: not JSON or an integer") from exc
    if isinstance(data, int):
        return BatteryConfig(master_seed=data)
    if isinstance(data, dict) and isinstance(data.get("master_seed"), int):
        return BatteryConfig(master_seed=data["master_seed"])
    raise ValueError(f"seed file {path}: expected an integer or {{\"master_seed\": int}}")


# --- instance sets ----------------------------------------------------------


def golden_instances() -> list[tuple[str, Hypergraph]]:
    K53 = gen_complete(5, 3)
    H = Hypergraph(5, 3, tuple(e for e in K53.edges if e not in ((0, 1, 2), (0, 1, 3))))
    return [
        ("K4", gen_complete(4, 2)),
        ("C5", gen_odd_cycle(5)),
        ("C7", gen_odd_cycle(7)),
        ("K5^3", K53),
        ("H", H),
        ("G1", gen_g1()),
        ("K9^3", gen_complete(9, 3)),
    ]


def complete_instances() -> list[tuple[str, Hypergraph]]:
    return [(f"K{n}^{k}", gen_complete(n, k)) for k in range(2, 5) for n in range(k, 11)]


def random_oracle_instances(cfg: BatteryConfig, count: int) -> list[tuple[str, Hypergraph]]:
    out = []
    combos = [(k, p) for k in (2, 3) for p in (0.2, 0.5, 0.8)]
    for i in range(count):
        k, p = combos[i % len(combos)]
        seed = cfg.seed(2, i)
        n = 4 + seed % 7  # 4..10
        out.append((f"rand{i}(n={n},k={k},p={p})", gen_random_kuniform(n, k, p, seed)))
    return out


class OracleCache:
    """One oracle report per named instance, shared by several criteria."""

    def __init__(self) -> None:
        self._reports: dict[str, OracleReport] = {}

    def get(self, name: str, G: Hypergraph) -> OracleReport:
        if name not in self._reports:
            self._reports[name] = oracle_report(G, xcap=BATTERY_XCAP)
        return self._reports[name]


# --- criteria ---------------------------------------------------------------


def c1_complete(cfg, cache, ctx) -> Row:
    bad = []
    for name, G in complete_instances():
        target = ceil_log2_ratio(G.n, G.k - 1)
        x, _ = exact_chi_c(G)
        C = kn_cover(G.n, G.k)
        if x != target or len(C) != target or not verify_cover(G, C).valid:
            bad.append({"instance": name, "chi_c": x, "kn_size": len(C), "target": target})
    k93, _ = exact_chi_c(gen_complete(9, 3))
    ok = not bad and k93 == 3
    return Row(1, "complete-hypergraph tightness", "chi_c(K_n^k) = ceil(log2(n/(k-1))), K9^3 = 3",
               f"{len(bad)} mismatches over {len(complete_instances())} instances, K9^3 = {k93}",
               ok, {"mismatches": bad})


def c2_log_chromatic(cfg, cache, ctx) -> Row:
    count = 20 if cfg.quick else 100
    instances = random_oracle_instances(cfg, count) + golden_instances()
    ctx["random_oracle"] = instances[:count]
    bad = []
    for name, G in instances:
        x, _ = exact_chi_c(G)
        chi, _ = exact_chromatic(G)
        if x != ceil_log2(chi):
            bad.append({"instance": name, "chi_c": x, "chi": chi})
    return Row(2, "chi_c = ceil(log2 chi)", "0 exceptions",
               f"{len(bad)} exceptions over {len(instances)} instances", not bad, {"exceptions": bad})


def c3_g1(cfg, cache, ctx) -> Row:
    G = gen_g1()
    r = cache.get("G1", G)
    same = G.edges == gen_cover_friendly(CoverFriendlyParams(3, 4)).edges
    ok = (r.chi_c, r.alpha, r.gamma) == (2, 5, 3) and same
    return Row(3, "G1 triple", "(chi_c, alpha, gamma) = (2, 5, 3), G1 = cover-friendly(3,4)",
               f"({r.chi_c}, {r.alpha}, {r.gamma}), identical = {same}", ok)


def _criteria_1_to_3() -> list[tuple[str, Hypergraph]]:
    return complete_instances() + [("G1", gen_g1())]


def c4_gamma_table(cfg, cache, ctx) -> Row:
    expected = {"K4": 1, "C7": 3, "C5": 2, "H": 3}
    gold = dict(golden_instances())
    got = {name: exact_gamma(gold[name])[0] for name in expected}
    pool = _criteria_1_to_3() + ctx.get("random_oracle", [])
    bad = []
    for name, G in pool:
        r = cache.get(name, G)
        if r.gamma is None or (G.m and r.gamma < G.k - 1) or r.alpha < r.gamma:
            bad.append({"instance": name, "gamma": r.gamma, "alpha": r.alpha, "k": G.k})
    ok = got == expected and not bad
    return Row(4, "small-instance gamma table", "gamma(K4,C7,C5,H) = (1,3,2,3); gamma >= k-1, alpha >= gamma",
               f"gamma = ({got['K4']},{got['C7']},{got['C5']},{got['H']}); {len(bad)} violations over {len(pool)}",
               ok, {"gamma": got, "violations": bad})


def c5_lower_bounds(cfg, cache, ctx) -> Row:
    pool = _criteria_1_to_3() + golden_instances() + ctx.get("random_oracle", [])
    bad = []
    for name, G in pool:
        r = cache.get(name, G)
        checks = lower_bound_checks(G.n, G.k, G.m, r.chi_c, r.chi, r.alpha, r.gamma)
        failed = [c for c, v in checks.items() if not v]
        if failed:
            bad.append({"instance": name, "failed": failed})
    return Row(5, "lower-bound chain", "0 violations", f"{len(bad)} violations over {len(pool)} instances",
               not bad, {"violations": bad})


def c6_constructions(cfg, cache, ctx) -> Row:
    count = 10 if cfg.quick else 50
    pool = _criteria_1_to_3()
    for i in range(count):
        seed = cfg.seed(6, i)
        k = 2 + seed % 3
        n = k + 4 + (seed >> 8) % 15
        p = (0.1, 0.3, 0.6)[(seed >> 16) % 3]
        pool.append((f"rand{i}(n={n},k={k},p={p})", gen_random_kuniform(n, k, p, seed)))
    bad = []
    worst = {"mbc": 0, "hbc": 0}
    for name, G in pool:
        tm = mbc(G, greedy_maximal_matching(G))
        th = hbc(G, greedy_hitting_set(G))
        for t in (tm, th):
            worst[t.algorithm] = max(worst[t.algorithm], t.size - t.bound)
            if not check_trace(G, t):
                bad.append({"instance": name, "algorithm": t.algorithm, "size": t.size, "bound": t.bound})
    return Row(6, "MBC/HBC bounds", "size <= bound, all valid",
               f"{len(bad)} violations over {len(pool)} instances; max(size - bound) mbc {worst['mbc']}, "
               f"hbc {worst['hbc']}", not bad, {"violations": bad})


def c7_sparse(cfg, cache, ctx) -> Row:
    n_inst, per = (20, 10) if cfg.quick else (20, 50)
    rows = []
    attempts = []
    all_valid = True
    for i in range(n_inst):
        G = gen_random_m_edges(12, 3, 8, cfg.seed(7, i))
        for j in range(per):
            seed = cfg.seed(7, 1000 + i * per + j)
            run = sparse_random_cover(G, 2, seed)
            ok = check_run(G, run)
            all_valid &= ok
            attempts.append(run.iterations)
            rows.append((seed, run.iterations, run.bits_used, ok))
    ctx["mc_sparse"] = io.mc_csv(rows)
    N = len(attempts)
    mean = statistics.fmean(attempts)
    sd = statistics.stdev(attempts)
    ucb = mean + 2.33 * sd / math.sqrt(N)
    ok = mean < 2 and ucb < 2.3 and all_valid
    return Row(7, "sparse random cover", "mean attempts < 2, mean + 2.33 sd/sqrt(N) < 2.3, all valid",
               f"mean {mean:.4f}, ucb {ucb:.4f}, N {N}, valid {all_valid}", ok,
               {"mean": round(mean, 6), "ucb": round(ucb, 6), "trials": N})


def c8_mtc(cfg, cache, ctx) -> Row:
    n_inst, per = (5, 20) if cfg.quick else (10, 50)
    budget = max_dependency_for(2, 3)
    rows = []
    Ts = []
    ratios = []
    exact_bits = True
    all_valid = True
    inst_info = []
    for i in range(n_inst):
        G = gen_bounded_dependency(20, 3, 20, budget, cfg.seed(8, i))
        d = dependency(G)
        inst_info.append({"m": G.m, "d": d})
        for j in range(per):
            seed = cfg.seed(8, 1000 + i * per + j)
            run = mtc(G, 2, seed)
            exact_bits &= run.bits_used == G.n * 2 + run.iterations * G.k * 2
            ok = verify_cover(G, run.cover).valid
            all_valid &= ok
            Ts.append(run.iterations)
            ratios.append(G.m / max(d, 1))
            rows.append((seed, run.iterations, run.bits_used, ok))
    ctx["mc_mtc"] = io.mc_csv(rows)
    N = len(Ts)
    mean = statistics.fmean(Ts)
    sd = statistics.stdev(Ts)
    allowance = statistics.fmean(ratios) + 3 * sd / math.sqrt(N)
    ok = budget == 4 and mean <= allowance and exact_bits and all_valid
    return Row(8, "MTC resampling", "d <= 4, mean T <= m/d + 3 sd/sqrt(N), bits = n x + T k x",
               f"budget {budget}, mean T {mean:.4f} <= {allowance:.4f}, bits exact {exact_bits}, N {N}",
               ok, {"instances": inst_info, "mean_T": round(mean, 6), "allowance": round(allowance, 6)})


def c9_m_search(cfg, cache, ctx) -> Row:
    r1 = m_search(2, 1, 5)
    r2 = m_search(2, 2, 5)
    try:
        m_search(3, 2, 9)
        r3 = None
    except CapExceeded as exc:
        r3 = exc.report
    ok = (
        r1.value == 3 and r1.lower_bound == 1 and r1.value > r1.lower_bound
        # 2^((k-1)x-1) is 2 here; 10 also clears 8, the m(3,2) lower bound
        and r2.value == 10 and r2.lower_bound == 2 and r2.value > max(r2.lower_bound, 8)
        and r3 is not None and (r3.lower_bound, r3.upper_bound, r3.upper_witness) == (8, 84, "K_9^3")
    )
    bracket = "none" if r3 is None else f"({r3.lower_bound}, {r3.upper_bound}] via {r3.upper_witness}"
    return Row(9, "m(k,x) brackets", "m(2,1) = 3 > 1, m(2,2; n=5) = 10 > max(2, 8), m(3,2) in (8, 84]",
               f"{r1.value}, {r2.value}, bracket {bracket}", ok,
               {"m21": io.msearch_to_dict(r1), "m22": io.msearch_to_dict(r2),
                "m32": None if r3 is None else io.msearch_to_dict(r3)})


def c10_sweep(cfg, cache, ctx) -> Row:
    pool = _criteria_1_to_3() + golden_instances() + ctx.get("random_oracle", [])
    bad = []
    for name, G in pool:
        r = cache.get(name, G)
        rep = cover_via_coloring_sweep(G)
        ceiling = ceil_log2(-(-G.n // (G.k - 1)))
        if not verify_cover(G, rep.cover).valid or not r.chi_c <= rep.size <= ceiling:
            bad.append({"instance": name, "size": rep.size, "chi_c": r.chi_c, "ceiling": ceiling})
    gold = dict(golden_instances())
    optimal = {name: cover_via_coloring_sweep(gold[name]).size for name in ("G1", "K9^3")}
    ok = not bad and optimal == {"G1": 2, "K9^3": 3}
    return Row(10, "approximation sweep", "chi_c <= size <= ceil(log2 ceil(n/(k-1))); G1 = 2, K9^3 = 3",
               f"{len(bad)} violations over {len(pool)}; G1 {optimal['G1']}, K9^3 {optimal['K9^3']}",
               ok, {"violations": bad})


def c11_clique_gap(cfg, cache, ctx) -> Row:
    seeds = [cfg.seed(11, i) for i in range(5 if cfg.quick else 20)]
    hits = 0
    reports = []
    symbolic = True
    for s in seeds:
        H, rep = gen_clique_gap(3, 1, 30, s)
        hits += rep.omega == 3
        symbolic &= rep.expectations["expected_cliques_below_bound"]
        reports.append({"seed": s, "omega": rep.omega, "alpha": rep.alpha, "deleted": len(rep.deleted),
                        "chi_c_upper": rep.chi_c_upper})
    exp = reports and gen_clique_gap(3, 1, 30, seeds[0], certify=False)[1].expectations
    ok = hits == len(seeds) and symbolic
    return Row(11, "clique-gap procedure", f"omega = 3 on {len(seeds)}/{len(seeds)}; E(C_omega) < n/(k+1)!",
               f"omega = 3 on {hits}/{len(seeds)}; E(C_omega) = {exp['expected_cliques']} "
               f"< {exp['clique_bound']}: {symbolic}", ok, {"runs": reports, "expectations": exp})


SEEDED = (c2_log_chromatic, c6_constructions, c7_sparse, c8_mtc, c11_clique_gap)


def c12_replay(cfg, cache, ctx) -> Row:
    """Re-run every seeded criterion and compare serialized output."""
    same = True
    diffs = []
    for fn in SEEDED:
        ctx2: dict[str, Any] = {}
        a = io.dumps(asdict(fn(cfg, cache, ctx2)))
        b = io.dumps(asdict(fn(cfg, cache, {})))
        if a != b:
            same = False
            diffs.append(fn.__name__)
    return Row(12, "replay determinism", "identical artifacts on replay",
               f"{len(SEEDED) - len(diffs)}/{len(SEEDED)} seeded criteria identical", same, {"differing": diffs})


CRITERIA: tuple[Callable[..., Row], ...] = (
    c1_complete, c2_log_chromatic, c3_g1, c4_gamma_table, c5_lower_bounds, c6_constructions,
    c7_sparse, c8_mtc, c9_m_search, c10_sweep, c11_clique_gap, c12_replay,
)


@dataclass
class BatteryResult:
    config: BatteryConfig
    rows: list[Row]
    mc_sparse: str
    mc_mtc: str

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": io.FORMAT_VERSION,
            "master_seed": self.config.master_seed,
            "quick": self.config.quick,
            "passed": self.passed,
            "rows": [asdict(r) for r in self.rows],
        }

    def csv(self) -> str:
        buf = io_mod.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(BATTERY_CSV_HEADER)
        for r in self.rows:
            w.writerow([r.id, r.name, r.bound, r.observed, int(r.passed)])
        return buf.getvalue()

    def table(self) -> str:
        return "\n".join(
            f"[{'PASS' if r.passed else 'FAIL'}] {r.id:>2} {r.name}: bound {r.bound} | observed {r.observed}"
            for r in self.rows
        )

    def write(self, outdir: str | Path) -> list[Path]:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        files = {
            "battery.json": io.dumps(self.to_dict()),
            "battery.csv": self.csv(),
            "mc_sparse.csv": self.mc_sparse,
            "mc_mtc.csv": self.mc_mtc,
        }
        paths = []
        for name, text in files.items():
            p = out / name
            p.write_text(text)
            paths.append(p)
        return paths


def run_battery(cfg: BatteryConfig, only: list[int] | None = None) -> BatteryResult:
    cache = OracleCache()
    ctx: dict[str, Any] = {}
    rows = []
    for fn in CRITERIA:
        row = fn(cfg, cache, ctx) if only is None or int(fn.__name__[1:].split("_")[0]) in only else None
        if row is not None:
            rows.append(row)
    return BatteryResult(cfg, rows, ctx.get("mc_sparse", io.mc_csv([])), ctx.get("mc_mtc", io.mc_csv([])))
