"""Text and JSON formats.  Files use 1-based vertex and bicoloring ids.

Hypergraph text::

    c comment
    p bhg <n> <m> <k>
    e v1 v2 ... vk

Cover JSON: ``{"n": N, "x": X, "colorings": ["0101...", ...]}`` where
character i of string j is the color of vertex i+1 in bicoloring j+1.

Certificate JSON: ``{"valid": bool, "witness": [w1, ..., wm]}`` with
1-based bicoloring indices and 0 for an uncovered edge.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from .core import Bicoloring, Cover, CoverCertificate, Hypergraph

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


def parse_bhg(text: str) -> Hypergraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None:
                raise FormatError(f"line {lineno}: second problem line")
            if len(parts) != 5 or parts[1] != "bhg":
                raise FormatError(f"line {lineno}: expected 'p bhg <n> <m> <k>'")
            try:
                header = tuple(int(v) for v in parts[2:])
            except ValueError as exc:
                raise FormatError(f"line {lineno}: non-integer header field") from exc
        elif parts[0] == "e":
            if header is None:
                raise FormatError(f"line {lineno}: edge before problem line")
            try:
                edge = [int(v) - 1 for v in parts[1:]]
            except ValueError as exc:
                raise FormatError(f"line {lineno}: non-integer vertex id") from exc
            if len(edge) != header[2]:
                raise FormatError(
                    f"line {lineno}: edge has {len(edge)} vertices, uniformity is {header[2]} "
                    "(non-uniform hypergraphs are not supported)"
                )
            if any(not 0 <= v < header[0] for v in edge):
                raise FormatError(f"line {lineno}: vertex id outside 1..{header[0]}")
            edges.append(tuple(edge))
        else:
            raise FormatError(f"line {lineno}: unknown line type {parts[0]!r}")
    if header is None:
        raise FormatError("missing 'p bhg' problem line")
    n, m, k = header
    if len(edges) != m:
        raise FormatError(f"header declares {m} edges, found {len(edges)}")
    try:
        return Hypergraph(n, k, tuple(edges))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_bhg(G: Hypergraph, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p bhg {G.n} {G.m} {G.k}")
    lines += ["e " + " ".join(str(v + 1) for v in e) for e in G.edges]
    return "\n".join(lines) + "\n"


def read_bhg(path: str | Path) -> Hypergraph:
    return parse_bhg(Path(path).read_text())


def write_bhg(G: Hypergraph, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_bhg(G, comments))


def cover_to_dict(C: Cover) -> dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "n": C.n,
        "x": len(C),
        "colorings": [str(X) for X in C.colorings],
    }


def cover_from_dict(data: dict[str, Any]) -> Cover:
    try:
        n = int(data["n"])
        cols = [Bicoloring.from_string(s) for s in data["colorings"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed cover JSON: {exc}") from exc
    if "x" in data and int(data["x"]) != len(cols):
        raise FormatError(f"cover declares x={data['x']} but lists {len(cols)} bicolorings")
    return Cover(n, tuple(cols))


def certificate_to_dict(cert: CoverCertificate) -> dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "valid": cert.valid,
        "witness": [0 if w is None else w + 1 for w in cert.witness],
    }


def certificate_from_dict(data: dict[str, Any]) -> CoverCertificate:
    witness = tuple(None if w == 0 else int(w) - 1 for w in data["witness"])
    return CoverCertificate(bool(data["valid"]), witness)


def dumps(obj: Any) -> str:
    """Canonical JSON used for every artifact (sorted keys, fixed layout)."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _vertices(vs: Iterable[int]) -> list[int]:
    return [v + 1 for v in vs]


def oracle_report_to_dict(r) -> dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "n": r.n, "k": r.k, "m": r.m,
        "chi_c": r.chi_c, "chi": r.chi, "alpha": r.alpha, "gamma": r.gamma,
        "omega": r.omega, "omega_flagged": r.omega_flagged,
        "cover": cover_to_dict(r.cover),
        "coloring": list(r.coloring.colors),
        "independent_set": _vertices(r.independent_set),
        "gamma_witness": None if r.gamma_witness is None else cover_to_dict(r.gamma_witness),
        "clique": [] if r.omega_flagged else _vertices(r.clique),
        "checks": dict(r.checks),
        "notes": list(r.notes),
    }


def trace_to_dict(trace) -> dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "algorithm": trace.algorithm,
        "input_size": trace.input_size,
        "bound": trace.bound,
        "size": trace.size,
        "within_bound": trace.within_bound,
        "levels": trace.levels,
        "cover": cover_to_dict(trace.cover),
    }


def sweep_to_dict(rep) -> dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "top": rep.top,
        "s_star": rep.s_star,
        "heuristic": rep.heuristic,
        "size": rep.size,
        "records": [
            {"s": r.s, "heuristic": r.heuristic, "colors_used": r.colors_used,
             "cover_size": r.cover_size}
            for r in rep.records
        ],
        "coloring": None if rep.coloring is None else list(rep.coloring.colors),
        "cover": cover_to_dict(rep.cover),
        "notes": list(rep.notes),
    }


def run_to_dict(run) -> dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "algorithm": run.algorithm,
        "seed": run.seed,
        "x": run.x,
        "iterations": run.iterations,
        "bits_used": run.bits_used,
        "transcript": [t + 1 for t in run.transcript] if run.algorithm == "mtc" else list(run.transcript),
        "cover": cover_to_dict(run.cover),
    }


def msearch_to_dict(rep) -> dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "k": rep.k, "x": rep.x, "n": rep.n,
        "value": rep.value,
        "exhaustive": rep.exhaustive,
        "graphs_checked": rep.graphs_checked,
        "lower_bound": rep.lower_bound,
        "upper_bound": rep.upper_bound,
        "upper_witness": rep.upper_witness,
        "general_upper_bound": rep.general_upper_bound,
        "witness_edges": None if rep.witness is None else [_vertices(e) for e in rep.witness.edges],
        "note": rep.note,
    }


def clique_gap_to_dict(rep) -> dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "k": rep.k, "t": rep.t, "n": rep.n, "seed": rep.seed,
        "edge_probability": rep.edge_probability,
        "sampled_edges": rep.sampled_edges,
        "cliques_found": rep.cliques_found,
        "deleted": _vertices(rep.deleted),
        "omega": rep.omega,
        "clique": _vertices(rep.clique),
        "alpha": rep.alpha,
        "alpha_exact": rep.alpha_exact,
        "independent_set": _vertices(rep.independent_set),
        "chi_c_upper": rep.chi_c_upper,
        "expectations": rep.expectations,
    }


MC_CSV_HEADER = "seed,attempts_or_T,bits,valid"


def mc_csv(rows: Iterable[tuple[int, int, int, bool]]) -> str:
    lines = [MC_CSV_HEADER]
    lines += [f"{s},{t},{b},{int(v)}" for s, t, b, v in rows]
    return "\n".join(lines) + "\n"
