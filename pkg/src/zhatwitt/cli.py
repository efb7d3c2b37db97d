"""Command-line interface: ``zhatwitt <command> ...``.

Every command prints JSON (``verify`` can also print a table).  Exit codes:
0 success, 1 failed verification, 2 validation error, 3 numeric
non-convergence, 4 recognition failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__, falsetheta, linalg, plumbing, radial, suites, witt, wrt, zhat
from .errors import ValidationError, ZhatError
from .plumbing import PlumbingGraph
from .qseries import DEFAULT_PRECISION_BITS, QSeries

CACHE_ENV = "ZHATWITT_CACHE_DIR"


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_PRECISION_BITS
    tolerance: float = witt.TOLERANCE
    cache_dir: Path | None = None
    output_path: Path | None = None
    format: str = "json"

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValidationError("precision must be at least 64 bits")


# ---------------------------------------------------------------------------
# helpers


def _emit(cfg: RunConfig, data) -> None:
    text = json.dumps(data, indent=1, sort_keys=False) + "\n"
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)


def load_graph(spec: str) -> PlumbingGraph:
    """A graph JSON path or a bundled corpus name."""
    path = Path(spec)
    if path.is_file():
        return PlumbingGraph.load(path)
    return plumbing.load_corpus_graph(spec)


def _graph_from_args(args) -> PlumbingGraph:
    if getattr(args, "lens", None) is not None:
        return PlumbingGraph.lens(args.lens)
    if not getattr(args, "graph", None):
        raise ValidationError("give a graph file, a corpus name or --lens p")
    return load_graph(args.graph)


def _parse_surgery(text: str):
    knot, _, r = text.rpartition(",")
    if not knot or not r.strip().lstrip("-").isdigit():
        raise ValidationError("--surgery expects KNOT,r such as T(3,7),1")
    return knot.strip(), int(r)


def _parse_theta(text: str) -> tuple:
    bits = tuple(int(x) for x in text.replace(",", " ").split())
    if any(b not in (0, 1) for b in bits):
        raise ValidationError("theta must be a 0/1 vector")
    return bits


def _complex_json(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _cache_path(cfg: RunConfig, key: dict) -> Path | None:
    if cfg.cache_dir is None:
        return None
    digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
    return Path(cfg.cache_dir) / f"{digest}.json"


def _limits_for(graph: PlumbingGraph, use_closed_form: bool):
    if not use_closed_form:
        return None
    return witt.limits_from_forms(graph, witt.corpus_entry(graph.name)["closed_forms"])


# ---------------------------------------------------------------------------
# commands


def cmd_zhat(args, cfg: RunConfig):
    g = _graph_from_args(args)
    q_max = Fraction(args.qmax)
    if q_max <= 0:
        raise ValidationError("--qmax must be positive")
    key = {"graph": g.to_json(), "q_max": str(q_max), "folded": args.folded, "version": __version__}
    cached = _cache_path(cfg, key)
    if cached is not None and cached.is_file() and not args.no_cache:
        out = json.loads(cached.read_text())
    else:
        out = []
        if args.folded:
            classes = plumbing.spinc_reps(g)
            for orb, s in zhat.folded_zhat(g, q_max):
                out.append({"orbit": list(orb), "rep": list(classes[orb[0]].rep), "series": s.to_json()})
        else:
            for c, s in zhat.zhat_all(g, q_max):
                out.append({"class": c.index, "rep": list(c.rep), "conjugate": c.conjugate,
                            "series": s.to_json()})
        if cached is not None:
            cached.parent.mkdir(parents=True, exist_ok=True)
            cached.write_text(json.dumps(out))
    if args.spinc != "all":
        idx = int(args.spinc)
        out = [x for x in out if x.get("class") == idx or idx in x.get("orbit", [])]
        if not out:
            raise ValidationError(f"no Spin^c class {idx}")
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        stem = g.name or "graph"
        for x in out:
            tag = x["class"] if "class" in x else "_".join(map(str, x["orbit"]))
            (d / f"{stem}_spinc{tag}.json").write_text(json.dumps(x["series"], indent=1) + "\n")
    return out


def cmd_tau6(args, cfg: RunConfig):
    if args.surgery:
        knot, r = _parse_surgery(args.surgery)
        rep = suites.zhs_report(falsetheta.surgery_family(knot).form(r), f"{knot}, r={r}")
        return {"manifold": rep.manifold, "channels": [c.to_json() for c in rep.channels]}
    g = _graph_from_args(args)
    chans = witt.tau6_channels(g, args.method, limits=_limits_for(g, args.closed_form),
                               prec=cfg.precision_bits)
    out = []
    for c in chans:
        entry = {"theta": list(c.theta), "method": c.method, **_complex_json(c.value.value),
                 "err": float(c.value.err)}
        entry["recognized"] = witt.recognize(c.value, cfg.tolerance).to_json()
        out.append(entry)
    return {"manifold": g.name, "channels": out}


def cmd_witt(args, cfg: RunConfig):
    if args.surgery:
        knot, r = _parse_surgery(args.surgery)
        return suites.zhs_report(falsetheta.surgery_family(knot).form(r), f"{knot}, r={r}").to_json()
    g = _graph_from_args(args)
    ttc = None
    if args.two_theta_cubed:
        ttc = {}
        for item in args.two_theta_cubed:
            th, _, val = item.partition("=")
            ttc[_parse_theta(th)] = (int(val) % 4, "input")
    rep = witt.witt_report(g, ttc, args.method, cfg.tolerance, _limits_for(g, args.closed_form))
    return rep.to_json()


def cmd_witt4d(args, cfg: RunConfig):
    g = _graph_from_args(args)
    B = plumbing.adjacency_matrix(g)
    bp, bm, _ = linalg.signature(B)
    diag = linalg.diagonalize_mod3(B)
    return {"manifold": g.name, "signature": bp - bm, "mod3_diagonal": list(diag.entries),
            "witt_X": diag.trace % 4, "witt_4d": witt.witt_4d(B)}


def cmd_wrt_bruteforce(args, cfg: RunConfig):
    g = _graph_from_args(args)
    if g.size > args.max_vertices:
        raise ValidationError(f"graph has {g.size} vertices; raise --max-vertices to force")
    thetas = [_parse_theta(args.theta)] if args.theta else plumbing.theta_reps(g)
    out = []
    for th in thetas:
        v = wrt.wrt_refined_bruteforce(g, args.k, th, prec=max(128, cfg.precision_bits // 2))
        out.append({"theta": list(th), **_complex_json(v.value), "err": float(v.err)})
    return {"manifold": g.name, "k": args.k, "channels": out}


def cmd_falsetheta(args, cfg: RunConfig):
    if args.series:
        fn = {"psi": falsetheta.psi_qseries, "phi": falsetheta.phi_qseries,
              "B": falsetheta.b_qseries}[args.kind]
        return fn(args.m, args.r, Fraction(args.qmax)).to_json()
    fn = {"psi": falsetheta.psi_at_root, "phi": falsetheta.phi_at_root,
          "B": falsetheta.b_function_at_root}[args.kind]
    exact = fn(args.m, args.r, args.k, exact=True)
    val = exact.to_complex(cfg.precision_bits)
    out = {"kind": args.kind, "m": args.m, "r": args.r, "k": args.k, **_complex_json(val)}
    if args.exact:
        out["exact"] = {str(ph): str(c) for ph, c in exact.terms.items()}
    return out


def cmd_surgery(args, cfg: RunConfig):
    fam = falsetheta.surgery_family(args.knot)
    form = fam.form(args.r)
    rep = suites.zhs_report(form, form.label)
    return {"knot": fam.knot, "r": args.r, "brieskorn": list(fam.brieskorn(args.r)),
            "form": form.to_json(), "series": form.series(Fraction(args.qmax)).to_json(),
            "limit_k6": _complex_json(form.value_at_root(6)), "report": rep.to_json()}


def _load_series(spec: str) -> QSeries:
    path = Path(spec)
    if path.is_file():
        return QSeries.loads(path.read_text())
    return plumbing.corpus_series(spec)


def cmd_radial(args, cfg: RunConfig):
    s = _load_series(args.series)
    ys = [float(y) for y in args.ygrid] if args.ygrid else list(radial.DEFAULT_Y_GRID)
    truncs = [Fraction(n) for n in args.truncations] if args.truncations else None
    scan = dict(y_grid=ys, truncations=truncs, allow_clip=args.allow_clip, backend=args.backend)
    if args.tau6:
        res = radial.tau6_numeric(s, **scan)
        est, out = res.estimate, res.to_json()
    else:
        est = radial.radial_scan(s, Fraction(args.root), **scan)
        out = est.to_json()
    if args.csv:
        Path(args.csv).write_text(est.to_csv())
    return out


def cmd_sumrule(args, cfg: RunConfig):
    out = []
    for p in args.p:
        lk = -wrt.lens_lk(p) if args.flip_lk else None
        out.append(witt.sumrule_check(p, args.k, lk).to_json())
    return out


def cmd_verify(args, cfg: RunConfig):
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    checks = [c for n in names for c in suites.run(n)]
    return checks


COMMANDS = {
    "zhat": cmd_zhat, "tau6": cmd_tau6, "witt": cmd_witt, "witt4d": cmd_witt4d,
    "wrt-bruteforce": cmd_wrt_bruteforce, "falsetheta": cmd_falsetheta, "surgery": cmd_surgery,
    "radial": cmd_radial, "sumrule": cmd_sumrule, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zhatwitt", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION_BITS, help="working precision in bits")
    p.add_argument("--tolerance", type=float, default=witt.TOLERANCE, help="recognition tolerance")
    p.add_argument("--cache-dir", default=os.environ.get(CACHE_ENV), help=f"result cache (env {CACHE_ENV})")
    p.add_argument("--out-file", help="write JSON here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp, surgery=False):
        sp.add_argument("graph", nargs="?", help="graph JSON file or corpus name")
        sp.add_argument("--lens", type=int, help="use -L(p,1)")
        if surgery:
            sp.add_argument("--surgery", help="torus knot family and r, e.g. 'T(3,7),1'")

    sp = sub.add_parser("zhat", help="Ẑ series per Spin^c class")
    graph_args(sp)
    sp.add_argument("--qmax", default="20", help="relative exponent bound")
    sp.add_argument("--spinc", default="all", help="'all' or a class index")
    sp.add_argument("--folded", action="store_true", help="emit Ẑ_b + Ẑ_-b per orbit")
    sp.add_argument("--out", help="directory for one series file per class")
    sp.add_argument("--no-cache", action="store_true")

    for name, helptext in (("tau6", "tau_6 per Theta channel"), ("witt", "Witt invariant report")):
        sp = sub.add_parser(name, help=helptext)
        graph_args(sp, surgery=True)
        sp.add_argument("--method", default="auto", choices=("auto", "plumbed", "cwitt"))
        sp.add_argument("--closed-form", action="store_true",
                        help="use the bundled false theta closed forms instead of the plumbing limits")
        if name == "witt":
            sp.add_argument("--two-theta-cubed", action="append", metavar="THETA=VALUE",
                            help="2 Theta^3 mod 4 for a class, e.g. '0,1,0,1=2'")

    sp = sub.add_parser("witt4d", help="sigma(X) - w(X) mod 4 from the intersection form")
    graph_args(sp)

    sp = sub.add_parser("wrt-bruteforce", help="refined WRT state sum")
    graph_args(sp)
    sp.add_argument("--k", type=int, default=6)
    sp.add_argument("--theta", help="0/1 vector; default all classes")
    sp.add_argument("--max-vertices", type=int, default=6)

    sp = sub.add_parser("falsetheta", help="false theta values at roots of unity or series")
    sp.add_argument("--kind", default="psi", choices=("psi", "phi", "B"))
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--k", type=int, default=6)
    sp.add_argument("--exact", action="store_true", help="include the exact root-of-unity sum")
    sp.add_argument("--series", action="store_true", help="emit the q-series instead")
    sp.add_argument("--qmax", default="20")

    sp = sub.add_parser("surgery", help="-1/r surgery on a torus knot")
    sp.add_argument("knot", help="e.g. T(2,3), T(3,-7)")
    sp.add_argument("r", type=int)
    sp.add_argument("--qmax", default="20")

    sp = sub.add_parser("radial", help="radial limit of a q-series")
    sp.add_argument("series", help="series JSON file or corpus series name")
    sp.add_argument("--root", default="1/6", help="target u in q -> exp(2 pi i u)")
    sp.add_argument("--ygrid", nargs="+", help="strictly decreasing y values")
    sp.add_argument("--truncations", nargs="+", help="relative exponent bounds")
    sp.add_argument("--allow-clip", action="store_true", help="accept truncations beyond the series")
    sp.add_argument("--backend", default="numpy", choices=("numpy", "mpmath"))
    sp.add_argument("--tau6", action="store_true", help="also form tau_6 for an integral homology sphere")
    sp.add_argument("--csv", help="write the (N, y) grid as CSV")

    sp = sub.add_parser("sumrule", help="sum rule between Witt and WRT coefficients")
    sp.add_argument("--p", type=int, nargs="+", default=list(range(1, 13)))
    sp.add_argument("--k", type=int, default=6)
    sp.add_argument("--flip-lk", action="store_true", help="negative control with the wrong sign")

    sp = sub.add_parser("verify", help="golden-value regression suites")
    sp.add_argument("--suite", default="all", choices=("all", *suites.SUITES))
    sp.add_argument("--format", default="table", choices=("table", "json"))
    return p


def _table(checks) -> str:
    width = max((len(c.name) for c in checks), default=10)
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.suite:<10} {c.name:<{width}}  "
             f"expected {c.expected}  got {c.got}" for c in checks]
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} passed")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.precision, args.tolerance,
                        Path(args.cache_dir) if args.cache_dir else None,
                        Path(args.out_file) if args.out_file else None)
        result = COMMANDS[args.command](args, cfg)
    except ZhatError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except KeyError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return ValidationError.exit_code
    if args.command == "verify":
        if args.format == "table":
            text = _table(result)
            if cfg.output_path:
                cfg.output_path.write_text(text)
            else:
                sys.stdout.write(text)
        else:
            _emit(cfg, [c.to_json() for c in result])
        return 0 if all(c.passed for c in result) else 1
    _emit(cfg, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
