"""Command-line frontend.

Subcommands: group, chartable, check, cover, markov, counterexample, sumset,
suite. Reports are JSON (one experiment each) with distance curves written as
CSV; outputs embed the group spec, parameters, seed and package version so a
rerun with the same seed reproduces the report byte for byte.

Exit codes: 0 success, 1 a verified failure (a covering guarantee violated or
a stationarity check broken, which would falsify the implementation), 2 usage
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__, config
from .chartable import (CharTableError, compute_char_table, dumps_interchange,
                        loads_interchange)
from .classfuncs import rep_from_selector
from .counterexample import (AbelianGroup, build_counterexample_rep,
                             m_fold_sumset, translate_cover)
from .criteria import (CriteriaParams, check_qr, check_tqr, multiplicity_profile,
                       three_factor_cover, two_factor_cover)
from .groups import (GroupError, build_group, center,
                     center_free_quotient_chain, conjugacy_classes,
                     normal_subgroups)
from .markov import (build_chain, mixing_experiment, mixing_time,
                     stationarity_residual)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Spec parsing


def parse_group_spec(text: str) -> dict:
    """Parse '@file.json', 'family:affine:5', 'cyclic:12' or nested
    'product(cyclic(2),symmetric(4))' into a group-spec dict."""
    text = text.strip()
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    if text.startswith("family:"):
        text = text[len("family:"):]
    return _parse_compact(text)


def _split_top(s: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


def _parse_compact(s: str) -> dict:
    s = s.strip()
    if "(" in s:
        name, rest = s.split("(", 1)
        if not rest.endswith(")"):
            raise UsageError(f"unbalanced parentheses in group spec {s!r}")
        args = _split_top(rest[:-1])
    else:
        name, *args = s.split(":")
    name = name.strip().lower()
    if name in ("product", "direct_product"):
        if len(args) != 2:
            raise UsageError("product takes exactly two factor specs")
        return {"family": "product",
                "params": {"left": _parse_compact(args[0]),
                           "right": _parse_compact(args[1])}}
    if name == "quaternion8":
        return {"family": name, "params": {}}
    if name in ("affine", "extraspecial"):
        if len(args) != 1:
            raise UsageError(f"{name} takes one parameter p")
        return {"family": name, "params": {"p": int(args[0])}}
    if name in ("cyclic", "dihedral", "symmetric", "alternating"):
        if len(args) != 1:
            raise UsageError(f"{name} takes one parameter n")
        return {"family": name, "params": {"n": int(args[0])}}
    raise UsageError(f"unknown group family {name!r}")


def _load_table(spec: dict):
    G = build_group(spec)
    C = conjugacy_classes(G)
    T = compute_char_table(G, C)
    return G, C, T


# ---------------------------------------------------------------------------
# Output helpers


def _atomic_write(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(doc: dict, out: str | None):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _envelope(command: str, group_spec, params: dict, payload: dict,
              seed: int | None = None) -> dict:
    return {"version": __version__, "command": command,
            "group_spec": group_spec, "seed": seed, "params": params,
            "report": payload}


# ---------------------------------------------------------------------------
# Subcommand implementations (shared by the suite runner)


def run_group(args: dict) -> tuple[dict, int]:
    spec = parse_group_spec(args["group"])
    G = build_group(spec)
    C = conjugacy_classes(G)
    payload = {
        "order": G.order,
        "num_classes": C.num_classes,
        "class_sizes": C.sizes.tolist(),
        "class_representatives": [G.label(int(r)) for r in C.representatives],
        "min_nontrivial_class": C.min_nontrivial_size,
        "abelian": G.is_abelian(),
        "center_order": center(G).order,
        "quotient_chain_orders": [H.order for H in center_free_quotient_chain(G)],
    }
    if args.get("normal_subgroups"):
        payload["normal_subgroup_orders"] = [s.order for s in normal_subgroups(G, C)]
    return _envelope("group", spec, {}, payload), 0


def _side_path(args: dict, rel: str) -> str:
    base = args.get("_filedir")
    return os.path.join(base, rel) if base else rel


def run_chartable(args: dict) -> tuple[dict, int]:
    if args.get("import_path"):
        with open(args["import_path"]) as fh:
            T = loads_interchange(fh.read())
        spec = T.group.source
    elif args.get("group"):
        spec = parse_group_spec(args["group"])
        _, _, T = _load_table(spec)
    else:
        raise UsageError("chartable needs --group or --import")
    if args.get("export"):
        _atomic_write(_side_path(args, args["export"]), dumps_interchange(T) + "\n")
    payload = {"dims": T.dims.tolist(), "quality": T.quality,
               "num_irreps": T.num_irreps, "source": T.source,
               "exported_to": args.get("export")}
    return _envelope("chartable", spec, {}, payload), 0


_TQR_IDS = ("tqr1", "tqr2", "tqr3", "tqr4")
_QR_IDS = ("qr1", "qr2", "qr3", "qr4")


def run_check(args: dict) -> tuple[dict, int]:
    spec = parse_group_spec(args["group"])
    G, C, T = _load_table(spec)
    k = int(args.get("k", 4))
    params = CriteriaParams(
        class_threshold=k, dim_threshold=k, normal_size=k, normal_index=k,
        quotient_size=k,
        density=float(args.get("density", 0.1)),
        power=int(args.get("power", 3)),
        seed=int(args.get("seed", 0)),
        trials=int(args.get("trials", 1000)),
        exhaustive_cap=int(args.get("exhaustive_cap", 20)),
    )
    which = args.get("criterion", "all")
    wanted = set(_TQR_IDS + _QR_IDS) if which == "all" else {which}
    if not wanted <= set(_TQR_IDS + _QR_IDS):
        raise UsageError(f"unknown criterion {which!r}")
    reports = []
    if wanted & set(_TQR_IDS):
        reports += [r for r in check_tqr(G, C, T, params) if r.criterion in wanted]
    if wanted & set(_QR_IDS):
        reports += [r for r in check_qr(G, T, params) if r.criterion in wanted]
    payload = {"criteria": [r.to_json_dict() for r in reports]}
    return (_envelope("check", spec, params.to_json_dict(), payload,
                      seed=params.seed), 0)


def run_cover(args: dict) -> tuple[dict, int]:
    spec = parse_group_spec(args["group"])
    G, C, T = _load_table(spec)
    v1 = rep_from_selector(T, args["v1"])
    v2 = rep_from_selector(T, args["v2"])
    if args.get("v3"):
        v3 = rep_from_selector(T, args["v3"])
        rep = three_factor_cover(T, v1, v2, v3)
        payload = rep.to_json_dict()
        if args.get("profile"):
            payload["multiplicity_profile"] = multiplicity_profile(T, v1, v2, v3)
    else:
        rep = two_factor_cover(T, v1, v2)
        payload = rep.to_json_dict()
    violated = rep.guaranteed and not rep.covered
    payload["guarantee_violated"] = violated
    return (_envelope("cover", spec,
                      {"v1": args["v1"], "v2": args["v2"],
                       "v3": args.get("v3")}, payload),
            1 if violated else 0)


def run_markov(args: dict) -> tuple[dict, int]:
    spec = parse_group_spec(args["group"])
    G, C, T = _load_table(spec)
    V = rep_from_selector(T, args["rep"])
    chain = build_chain(T, V)
    metric = args.get("metric", "tv")
    epsilon = float(args.get("epsilon", 0.25))
    t_max = int(args.get("tmax", 64))
    start = None
    if args.get("start") is not None:
        start = next(iter(rep_from_selector(T, args["start"]).support()))
    rep = mixing_time(chain, metric, epsilon, t_max=t_max, start=start)
    payload = rep.to_json_dict()
    resid = stationarity_residual(chain)
    payload["stationarity_residual"] = resid
    payload["plancherel"] = chain.stationary().tolist()
    if args.get("experiment") is not None:
        payload["mixing_experiment"] = mixing_experiment(
            T, V, epsilon, int(args["experiment"]))
    if args.get("csv"):
        lines = ["t,uniform,tv_max,tv_half_l1"]
        for row in rep.curve:
            lines.append(f"{row['t']},{row['uniform']!r},{row['tv_max']!r},"
                         f"{row['tv_half_l1']!r}")
        _atomic_write(_side_path(args, args["csv"]), "\n".join(lines) + "\n")
        payload["csv"] = args["csv"]
    violated = resid > config.TOL
    return (_envelope("markov", spec,
                      {"rep": args["rep"], "metric": metric, "epsilon": epsilon,
                       "tmax": t_max, "start": args.get("start")}, payload),
            1 if violated else 0)


def _pick_normal(G, C, selector: str):
    subs = normal_subgroups(G, C)
    s = selector.strip().lower()
    if s == "group":
        return subs[-1]
    if s == "center":
        zen = center(G)
        for N in subs:
            if N.members == zen.members:
                return N
        raise UsageError("center not found among normal subgroups")
    if s.startswith("order:"):
        want = int(s.split(":", 1)[1])
        hits = [N for N in subs if N.order == want]
        if len(hits) != 1:
            raise UsageError(
                f"{len(hits)} normal subgroups of order {want}; need exactly 1")
        return hits[0]
    if s.startswith("index:"):
        want = int(s.split(":", 1)[1])
        hits = [N for N in subs if N.index == want]
        if len(hits) != 1:
            raise UsageError(
                f"{len(hits)} normal subgroups of index {want}; need exactly 1")
        return hits[0]
    raise UsageError(f"unknown normal-subgroup selector {selector!r}")


def run_counterexample(args: dict) -> tuple[dict, int]:
    spec = parse_group_spec(args["group"])
    G, C, T = _load_table(spec)
    N = _pick_normal(G, C, args.get("normal", "group"))
    eps = args.get("epsilon")
    eps = Fraction(str(eps)) if eps is not None else None
    V, report = build_counterexample_rep(G, C, T, N, int(args.get("m", 3)),
                                         epsilon=eps)
    payload = {"rep": V.to_json_dict(), "normal_order": N.order,
               "construction": report}
    violated = not report["power_measure_at_most_half"]
    return (_envelope("counterexample", spec,
                      {"normal": args.get("normal", "group"),
                       "m": int(args.get("m", 3)),
                       "epsilon": None if eps is None else str(eps)}, payload),
            1 if violated else 0)


def _parse_tuples(text: str, rank: int) -> list[tuple]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coords = tuple(int(v) for v in chunk.split(","))
        if len(coords) != rank:
            raise UsageError(f"element {chunk!r} does not have rank {rank}")
        out.append(coords)
    if not out:
        raise UsageError("empty element set")
    return out


def run_sumset(args: dict) -> tuple[dict, int]:
    factors = None
    if args.get("factors"):
        factors = tuple(int(v) for v in str(args["factors"]).split(","))
    group = AbelianGroup(factors) if factors else None
    rank = len(factors) if factors else int(args.get("rank", 1))
    elems = _parse_tuples(args["set"], rank)
    m = int(args.get("m", 2))
    params = {"factors": list(factors) if factors else None, "rank": rank,
              "set": [list(e) for e in elems], "m": m}
    if args.get("cover"):
        n = int(args.get("n", 1))
        params["n"] = n
        tc = translate_cover(elems, n, m, group=group)
        payload = tc.to_json_dict()
    else:
        S = m_fold_sumset(group, elems, m)
        payload = {"sumset": sorted([list(t) for t in S]), "size": len(S)}
    return _envelope("sumset", None, params, payload), 0


_RUNNERS = {
    "group": run_group,
    "chartable": run_chartable,
    "check": run_check,
    "cover": run_cover,
    "markov": run_markov,
    "counterexample": run_counterexample,
    "sumset": run_sumset,
}


def run_suite(args: dict) -> tuple[dict, int]:
    with open(args["config"]) as fh:
        cfg = json.load(fh)
    outdir = args.get("outdir", ".")
    os.makedirs(outdir, exist_ok=True)
    summary = {"version": __version__, "config": args["config"],
               "experiments": []}
    worst = 0
    for exp in cfg.get("experiments", []):
        exp_id = exp["id"]
        command = exp["command"]
        entry = {"id": exp_id, "command": command}
        try:
            if command not in _RUNNERS or command == "suite":
                raise UsageError(f"unknown suite command {command!r}")
            exp_args = dict(exp.get("args", {}))
            exp_args["_filedir"] = outdir
            doc, code = _RUNNERS[command](exp_args)
            _emit(doc, os.path.join(outdir, f"{exp_id}.json"))
            entry["status"] = "ok" if code == 0 else "violation"
            entry["path"] = f"{exp_id}.json"
            worst = max(worst, code)
        except Exception as exc:  # member errors are recorded, suite continues
            entry["status"] = "error"
            entry["error"] = f"{type(exc).__name__}: {exc}"
        summary["experiments"].append(entry)
    return summary, worst


# ---------------------------------------------------------------------------
# Argument parsing


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tqr",
        description="Tensor quasi-randomness of finite groups: structure, "
                    "character tables, covering criteria, Markov mixing, "
                    "counterexample constructions.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group", help="construct a group and report structure")
    g.add_argument("--group", required=True)
    g.add_argument("--normal-subgroups", action="store_true",
                   dest="normal_subgroups")
    g.add_argument("--out")

    c = sub.add_parser("chartable", help="compute or import a character table")
    c.add_argument("--group")
    c.add_argument("--import", dest="import_path")
    c.add_argument("--export")
    c.add_argument("--out")

    k = sub.add_parser("check", help="evaluate TQR / QR criteria")
    k.add_argument("--group", required=True)
    k.add_argument("--criterion", default="all",
                   choices=["all", *_TQR_IDS, *_QR_IDS])
    k.add_argument("--k", type=int, default=4)
    k.add_argument("--density", type=float, default=0.1)
    k.add_argument("--power", type=int, default=3)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--trials", type=int, default=1000)
    k.add_argument("--exhaustive-cap", type=int, default=20,
                   dest="exhaustive_cap")
    k.add_argument("--out")

    v = sub.add_parser("cover", help="two/three-factor covering check")
    v.add_argument("--group", required=True)
    v.add_argument("--v1", required=True)
    v.add_argument("--v2", required=True)
    v.add_argument("--v3")
    v.add_argument("--profile", action="store_true")
    v.add_argument("--out")

    m = sub.add_parser("markov", help="tensor-product Markov chain analysis")
    m.add_argument("--group", required=True)
    m.add_argument("--rep", required=True)
    m.add_argument("--metric", default="tv",
                   choices=["tv", "uniform", "tv_half_l1"])
    m.add_argument("--epsilon", type=float, default=0.25)
    m.add_argument("--tmax", type=int, default=64)
    m.add_argument("--start")
    m.add_argument("--experiment", type=int,
                   help="also run the constant-time mixing experiment with this m")
    m.add_argument("--csv")
    m.add_argument("--out")

    x = sub.add_parser("counterexample",
                       help="build the induced small-tensor-power rep")
    x.add_argument("--group", required=True)
    x.add_argument("--normal", default="group")
    x.add_argument("--m", type=int, default=3)
    x.add_argument("--epsilon")
    x.add_argument("--out")

    s = sub.add_parser("sumset", help="abelian sumsets and translate covers")
    s.add_argument("--factors", help="comma-separated cyclic factors; omit for lattice")
    s.add_argument("--rank", type=int, default=1)
    s.add_argument("--set", required=True)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--cover", action="store_true")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--out")

    u = sub.add_parser("suite", help="run a batch of experiments from JSON config")
    u.add_argument("--config", required=True)
    u.add_argument("--outdir", default=".")
    u.add_argument("--out")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    args = vars(ns)
    command = args.pop("command")
    out = args.pop("out", None)
    try:
        if command == "suite":
            doc, code = run_suite(args)
            _emit(doc, out or os.path.join(args.get("outdir", "."), "summary.json"))
        else:
            doc, code = _RUNNERS[command](args)
            _emit(doc, out)
        return code
    except (UsageError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GroupError, CharTableError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
