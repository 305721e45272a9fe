"""Command line entry point: ``scheme-forge <group> <action> [options]``.

Exit status is 0 on success, 1 when a check or membership test fails and 2
on usage errors (bad flags, points outside the domain, malformed files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from ..capture import bracket_projection, captured_scan, pi_n, square_bracket
from ..derived import (
    Poset,
    aronszajn_classify,
    aronszajn_node,
    bounded_color_c,
    coherent_tree_eval,
    color_o,
    color_o_star,
    countryman_cmp,
    entangled_eval,
    gap_pair_data,
    hausdorff_gap,
    jones_separator,
    luzin_family,
    luzin_representation,
    osc,
    s_space_sets,
)
from ..errors import SchemeError
from ..extension import (
    canonical_json,
    extend_scheme,
    replay_chain,
    request_from_json,
)
from ..metric import ball, delta, rho, table_csv
from ..ordinals import format_ordinal, ordinal_to_json, parse_ordinal
from ..scheme import export_fragment, import_fragment, level_iter, omega_scheme
from ..typespec import PartitionSpec, is_good, partition_compatible
from .checks import RunContext, check_names, default_bound, extension_schedule, run_extension, run_suite
from .config import RunConfig, cache_file, load_config, resolve_type

__all__ = ["main", "cli_run", "build_parser"]

# Level sizes above this are not listed by ``type show``.
SHOW_SIZE_LIMIT = 4096


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output


def _csv_cell(v: Any) -> Any:
    return json.dumps(v) if isinstance(v, (list, dict)) else v


def render(data: Any, fmt: str) -> str:
    if fmt == "csv":
        if isinstance(data, list) and data and all(isinstance(r, dict) for r in data):
            return table_csv([{k: _csv_cell(v) for k, v in r.items()} for r in data]).rstrip("\n")
        if isinstance(data, dict):
            return table_csv([{k: _csv_cell(v) for k, v in data.items()}]).rstrip("\n")
        return str(data)
    if isinstance(data, (int, str)) and not isinstance(data, bool):
        return str(data)
    return json.dumps(data, indent=2, sort_keys=False)


def emit(data: Any, cfg: RunConfig) -> None:
    text = render(data, cfg.format)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------- argument helpers


def ordinal_arg(text: str):
    try:
        return parse_ordinal(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--type", dest="type", help="preset name (tau2, tau4, tauE, tauS) or JSON type file")
    p.add_argument("--bound", type=int, help="work below this point")
    p.add_argument("--fuel", type=int, help="maximum number of appended conditions")
    p.add_argument("--seed", type=int, help="seed for sampled checks")
    p.add_argument("--format", choices=["json", "csv"], help="output format")
    p.add_argument("--out", help="write output to this file")
    p.add_argument("--config", help="JSON config file with the same keys")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scheme-forge", description="Explore construction schemes over finite windows.")
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(sub, name: str, fn: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        _common(p)
        p.set_defaults(fn=fn)
        return p

    g = groups.add_parser("type", help="type descriptions").add_subparsers(dest="action", required=True)
    p = leaf(g, "validate", cmd_type_validate, "decide goodness and partition compatibility")
    p.add_argument("--partition", choices=["single", "parity"], default="parity")
    p = leaf(g, "show", cmd_type_show, "list the first levels")
    p.add_argument("--depth", type=int, default=8)

    g = groups.add_parser("scheme", help="members of the scheme").add_subparsers(dest="action", required=True)
    p = leaf(g, "member", cmd_scheme_member, "test whether a set is a member")
    p.add_argument("points", nargs="+", type=ordinal_arg)
    p = leaf(g, "levels", cmd_scheme_levels, "list level-k members below the bound")
    p.add_argument("--level", type=int, required=True)
    leaf(g, "export", cmd_scheme_export, "dump all members below the bound")
    p = leaf(g, "import", cmd_scheme_import, "load a fragment and check it answers like the original")
    p.add_argument("file")

    g = groups.add_parser("metric", help="the ordinal metric").add_subparsers(dest="action", required=True)
    for name, fn in (("rho", cmd_metric_rho), ("delta", cmd_metric_delta)):
        p = leaf(g, name, fn, f"{name} of two points")
        p.add_argument("alpha", type=ordinal_arg)
        p.add_argument("beta", type=ordinal_arg)
    p = leaf(g, "ball", cmd_metric_ball, "k-closure of a point")
    p.add_argument("alpha", type=ordinal_arg)
    p.add_argument("k", type=int)

    g = groups.add_parser("capture", help="captured families").add_subparsers(dest="action", required=True)
    p = leaf(g, "scan", cmd_capture_scan, "captured n-subsets of a set")
    p.add_argument("points", nargs="+", type=ordinal_arg)
    p.add_argument("-n", type=int, default=2)
    p = leaf(g, "pi", cmd_capture_pi, "levels where n-subsets are captured")
    p.add_argument("points", nargs="+", type=ordinal_arg)
    p.add_argument("-n", type=int, default=2)
    p = leaf(g, "bracket", cmd_capture_bracket, "square bracket of a pair, or projection of a set")
    p.add_argument("points", nargs="+", type=ordinal_arg)

    g = groups.add_parser("extend", help="extend the omega scheme by one block").add_subparsers(dest="action", required=True)
    p = leaf(g, "run", cmd_extend_run, "serve requests and write the chain log")
    p.add_argument("--requests", help="JSON file with a list of requests (default: built-in schedule)")
    p.add_argument("--count", type=int, default=300, help="length of the built-in containment schedule")
    p = leaf(g, "replay", cmd_extend_replay, "rebuild a chain from its log and export the fragment")
    p.add_argument("log")

    g = groups.add_parser("derive", help="derived structures").add_subparsers(dest="action", required=True)
    p = leaf(g, "gap", cmd_derive_gap, "left and right gap sets of a point, or pair data of two")
    p.add_argument("points", nargs="+", type=ordinal_arg)
    p.add_argument("-K", type=int, default=4)
    p.add_argument("--partial", action="store_true", help="accept pair data from a short window")
    p = leaf(g, "luzin", cmd_derive_luzin, "column of a point, with --separator its separator")
    p.add_argument("alpha", type=ordinal_arg)
    p.add_argument("-K", type=int, default=4)
    p.add_argument("--separator", action="store_true")
    p = leaf(g, "rep", cmd_derive_rep, "levelled pieces for a finite order embedded by the given points")
    p.add_argument("points", nargs="+", type=ordinal_arg)
    p.add_argument("--less", action="append", default=[], metavar="A<B", help="order relation between listed points")
    p.add_argument("-K", type=int, default=3)
    p = leaf(g, "countryman", cmd_derive_countryman, "compare two points")
    p.add_argument("alpha", type=ordinal_arg)
    p.add_argument("beta", type=ordinal_arg)
    p = leaf(g, "tree", cmd_derive_tree, "class of a patched distance function")
    p.add_argument("beta", type=ordinal_arg)
    p.add_argument("--patch", action="append", default=[], metavar="X=V")
    p = leaf(g, "osc", cmd_derive_osc, "oscillation set of two points")
    p.add_argument("alpha", type=ordinal_arg)
    p.add_argument("beta", type=ordinal_arg)
    p.add_argument("-k", type=int, default=0)
    p = leaf(g, "color", cmd_derive_color, "colorings of a pair, or a table of all pairs below the bound")
    p.add_argument("points", nargs="*", type=ordinal_arg)
    p = leaf(g, "entangled", cmd_derive_entangled, "entangled function of a point")
    p.add_argument("alpha", type=ordinal_arg)
    p.add_argument("k", type=int)
    p = leaf(g, "suslin-fn", cmd_derive_suslin, "coherent Suslin function of beta at xi")
    p.add_argument("beta", type=ordinal_arg)
    p.add_argument("xi", type=ordinal_arg)
    p = leaf(g, "sspace", cmd_derive_sspace, "the sets H, C and C_k of a point")
    p.add_argument("beta", type=ordinal_arg)
    p.add_argument("-k", type=int, default=0)

    p = groups.add_parser("verify", help="run the invariant checks")
    _common(p)
    p.add_argument("--checks", nargs="*", help=f"subset of: {', '.join(check_names())}")
    p.set_defaults(fn=cmd_verify)
    return parser


# ---------------------------------------------------------------- commands


def _handle(cfg: RunConfig):
    t = resolve_type(cfg.type)
    return t, omega_scheme(t)


def _bound(cfg: RunConfig, t) -> int:
    return cfg.bound if cfg.bound is not None else default_bound(t)


def cmd_type_validate(args, cfg: RunConfig) -> int:
    t = resolve_type(cfg.type)
    part = PartitionSpec.parity() if args.partition == "parity" else PartitionSpec.single()
    good = is_good(t)
    comp = partition_compatible(t, part)
    emit(
        {
            "type": t.name or "custom",
            "good": good.status,
            "certificate": good.certificate,
            "roots_seen": list(good.r_seen),
            "partition": args.partition,
            "compatible": comp.status,
            "compatibility_certificate": comp.certificate,
        },
        cfg,
    )
    return 1 if good.status == "NotGood" or comp.status == "Incompatible" else 0


def cmd_type_show(args, cfg: RunConfig) -> int:
    t = resolve_type(cfg.type)
    rows = []
    for k in range(args.depth):
        if not t.has_level(k + 1) or t.m(k) > SHOW_SIZE_LIMIT:
            break
        rows.append({"k": k, "m": t.m(k), "n_next": t.n(k + 1), "r_next": t.r(k + 1)})
    emit(rows if cfg.format == "csv" else {"type": t.to_json(), "levels": rows}, cfg)
    return 0


def cmd_scheme_member(args, cfg: RunConfig) -> int:
    t, h = _handle(cfg)
    ok = h.is_member(args.points)
    emit({"set": [ordinal_to_json(x) for x in args.points], "member": ok, "level": h.member_level(args.points)}, cfg)
    return 0 if ok else 1


def cmd_scheme_levels(args, cfg: RunConfig) -> int:
    t, h = _handle(cfg)
    bound = _bound(cfg, t)
    members = [list(F) for F in level_iter(h, args.level, bound)]
    if cfg.format == "csv":
        emit([{"level": args.level, "set": " ".join(map(str, F))} for F in members], cfg)
    else:
        emit({"level": args.level, "bound": bound, "members": members}, cfg)
    return 0


def cmd_scheme_export(args, cfg: RunConfig) -> int:
    t, h = _handle(cfg)
    bound = _bound(cfg, t)
    cached = cache_file("fragment", t, bound)
    if cached is not None and cached.exists():
        data = json.loads(cached.read_text())
    else:
        # canonical key order, so cached and fresh exports print identically
        data = json.loads(canonical_json(export_fragment(h, bound)))
        if cached is not None:
            cached.write_text(canonical_json(data))
    emit(data, cfg)
    return 0


def cmd_scheme_import(args, cfg: RunConfig) -> int:
    try:
        data = json.loads(Path(args.file).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read fragment: {exc}") from exc
    frag = import_fragment(data)
    ref = omega_scheme(frag.t)
    mismatches = []
    for k, sets in frag.levels.items():
        for F in sets:
            for x in F:
                if isinstance(x, int) and frag.closure(x, k) != ref.closure(x, k):
                    mismatches.append({"point": x, "level": k})
    emit(
        {
            "levels": {str(k): len(v) for k, v in sorted(frag.levels.items())},
            "points": len(frag.window(1 << 30)),
            "mismatches": mismatches[:20],
        },
        cfg,
    )
    return 1 if mismatches else 0


def cmd_metric_rho(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    emit(rho(h, args.alpha, args.beta), cfg)
    return 0


def cmd_metric_delta(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    d = delta(h, args.alpha, args.beta)
    emit("inf" if d == float("inf") else int(d), cfg)
    return 0


def cmd_metric_ball(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    emit(ball(h, args.alpha, args.k).to_json(), cfg)
    return 0


def cmd_capture_scan(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    emit([rec.to_json() for rec in captured_scan(h, args.points, args.n)], cfg)
    return 0


def cmd_capture_pi(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    emit(sorted(pi_n(h, args.points, args.n)), cfg)
    return 0


def cmd_capture_bracket(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    if len(args.points) == 2:
        emit(ordinal_to_json(square_bracket(h, *args.points)), cfg)
    else:
        emit(sorted(ordinal_to_json(x) for x in bracket_projection(h, args.points)), cfg)
    return 0


def cmd_extend_run(args, cfg: RunConfig) -> int:
    t = resolve_type(cfg.type)
    if args.requests:
        try:
            raw = json.loads(Path(args.requests).read_text())
            requests = [request_from_json(d) for d in raw]
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read requests: {exc}") from exc
    else:
        requests = extension_schedule(args.count)
    ctx = RunContext(t, cfg.bound, cfg.fuel, cfg.seed)
    ext, served = run_extension(ctx, requests)
    log = ext.chain_log()
    cached = cache_file("chain", t, canonical_json([r.to_json() for r in requests]))
    if cached is not None:
        cached.write_text(canonical_json(log))
    if cfg.out:
        Path(cfg.out).write_text(canonical_json(log) + "\n")
    summary = {
        "requests": len(served),
        "served": sum(tip is not None for _, tip in served),
        "conditions": len(ext.chain),
        "tip_size": len(ext.tip),
        "fuel_spent": ext.spent,
    }
    print(render(summary, cfg.format))
    return 0


def cmd_extend_replay(args, cfg: RunConfig) -> int:
    try:
        log = json.loads(Path(args.log).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read chain log: {exc}") from exc
    ext = replay_chain(log)
    if not ext.tip:
        emit({"levels": {}}, cfg)
        return 0
    from ..ordinals import add

    data = export_fragment(ext, add(ext.tip[-1], 1), ext.fragment_members())
    text = canonical_json(data)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_derive_gap(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    if len(args.points) == 1:
        emit(hausdorff_gap(h, args.points[0], args.K).to_json(), cfg)
    elif len(args.points) == 2:
        emit(gap_pair_data(h, *args.points, args.K, allow_partial=args.partial).to_json(), cfg)
    else:
        raise UsageError("gap takes one point or a pair")
    return 0


def cmd_derive_luzin(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    if args.separator:
        emit([list(p) for p in sorted(jones_separator(h, args.alpha, args.K))], cfg)
    else:
        emit(luzin_family(h, args.alpha, args.K).to_json(), cfg)
    return 0


def cmd_derive_rep(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    names = {format_ordinal(x): x for x in args.points}
    less = []
    for rel in args.less:
        a, sep, b = rel.partition("<")
        if not sep or a.strip() not in names or b.strip() not in names:
            raise UsageError(f"bad relation {rel!r}; use A<B with listed points")
        less.append((a.strip(), b.strip()))
    poset = Poset.build(list(names), less)
    rep = luzin_representation(h, poset, names, args.K)
    emit({x: {str(k): [list(p) for p in sorted(v)] for k, v in levels.items()} for x, levels in rep.items()}, cfg)
    return 0


def cmd_derive_countryman(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    emit(countryman_cmp(h, args.alpha, args.beta).to_json(), cfg)
    return 0


def cmd_derive_tree(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    patch = {}
    for item in args.patch:
        x, sep, v = item.partition("=")
        if not sep:
            raise UsageError(f"bad patch {item!r}; use X=V")
        try:
            patch[parse_ordinal(x)] = int(v)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    node = aronszajn_node(h, args.beta, patch)
    k, s = aronszajn_classify(node)
    emit({**node.to_json(), "class": [k, s]}, cfg)
    return 0


def cmd_derive_osc(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    emit(osc(h, args.alpha, args.beta, args.k).to_json(), cfg)
    return 0


def _color_row(h, a, b) -> dict[str, Any]:
    c = bounded_color_c(h, a, b)
    return {
        "alpha": format_ordinal(a),
        "beta": format_ordinal(b),
        "o": color_o(h, a, b),
        "o_star": color_o_star(h, a, b),
        "c": c.code,
    }


def cmd_derive_color(args, cfg: RunConfig) -> int:
    t, h = _handle(cfg)
    if len(args.points) == 2:
        a, b = sorted(args.points)
        emit({**_color_row(h, a, b), "c_triple": bounded_color_c(h, a, b).to_json()}, cfg)
    elif not args.points:
        bound = _bound(cfg, t)
        emit([_color_row(h, a, b) for b in range(bound) for a in range(b)], cfg)
    else:
        raise UsageError("color takes a pair of points or none")
    return 0


def cmd_derive_entangled(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    emit(entangled_eval(h, args.alpha, args.k), cfg)
    return 0


def cmd_derive_suslin(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    emit(coherent_tree_eval(h, args.beta, args.xi), cfg)
    return 0


def cmd_derive_sspace(args, cfg: RunConfig) -> int:
    _, h = _handle(cfg)
    emit(s_space_sets(h, args.beta, args.k).to_json(), cfg)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    t = resolve_type(cfg.type)
    names = None if not args.checks else args.checks
    reports = run_suite(names, t, cfg.bound, cfg.fuel, cfg.seed)
    for r in reports:
        print(r.line())
    if cfg.out:
        Path(cfg.out).write_text(json.dumps([r.to_json() for r in reports], indent=2) + "\n")
    failed = [r.name for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return 1 if failed else 0


# ---------------------------------------------------------------- entry points


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    return cfg.merged({k: getattr(args, k, None) for k in ("type", "bound", "fuel", "seed", "format", "out")})


def cli_run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        return args.fn(args, cfg)
    except (UsageError, SchemeError, ValueError) as exc:
        print(f"scheme-forge: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_run())


if __name__ == "__main__":
    main()
