r"""
Command line front end.

Every subcommand prints a ``key: value`` report on stdout. Exit status is 0 on
success, 2 when the input is invalid and 3 when an enumeration budget is
exceeded. Reports are byte-identical for identical inputs and seeds; wall
clock times are only printed with ``--timing`` (and always by ``bench``).
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from .crossings import count_self_crossings, crossing_decomposition
from .minpert import minimize_with_stats
from .oracle import BudgetExceeded, OracleBudget, brute_min_perturbation
from .surface_map import parse_cmap
from .walks import format_pert, format_walks, parse_pert, parse_walks


def _read(path):
    return Path(path).read_text()


def _load(args, need_walks=True):
    M = parse_cmap(_read(args.map))
    walks = parse_walks(_read(args.walks), M) if need_walks else []
    return M, walks


def _decomposition(M, walks, P, out):
    per_walk, pairwise = crossing_decomposition(M, walks, P)
    out.append(("walk_crossings", " ".join(map(str, per_walk))))
    out.append(("pairwise", " ".join(f"{a}-{b}:{c}" for (a, b), c in sorted(pairwise.items())) or "-"))


def _write_pert(args, P):
    if getattr(args, "out_pert", None):
        Path(args.out_pert).write_text(format_pert(P))


def cmd_count(args):
    M, walks = _load(args)
    P = parse_pert(_read(args.pert))
    out = [("crossings", count_self_crossings(M, walks, P))]
    _decomposition(M, walks, P, out)
    return out


def cmd_minimize(args):
    M, walks = _load(args)
    P, stats = minimize_with_stats(M, walks, trace=args.trace_splits)
    out = [("crossings", count_self_crossings(M, walks, P))]
    _decomposition(M, walks, P, out)
    out += [("pebbles", stats.input_pebbles), ("arrangement_pebbles", stats.pebbles),
            ("splits", stats.splits), ("split_cost", stats.cost)]
    if args.trace_splits:
        for r in stats.records:
            out.append(("split", f"subarc={r.subarc} disk={r.disk} N={r.N} Nj={r.Nj} groups={r.groups}"))
    _write_pert(args, P)
    return out


def _parse_classes(text):
    classes = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            a, b = (int(x) for x in part.split(","))
        except ValueError:
            raise ValueError(f"bad class {part!r}; expected 'p,q'") from None
        classes.append((a, b))
    return classes


def cmd_torus(args):
    from .torus import minimize_classes, minimize_on_torus, torus_formula

    if args.classes is not None:
        classes = _parse_classes(args.classes)
        res = minimize_classes(classes)
        out = [("crossings", res.count), ("formula", torus_formula(classes))]
    else:
        M, walks = _load(args)
        res = minimize_on_torus(M, walks, rng=random.Random(args.seed))
        out = [("crossings", res.count)]
        out.append(("walks", format_walks(M, res.walks).strip().replace("\n", " | ")))
        _write_pert(args, res.perturbation)
    out.append(("classes", " ".join(f"({a},{b})" for a, b in res.classes)))
    out.append(("contractible", " ".join(map(str, res.contractible)) or "-"))
    return out


def cmd_boundary(args):
    from .boundary import minimize_with_boundary

    M, walks = _load(args)
    res = minimize_with_boundary(M, walks, rng=random.Random(args.seed))
    out = [("crossings", res.count)]
    out.append(("removed_edges", " ".join(map(str, res.state.removed)) or "-"))
    out.append(("walks", format_walks(M, res.walks).strip().replace("\n", " | ")))
    _write_pert(args, res.perturbation)
    return out


def cmd_reduced(args):
    from .reducing import first_violation, intersection_number_reduced, validate_reducing

    M, walks = _load(args)
    T = validate_reducing(M)
    out = [("triangulation", "ok"), ("genus", M.genus)]
    bad = [(i, first_violation(T, w)) for i, w in enumerate(walks)]
    out.append(("reduced", " ".join("yes" if v is None and w else "no" for (i, v), w in zip(bad, walks)) or "-"))
    if args.check_only:
        return out
    count, P = intersection_number_reduced(T, walks)
    out.insert(0, ("crossings", count))
    _write_pert(args, P)
    return out


def cmd_oracle(args):
    M, walks = _load(args)
    count, P = brute_min_perturbation(M, walks, OracleBudget(max_total_orderings=args.budget))
    _write_pert(args, P)
    return [("crossings", count)]


def cmd_bench(args):
    from .torus import canonical_loops, quasi_geodesic, random_classes

    rng = random.Random(args.seed)
    L = canonical_loops()
    out = []
    for n in args.sizes:
        classes = random_classes(rng, n)
        walks = [quasi_geodesic(k) for k in classes]
        t = time.perf_counter()
        P, stats = minimize_with_stats(L, walks)
        dt = time.perf_counter() - t
        out.append((f"n={n}", f"pebbles={stats.input_pebbles} arrangement_pebbles={stats.pebbles} "
                              f"split_cost={stats.cost} seconds={dt:.3f}"))
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="minpos", description="Curves on surfaces in minimal position.")
    p.add_argument("--timing", action="store_true", help="append wall clock time to the report")
    sub = p.add_subparsers(dest="command", required=True)

    def io(sp, pert_out=True):
        sp.add_argument("--map", required=True, help=".cmap file")
        sp.add_argument("--walks", required=True, help=".walks file")
        if pert_out:
            sp.add_argument("--out-pert", help="write the perturbation to this .pert file")

    sp = sub.add_parser("count", help="crossings of a given perturbation")
    io(sp, False)
    sp.add_argument("--pert", required=True, help=".pert file")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("minimize", help="minimal perturbation of the walks")
    io(sp)
    sp.add_argument("--trace-splits", action="store_true", help="list every split")
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("torus", help="minimal position on the torus")
    sp.add_argument("--classes", help='classes "p,q;r,s;..." on the canonical loops')
    sp.add_argument("--map")
    sp.add_argument("--walks")
    sp.add_argument("--out-pert")
    sp.add_argument("--seed", type=int, default=0, help="spanning tree seed (default 0)")
    sp.set_defaults(func=cmd_torus)

    sp = sub.add_parser("boundary", help="minimal position on a surface with boundary")
    io(sp)
    sp.add_argument("--seed", type=int, default=0, help="tree-cotree seed (default 0)")
    sp.set_defaults(func=cmd_boundary)

    sp = sub.add_parser("reduced", help="reduced walks on a reducing triangulation")
    io(sp)
    sp.add_argument("--check-only", action="store_true", help="only run the validators")
    sp.set_defaults(func=cmd_reduced)

    sp = sub.add_parser("oracle", help="brute-force minimum over all perturbations")
    io(sp)
    sp.add_argument("--budget", type=int, default=2_000_000, help="maximum number of perturbations")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("bench", help="time minimal perturbations of random torus walks")
    sp.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000])
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "torus" and args.classes is None and not (args.map and args.walks):
        parser.error("torus needs --classes or both --map and --walks")
    t = time.perf_counter()
    try:
        out = args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        out.append(("seconds", f"{time.perf_counter() - t:.3f}"))
    for k, v in out:
        print(f"{k}: {v}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
