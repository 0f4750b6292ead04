"""Command-line surface: growth-rate estimation, wandering classification,
verification suites, catalog listing, and description export.

Exit codes form the CI contract: 0 success, 2 invalid configuration,
3 exactness-budget refusal, 4 classification finished with unknown verdicts.
Every output document embeds the tool version, the effective configuration,
and the seed, and files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys as _sys
import tempfile
from fractions import Fraction

from . import __version__, descriptions, gallery
from .core import closure_in_sample, restrict
from .counting import ExactnessBudgetError
from .entropy import (
    CountingConfig,
    ScheduleError,
    estimate_entropy,
    ssep,
    verify_clopen_supremum,
    verify_sandwiches,
)
from .randomized import random_systems, random_window_draws
from .wandering import SweepPolicy, partition_omega, verify_omega_properties

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_UNKNOWN = 4


def _parse_eps(values):
    out = []
    for v in values:
        try:
            out.append(Fraction(v))
        except ValueError:
            out.append(float(v))
    return out


def _load_system(args):
    """(gallery_entry_or_None, system) from --system gallery:ID or a path."""
    spec = args.system
    if spec is None:
        raise ValueError("--system is required")
    if spec.startswith("gallery:"):
        gid = spec.split(":", 1)[1]
        overrides = {}
        if args.depth is not None:
            overrides["depth"] = args.depth
        entry = gallery.build(gid, **overrides)
        return entry, entry.system
    return descriptions.load_path(spec)


def _schedule_from(args, entry):
    if args.eps:
        eps_list = _parse_eps(args.eps)
        n_lo = args.n_min if args.n_min else 2
        n_hi = args.n_max if args.n_max else max(n_lo + 2, 5)
        return [(n, e) for e in eps_list for n in range(n_lo, n_hi + 1)]
    if entry is not None and entry.default_schedule:
        return list(entry.default_schedule)
    raise ValueError("no schedule: pass --eps (and --n-min/--n-max)")


def _payload(args, body):
    return {
        "tool_version": __version__,
        "seed": args.seed,
        "config": {
            k: v
            for k, v in vars(args).items()
            if k not in ("func",) and not k.startswith("_")
        },
        **body,
    }


def _emit(args, doc, table_rows=None):
    text_doc = json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
    if args.out:
        _write_atomic(args.out, text_doc)
        if table_rows is not None and args.format == "table":
            base, _ = os.path.splitext(args.out)
            _write_table(base + ".csv", table_rows)
        print("wrote %s" % args.out)
    else:
        _sys.stdout.write(text_doc)


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_table(path, rows):
    if not rows:
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(fd, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    os.replace(tmp, path)


def cmd_list(args):
    for gid in gallery.ids():
        entry = gallery.build_for_classification(gid)
        print(
            "%-26s %-10s %5d points  %s"
            % (gid, entry.system.kind, entry.system.size(), entry.notes[:60])
        )
    return EXIT_OK


def cmd_export(args):
    entry, sysm = _load_system(args)
    if entry is not None:
        doc = descriptions.describe_gallery(entry)
    else:
        doc = descriptions.describe_table(sysm)
    _emit(args, doc)
    return EXIT_OK


def cmd_estimate(args):
    entry, sysm = _load_system(args)
    schedule = _schedule_from(args, entry)
    cfg = CountingConfig(exact_budget=args.exact_budget)
    K = entry.compact_set() if entry is not None else frozenset(sysm.sample)
    report = estimate_entropy(sysm, K, schedule, cfg)
    doc = _payload(args, {"report": report.to_dict()})
    _emit(args, doc, table_rows=report.table_rows())
    return EXIT_OK


def cmd_classify(args):
    entry, sysm = _load_system(args)
    if entry is not None and args.system.startswith("gallery:") and args.depth is None:
        entry = gallery.build_for_classification(entry.id)
        sysm = entry.system
    policy = SweepPolicy(
        radii=tuple(_parse_eps(args.radii or ())),
        n_cap=args.horizon_n,
        k_cap=args.horizon_k,
    )
    part = partition_omega(sysm, policy)
    rows = []
    for p in sysm.sample:
        v = part.verdicts[p]
        status = (
            "nonwandering"
            if v.is_nonwandering()
            else "wandering"
            if v.is_wandering()
            else "unknown"
        )
        row = {"point": repr(p), "status": status}
        if v.is_nonwandering():
            row["rule"] = v.status.rule
            w = v.status.witness
            if w is not None:
                row["witness"] = {
                    "U": w.u_label,
                    "n": w.n,
                    "k": w.k,
                    "z": repr(w.z),
                }
        elif v.is_wandering():
            row["rule"] = v.status.rule
            c = v.status.certificate
            row["certificate"] = {
                "U": c.u_label,
                "closure": c.rule,
                "n_bound": c.n_bound,
                "k_bound": c.k_bound,
            }
        else:
            row["bounds"] = {"n_max": v.status.n_max, "k_max": v.status.k_max}
        rows.append(row)
    counts = part.counts()
    doc = _payload(
        args,
        {
            "system": sysm.space_id,
            "counts": {
                "nonwandering": counts[0],
                "wandering": counts[1],
                "unknown": counts[2],
            },
            "verdicts": rows,
        },
    )
    _emit(args, doc)
    if counts[2]:
        print(
            "classification finished with %d unknown verdicts" % counts[2],
            file=_sys.stderr,
        )
        return EXIT_UNKNOWN
    return EXIT_OK


def _suite_sandwich(args):
    import random

    rng = random.Random(args.seed)
    systems = random_systems(args.seed, args.random_systems, max_points=12)
    rows = []
    ok = True
    for sysm, _inj in systems:
        draws = random_window_draws(rng, sysm, args.draws)
        got_ok, got_rows = verify_sandwiches(sysm, frozenset(sysm.sample), draws)
        ok = ok and got_ok
        rows.append(
            {
                "system": sysm.space_id,
                "ok": got_ok,
                "cells": len(got_rows),
                "partial": sum(1 for r in got_rows if r.partial),
            }
        )
    return ok, rows


def _suite_lemma27(args):
    from .core import image_set, preimage_of_image

    systems = random_systems(args.seed, args.random_systems, max_points=8)
    rows = []
    ok = True
    for sysm, injective in systems:
        sample = list(sysm.sample)
        dom = frozenset(p for p in sample if sysm.in_domain(p))
        violations = 0
        import itertools

        universe = [
            frozenset(c)
            for r in range(len(sample) + 1)
            for c in itertools.combinations(sample, r)
        ]
        for U in universe:
            for k in range(-5, 6):
                P = preimage_of_image(sysm, U, k)
                if k <= 0 and P != (U & image_set(sysm, frozenset(sample), -k)):
                    violations += 1
                if k >= 1 and not P <= frozenset(
                    p for p in sample if sysm.iterate_index(sysm.index[p], k) >= 0
                ):
                    violations += 1
                if not P <= (dom | U):
                    violations += 1
                if injective and k >= 0:
                    dom_k = frozenset(
                        p
                        for p in sample
                        if sysm.iterate_index(sysm.index[p], k) >= 0
                    )
                    if P != (U & dom_k):
                        violations += 1
                if injective and not P <= U:
                    violations += 1
        rows.append({"system": sysm.space_id, "violations": violations})
        ok = ok and violations == 0
    return ok, rows


def _entropy_of(entry, sysm, K, schedule, cfg):
    return estimate_entropy(sysm, K, schedule, cfg).h_estimate


def _suite_max_decomposition(args):
    entry, sysm = _load_system(args)
    classify_entry = (
        gallery.build_for_classification(entry.id) if entry is not None else None
    )
    part = partition_omega(classify_entry.system if classify_entry else sysm)
    if part.unknown:
        raise ScheduleError("partition has unknown verdicts; refusing")
    omega = frozenset(p for p in part.omega if p in sysm.index)
    wcl = closure_in_sample(sysm, frozenset(p for p in part.wandering if p in sysm.index))
    schedule = _schedule_from(args, entry)
    cfg = CountingConfig(exact_budget=args.exact_budget)
    K = entry.compact_set() if entry else frozenset(sysm.sample)
    h_full = _entropy_of(entry, sysm, K, schedule, cfg)
    h_omega = _entropy_of(entry, restrict(sysm, omega), omega, schedule, cfg)
    h_wcl = _entropy_of(entry, restrict(sysm, wcl), wcl & K or wcl, schedule, cfg)
    diff = abs(h_full - max(h_omega, h_wcl))
    ok = diff <= args.tolerance
    return ok, [
        {
            "system": sysm.space_id,
            "h_full": h_full,
            "h_omega": h_omega,
            "h_wandering_closure": h_wcl,
            "difference": diff,
            "tolerance": args.tolerance,
        }
    ]


def _suite_concentration(args):
    entry, sysm = _load_system(args)
    classify_entry = (
        gallery.build_for_classification(entry.id) if entry is not None else None
    )
    part = partition_omega(classify_entry.system if classify_entry else sysm)
    if part.unknown:
        raise ScheduleError("partition has unknown verdicts; refusing")
    omega = frozenset(p for p in part.omega if p in sysm.index)
    schedule = _schedule_from(args, entry)
    cfg = CountingConfig(exact_budget=args.exact_budget)
    K = entry.compact_set() if entry else frozenset(sysm.sample)
    h_full = _entropy_of(entry, sysm, K, schedule, cfg)
    h_omega = _entropy_of(entry, restrict(sysm, omega), omega, schedule, cfg)
    diff = abs(h_full - h_omega)
    ok = diff <= args.tolerance
    return ok, [
        {
            "system": sysm.space_id,
            "compact_space": sysm.compact_space,
            "dom_clopen": sysm.dom_clopen,
            "h_full": h_full,
            "h_omega": h_omega,
            "difference": diff,
            "tolerance": args.tolerance,
        }
    ]


def _suite_invariance(args):
    entry, sysm = _load_system(args)
    if entry is not None and args.system.startswith("gallery:"):
        entry = gallery.build_for_classification(entry.id)
        sysm = entry.system
    part = partition_omega(sysm)
    rep = verify_omega_properties(sysm, part.omega, part.wandering)
    return rep.ok(), rep.rows


def _suite_clopen(args):
    entry, sysm = _load_system(args)
    n = args.n_min or 2
    eps = _parse_eps(args.eps or ["1/4"])[0]
    ok = verify_clopen_supremum(sysm, frozenset(sysm.sample), n, eps)
    return ok, [{"system": sysm.space_id, "n": n, "eps": str(eps), "ok": ok}]


SUITES = {
    "sandwich": _suite_sandwich,
    "lemma27": _suite_lemma27,
    "max-decomposition": _suite_max_decomposition,
    "concentration": _suite_concentration,
    "invariance": _suite_invariance,
    "clopen-supremum": _suite_clopen,
}


def cmd_verify(args):
    suite = SUITES.get(args.suite)
    if suite is None:
        raise ValueError(
            "unknown suite %r (choose from %s)" % (args.suite, ", ".join(SUITES))
        )
    ok, rows = suite(args)
    doc = _payload(args, {"suite": args.suite, "ok": ok, "rows": rows})
    _emit(args, doc)
    return EXIT_OK if ok else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="drsys",
        description="partial dynamical systems: growth rates, wandering "
        "classification, and verification suites",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--system", help="gallery:ID or a description file path")
        p.add_argument("--depth", type=int, help="resolution override for gallery builds")
        p.add_argument("--n-min", type=int)
        p.add_argument("--n-max", type=int)
        p.add_argument("--eps", action="append", help="radius (repeatable, exact rationals)")
        p.add_argument("--radii", action="append", help="classification ball radii")
        p.add_argument("--horizon-n", type=int, default=2000)
        p.add_argument("--horizon-k", type=int, default=2000)
        p.add_argument("--exact-budget", type=int, default=40)
        p.add_argument("--out")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=["report", "table"], default="report")

    p = sub.add_parser("list", help="list the gallery")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("estimate", help="growth-rate report over a schedule")
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("classify", help="wandering/nonwandering partition")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    common(p)
    p.add_argument("--random-systems", type=int, default=50)
    p.add_argument("--draws", type=int, default=20)
    p.add_argument("--tolerance", type=float, default=0.05)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="write a system-description document")
    common(p)
    p.set_defaults(func=cmd_export)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ExactnessBudgetError as ex:
        print("budget refusal: %s" % ex, file=_sys.stderr)
        return EXIT_BUDGET
    except (ScheduleError, ValueError, KeyError, OSError) as ex:
        print("invalid configuration: %s" % ex, file=_sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
