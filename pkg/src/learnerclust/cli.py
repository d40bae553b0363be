"""Command-line entry point.

Subcommands, each reading and writing plain files::

    learnerclust synth   [SPEC.json]                -> access.log truth.csv planted.json config.json
    learnerclust parse   LOG                        -> features.csv cleaning_summary.csv
    learnerclust cluster FEATURES.csv               -> model.json memberships.csv fit_report.txt
    learnerclust report  MEMBERSHIPS.csv FEATURES.csv [--model model.json]
                                                    -> profile.csv profile.txt regions.csv
    learnerclust compare REGIONS.csv TRUTH.csv      -> compare.csv compare.txt

Exit status is 0 on success, 1 for usage/configuration errors and 2 for
data errors; the error class name is printed on stderr.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import fuzzyclust as fc
from .config import PipelineConfig, load_config, with_overrides
from .errors import DataError, IoFailure, KeyMismatch, ShapeMismatch, UsageError
from .features import extract_all, read_feature_csv, with_corpus_caps, write_feature_csv
from .logparse import read_log
from .regions import (
    REGULAR, WORKERS, BAD, assign_regions, format_profile_table, name_clusters, profile,
    write_profile_csv, write_region_csv,
)
from .sessions import CleaningSummary, clean_hits, clean_visits, sessionize
from . import synth

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

SUMMARY_HEADER = ("dataset", "hits", "hits_after_cleaning", "visits", "visits_after_cleaning")
# cluster names that correspond to a differently spelled archetype
_ARCHETYPE_OF = {WORKERS: synth.WORKER, REGULAR: synth.REGULAR, BAD: synth.BAD}


def _out(cfg: PipelineConfig) -> Path:
    path = Path(cfg.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _text_table(header, rows):
    rows = [tuple(str(x) for x in r) for r in rows]
    widths = [max(len(r[k]) for r in rows + [tuple(header)]) for k in range(len(header))]
    fmt = lambda r: "  ".join(s.ljust(w) if k == 0 else s.rjust(w)
                              for k, (s, w) in enumerate(zip(r, widths)))
    return "\n".join([fmt(header), "  ".join("-" * w for w in widths)] + [fmt(r) for r in rows]) + "\n"


def cmd_parse(log_path, cfg: PipelineConfig) -> dict:
    """Parse, clean and sessionize a log, then write the feature matrix."""
    records, skipped = read_log(log_path)
    summary = CleaningSummary(hits=len(records), skipped_lines=skipped)
    kept = clean_hits(records, cfg.rules)
    summary.hits_after_cleaning = len(kept)
    visits = sessionize(kept, cfg.timeout, cfg.rules)
    summary.visits = len(visits)
    visits = clean_visits(visits, cfg.rules)
    summary.visits_after_cleaning = len(visits)

    feat_cfg = with_corpus_caps(cfg.features, visits)
    vectors = extract_all(visits, feat_cfg)

    out = _out(cfg)
    write_feature_csv(out / "features.csv", visits, vectors)
    _write_rows(out / "cleaning_summary.csv", SUMMARY_HEADER,
                [(Path(log_path).name, summary.hits, summary.hits_after_cleaning,
                  summary.visits, summary.visits_after_cleaning)])
    print(_text_table(SUMMARY_HEADER, [(Path(log_path).name, summary.hits,
                                        summary.hits_after_cleaning, summary.visits,
                                        summary.visits_after_cleaning)]), end="")
    print(f"skipped malformed lines: {skipped}")
    print(f"hits cap: {feat_cfg.hits_cap!r}  downloads cap: {feat_cfg.downloads_cap!r}")
    return {"summary": summary, "features": feat_cfg, "n": len(vectors)}


def cmd_cluster(features_path, cfg: PipelineConfig) -> dict:
    _, X = read_feature_csv(features_path)
    model, U, report = fc.fit(X, cfg.clusters, method=cfg.method, m=cfg.m, sigma=cfg.sigma,
                              eps=cfg.eps, max_iter=cfg.max_iter, seed=cfg.seed)
    out = _out(cfg)
    fc.save_model(out / "model.json", model, report)
    fc.write_memberships(out / "memberships.csv", U)
    text = fc.format_report(report, model)
    (out / "fit_report.txt").write_text(text, encoding="utf-8")
    print(f"{model.method}: {report.iterations} iterations, converged={report.converged}, "
          f"final objective {report.objective_trace[-1]!r}")
    return {"model": model, "U": U, "report": report}


def cmd_report(memberships_path, features_path, cfg: PipelineConfig, model_path=None) -> dict:
    keys, X = read_feature_csv(features_path)
    U = fc.read_memberships(memberships_path)
    if U.shape[1] != len(X):
        raise ShapeMismatch(f"{U.shape[1]} membership rows but {len(X)} feature rows")
    if U.shape[0] < 2:
        raise ShapeMismatch("need at least two membership columns")
    if model_path is not None:
        centers = fc.load_model(model_path).centers
        if centers.shape[0] != U.shape[0]:
            raise ShapeMismatch(f"model has {centers.shape[0]} clusters, memberships {U.shape[0]}")
    else:
        centers = fc.fcm_centers(X, U, cfg.m)
    labels = name_clusters(centers)
    assignments = assign_regions(U, cfg.region_rule)
    profiles = profile(assignments, X, labels)

    out = _out(cfg)
    write_profile_csv(out / "profile.csv", profiles)
    table = format_profile_table(profiles, title="Behavior of each class")
    (out / "profile.txt").write_text(table, encoding="utf-8")
    write_region_csv(out / "regions.csv", assignments, keys, labels)
    print(table, end="")
    return {"labels": labels, "assignments": assignments, "profiles": profiles}


def _read_csv_dicts(path, required):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not set(required) <= set(reader.fieldnames):
                raise DataError(f"{path}: expected columns {','.join(required)}")
            return list(reader)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc.strerror or exc}") from exc


def match_table(region_rows, truth: dict) -> list[tuple]:
    """Per-archetype ``(archetype, truth_count, matched, ratio)`` rows plus an overall row.

    A point counts as matched when it sits in a Sure region whose cluster
    name corresponds to the host's planted archetype.
    """
    counts, matched = {}, {}
    for row in region_rows:
        host = row["host"]
        if host not in truth:
            raise KeyMismatch(f"host {host} missing from truth table")
        arch = truth[host]
        counts[arch] = counts.get(arch, 0) + 1
        if row["sure"] == "1" and _ARCHETYPE_OF.get(row["region"], row["region"]) == arch:
            matched[arch] = matched.get(arch, 0) + 1
    order = [a for a in synth.ARCHETYPES if a in counts] + sorted(
        a for a in counts if a not in synth.ARCHETYPES)
    rows = [(a, counts[a], matched.get(a, 0), matched.get(a, 0) / counts[a]) for a in order]
    total, hit = sum(counts.values()), sum(matched.values())
    rows.append(("Overall", total, hit, hit / total if total else 0.0))
    return rows


def cmd_compare(regions_path, truth_path, cfg: PipelineConfig) -> dict:
    region_rows = _read_csv_dicts(regions_path, ("host", "region", "sure"))
    truth_rows = _read_csv_dicts(truth_path, ("host", "archetype"))
    truth = {r["host"]: r["archetype"] for r in truth_rows}
    rows = match_table(region_rows, truth)

    out = _out(cfg)
    header = ("class", "truth_count", "matched", "ratio")
    _write_rows(out / "compare.csv", header, [(a, n, k, repr(r)) for a, n, k, r in rows])
    text = _text_table(header, [(a, n, k, f"{100 * r:.1f}%") for a, n, k, r in rows])
    (out / "compare.txt").write_text(text, encoding="utf-8")
    print(text, end="")
    return {"rows": rows, "overall": rows[-1][3]}


def cmd_synth(spec_path, cfg: PipelineConfig) -> dict:
    if spec_path is None:
        specs, robots, weeks = synth.DEFAULT_SPECS, synth.RobotSpec(), 16
    else:
        specs, robots, weeks = synth.load_spec(spec_path)
    result = synth.generate(specs, weeks=weeks, seed=cfg.seed, robots=robots)
    paths = synth.write_outputs(result, _out(cfg))
    counts = result.planted_counts()
    print(f"wrote {counts['lines']} log lines ({counts['robot_hits']} robot hits, "
          f"{counts['visits']} student visits) to {paths['access.log']}")
    return {"result": result, "paths": paths}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"UsageError: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON pipeline config file")
    common.add_argument("--seed", type=int)
    common.add_argument("--method", choices=fc.METHODS)
    common.add_argument("--clusters", type=int)
    common.add_argument("--m", type=float, help="fuzzifier (> 1)")
    common.add_argument("--sigma", type=float, help="KFCM kernel width")
    common.add_argument("--eps", type=float)
    common.add_argument("--max-iter", type=int)
    common.add_argument("--timeout-mins", type=float)
    common.add_argument("--theta-sure", type=float)
    common.add_argument("--theta-member", type=float)
    common.add_argument("--out-dir")

    parser = _Parser(prog="learnerclust", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("synth", parents=[common], help="generate a synthetic access log")
    p.add_argument("spec", nargs="?", help="JSON archetype spec (default: built-in)")
    p = sub.add_parser("parse", parents=[common], help="log -> cleaned visits -> features.csv")
    p.add_argument("log")
    p = sub.add_parser("cluster", parents=[common], help="features.csv -> fuzzy clustering")
    p.add_argument("features")
    p = sub.add_parser("report", parents=[common], help="memberships -> regions and profiles")
    p.add_argument("memberships")
    p.add_argument("features")
    p.add_argument("--model", help="model.json written by `cluster` (used to name clusters)")
    p = sub.add_parser("compare", parents=[common], help="regions vs ground truth")
    p.add_argument("regions")
    p.add_argument("truth")
    return parser


def _config(args) -> PipelineConfig:
    cfg = load_config(args.config)
    return with_overrides(
        cfg, seed=args.seed, method=args.method, clusters=args.clusters, m=args.m,
        sigma=args.sigma, eps=args.eps, max_iter=args.max_iter, timeout_mins=args.timeout_mins,
        theta_sure=args.theta_sure, theta_member=args.theta_member, out_dir=args.out_dir,
    )


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help or an argument error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = _config(args)
        if args.command == "synth":
            cmd_synth(args.spec, cfg)
        elif args.command == "parse":
            cmd_parse(args.log, cfg)
        elif args.command == "cluster":
            cmd_cluster(args.features, cfg)
        elif args.command == "report":
            cmd_report(args.memberships, args.features, cfg, args.model)
        elif args.command == "compare":
            cmd_compare(args.regions, args.truth, cfg)
    except UsageError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"IoFailure: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
