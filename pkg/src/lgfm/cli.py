"""Command-line front end.

Subcommands:
  score        score a single reference/distorted pair
  batch        score every row of a manifest CSV (ref_path,dist_path,mos)
  eval         fit the logistic mapping and report SROCC/KROCC/RMSE
  dump-filters write Gabor kernels and the Butterworth mask as PFM files

Exit codes: 0 success, 2 I/O or decode failure (or unusable manifest),
3 dimension mismatch, 4 degenerate fit input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import errors, hdr_io
from .evaluate import ScoreRecord, evaluate_dataset
from .global_features import make_butterworth_mask
from .local_features import make_log_gabor_kernel
from .pipeline import QualityScore, RunConfig, resolve_config, score_files

EXIT_IO = 2
EXIT_DIMENSION = 3
EXIT_DEGENERATE = 4


def _score_report(score: QualityScore, cfg: RunConfig) -> dict:
    return {
        "q_lgfm": score.q_lgfm,
        "q_local": score.q_local,
        "q_global": score.q_global,
        "encoding": cfg.encoding,
        "mode": cfg.mode,
        "param_hash": cfg.param_hash(),
        "config": cfg.to_dict(),
    }


def _emit(report: dict, cfg: RunConfig, out_path) -> None:
    if cfg.format == "csv":
        buf = io.StringIO()
        flat = dict(report)
        flat["config"] = json.dumps(flat["config"], sort_keys=True)
        writer = csv.DictWriter(buf, fieldnames=list(flat))
        writer.writeheader()
        writer.writerow(flat)
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_score(args) -> int:
    cfg = _config_from_args(args)
    try:
        score = score_files(args.ref, args.dist, cfg)
    except errors.DimensionMismatch as exc:
        print(f"error: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (OSError, errors.LgfmError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    _emit(_score_report(score, cfg), cfg, args.out)
    return 0


def _score_row(row: dict, cfg: RunConfig) -> dict:
    out = {
        "ref_path": row["ref_path"],
        "dist_path": row["dist_path"],
        "mos": row.get("mos", ""),
        "q_lgfm": "",
        "q_local": "",
        "q_global": "",
        "error": "",
    }
    try:
        score = score_files(row["ref_path"], row["dist_path"], cfg)
    except (OSError, errors.LgfmError) as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
        return out
    out["q_lgfm"] = repr(score.q_lgfm)
    if score.q_local is not None:
        out["q_local"] = repr(score.q_local)
    if score.q_global is not None:
        out["q_global"] = repr(score.q_global)
    return out


def cmd_batch(args) -> int:
    cfg = _config_from_args(args)
    try:
        with open(args.manifest, newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None or not {
                "ref_path",
                "dist_path",
            }.issubset(reader.fieldnames):
                print(
                    "error: manifest must have ref_path,dist_path[,mos] columns",
                    file=sys.stderr,
                )
                return EXIT_IO
            rows = list(reader)
    except OSError as exc:
        print(f"error: cannot read manifest: {exc}", file=sys.stderr)
        return EXIT_IO
    if not rows:
        print("error: manifest has no data rows", file=sys.stderr)
        return EXIT_IO

    # results restored to manifest order, so thread count never changes output
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda r: _score_row(r, cfg), rows))
    else:
        results = [_score_row(r, cfg) for r in rows]

    fields = ["ref_path", "dist_path", "mos", "q_lgfm", "q_local", "q_global", "error"]
    if cfg.format == "json":
        text = json.dumps(
            {"config": cfg.to_dict(), "param_hash": cfg.param_hash(), "rows": results},
            indent=2,
        ) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# param_hash={cfg.param_hash()} "
                  f"config={json.dumps(cfg.to_dict(), sort_keys=True)}\n")
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(results)
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    ok = sum(1 for r in results if not r["error"])
    return 0 if ok >= 1 else EXIT_IO


def cmd_eval(args) -> int:
    cfg = _config_from_args(args)
    try:
        with open(args.scores, newline="") as f:
            reader = csv.DictReader(
                row for row in f if not row.startswith("#")
            )
            records = []
            for i, row in enumerate(reader):
                if row.get("q") in (None, "") or row.get("mos") in (None, ""):
                    continue
                records.append(
                    ScoreRecord(
                        image_id=row.get("image_id", str(i)),
                        q=float(row["q"]),
                        mos=float(row["mos"]),
                    )
                )
    except OSError as exc:
        print(f"error: cannot read scores: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        report = evaluate_dataset(records)
    except errors.DegenerateInput as exc:
        print(f"error: degenerate fit input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    report["param_hash"] = cfg.param_hash()
    report["config"] = cfg.to_dict()
    _emit_json(report, args.out)
    return 0


def _emit_json(report: dict, out_path) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_dump_filters(args) -> int:
    cfg = _config_from_args(args)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    for theta in cfg.gabor.orientations:
        kernel = make_log_gabor_kernel(cfg.gabor, theta)
        hdr_io.write_pfm_gray(out_dir / f"gabor_theta_{theta:.4f}.pfm", kernel)
    mask = make_butterworth_mask(args.height, args.width, cfg.butterworth)
    hdr_io.write_pfm_gray(out_dir / "butterworth_mask.pfm", mask)
    print(f"wrote {len(cfg.gabor.orientations)} kernels and mask to {out_dir}")
    return 0


def _config_from_args(args) -> RunConfig:
    overrides = {
        "encoding": getattr(args, "encoding", None),
        "mode": getattr(args, "mode", None),
        "pairing": getattr(args, "pairing", None),
        "format": getattr(args, "format", None),
        "threads": getattr(args, "threads", None),
    }
    return resolve_config(args.config, overrides)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--encoding", choices=["pu", "pq"])
    p.add_argument("--mode", choices=["full", "local_only", "global_only"])
    p.add_argument("--pairing", choices=["matched", "literal"])
    p.add_argument("--config", metavar="PATH", help="JSON config file")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--threads", type=int, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgfm", description="HDR full-reference image quality metric"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score one reference/distorted pair")
    p.add_argument("ref")
    p.add_argument("dist")
    _add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("batch", help="score every row of a manifest CSV")
    p.add_argument("manifest")
    _add_common(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("eval", help="fit logistic mapping, report correlations")
    p.add_argument("scores", help="CSV with q and mos columns")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("dump-filters", help="write filter kernels as PFM images")
    p.add_argument("--width", type=int, default=512)
    p.add_argument("--height", type=int, default=512)
    _add_common(p)
    p.set_defaults(func=cmd_dump_filters)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
