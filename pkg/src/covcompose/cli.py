"""Command-line front end: compose two equal-size PNGs by evolutionary search.

Outputs in --out: pop_0.png .. pop_{mu-1}.png (final population), trace.csv
(one row per iteration), run_manifest (resolved config, reloadable), report
figures, and optionally saliency_S.png / saliency_T.png.

Exit codes: 0 success, 1 validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import RunConfig, apply_preset, parse_config, validate, write_manifest
from .errors import ComposeError, MissingInput
from .evolution import GaConfig, run_ga
from .fitness import make_context
from .image import is_mixture, load_png, require_same_size, save_grey_png, save_png, sha256_file
from .regions import build_grid
from .saliency import image_signature_saliency, saliency_weights, uniform_weights


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="compose",
        description="Compose two equal-size images by evolutionary minimisation "
        "of a region-covariance fitness.",
    )
    p.add_argument("--source", help="source image S (8-bit RGB PNG)")
    p.add_argument("--target", help="target image T, same size as S")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--preset", help="named experiment preset (see README)")
    p.add_argument("--seed", type=int, help="RNG seed override")
    p.add_argument("--out", help="output directory (default: out)")
    p.add_argument("--generations", type=int, help="iteration count override")
    p.add_argument("--dump-saliency", action="store_true", help="write saliency maps as PNGs")
    p.add_argument("--no-figures", action="store_true", help="skip the report figures")
    return p


def resolve_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except FileNotFoundError:
            raise MissingInput(f"config file not found: {args.config}") from None
        cfg = parse_config(text, base=cfg)
    if args.preset:
        cfg = apply_preset(cfg, args.preset)
    if args.source:
        cfg.source = args.source
    if args.target:
        cfg.target = args.target
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out:
        cfg.out_dir = args.out
    if args.generations is not None:
        cfg.generations = args.generations
    if args.dump_saliency:
        cfg.dump_saliency = True
    if args.no_figures:
        cfg.figures = False
    return validate(cfg)


def run(cfg: RunConfig) -> None:
    if not cfg.source or not cfg.target:
        raise MissingInput("both a source and a target image are required")
    s = load_png(cfg.source)
    t = load_png(cfg.target)
    require_same_size(s, t)
    m, n = s.shape[0], s.shape[1]
    grid = build_grid(m, n, cfg.l)

    sal_s = sal_t = None
    if cfg.weighting == "saliency" or cfg.dump_saliency:
        sal_s = image_signature_saliency(s, cfg.sigma_frac)
        sal_t = image_signature_saliency(t, cfg.sigma_frac)
    if cfg.weighting == "saliency":
        weights = saliency_weights(grid, sal_s, sal_t)
    else:
        weights = uniform_weights(grid, cfg.w_s, cfg.w_t)

    ctx = make_context(s, t, cfg.feature_set, cfg.l, cfg.metric, weights, bound=cfg.b)
    ga = GaConfig(
        mu=cfg.mu,
        generations=cfg.generations,
        p_c=cfg.p_c,
        t_cr=cfg.t_cr,
        t_lb=cfg.t_lb,
        t_ub=cfg.t_ub,
        adapt_factor=cfg.adapt_factor,
        adapt_k=cfg.adapt_k,
        t_init=cfg.t_init,
        seed=cfg.seed,
        rebuild_every=cfg.rebuild_every,
    )

    os.makedirs(cfg.out_dir, exist_ok=True)
    if cfg.dump_saliency:
        save_grey_png(os.path.join(cfg.out_dir, "saliency_S.png"), sal_s)
        save_grey_png(os.path.join(cfg.out_dir, "saliency_T.png"), sal_t)

    rows = []
    population = run_ga(ctx, ga, on_iteration=rows.append)

    for idx, ind in enumerate(population):
        if not is_mixture(ind.pixels, s, t):
            raise RuntimeError(f"internal error: slot {idx} is not a pure S/T mixture")
        save_png(os.path.join(cfg.out_dir, f"pop_{idx}.png"), ind.pixels)

    write_trace(os.path.join(cfg.out_dir, "trace.csv"), rows)
    checksums = {"source": sha256_file(cfg.source), "target": sha256_file(cfg.target)}
    finals = [(ind.fitness, ind.constraint) for ind in population]
    write_manifest(os.path.join(cfg.out_dir, "run_manifest"), cfg, checksums, finals)

    if cfg.figures:
        from . import report  # deferred: pulls in matplotlib

        report.render_report(rows, cfg.out_dir)


def write_trace(path, rows) -> None:
    """CSV with LF endings and full-precision floats."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("generation,slot,operator,accepted,fitness,constraint,t_max\n")
        for r in rows:
            fh.write(
                f"{r.generation},{r.slot},{r.operator},{int(r.accepted)},"
                f"{r.fitness!r},{r.constraint},{r.t_max!r}\n"
            )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        run(cfg)
    except ComposeError as exc:
        print(f"compose: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - report and exit nonzero
        print(f"compose: unexpected failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
