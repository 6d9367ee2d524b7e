"""Command-line entry point orchestrating the pipeline."""

from __future__ import annotations

import argparse
import datetime
import sys
from dataclasses import dataclass

from . import bayes, data, describe, ols, report
from .errors import (
    ConsistencyError,
    DataError,
    ParseError,
    SingularDesignError,
)
from .kernels import RandomSource


@dataclass
class RunConfig:
    command: str
    input: str
    fmt: str = "text"
    group_key: str = "month"
    draws: int = 10_000
    seed: int = 42
    ci_level: float = 0.89
    pirope_epsilon: float = 1.0
    no_assoc_threshold: float = 99.0
    vif_cutoff: float = 10.0
    use_hdi: bool = False
    coef_sd: float | None = None
    sigma2_shape: float = 1.0
    sigma2_scale: float | None = None
    quarter_start: str | None = None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="path to the quarterly CSV")
    p.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        dest="fmt",
        help="output format (default text)",
    )


def _add_bayes_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--draws", type=int, default=10_000, help="posterior draws (>= 1000)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    p.add_argument(
        "--ci-level", type=float, default=0.89, help="credible level in (0,1)"
    )
    p.add_argument(
        "--hdi",
        action="store_true",
        help="use the highest-density interval instead of equal tails",
    )
    p.add_argument(
        "--coef-sd",
        type=float,
        default=None,
        help="override every coefficient prior sd with this value",
    )
    p.add_argument("--sigma2-shape", type=float, default=1.0)
    p.add_argument(
        "--sigma2-scale",
        type=float,
        default=None,
        help="sigma2 prior scale (default: auto-scaled to the data)",
    )


def _add_verdict_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--pirope-epsilon",
        type=float,
        default=1.0,
        help="max percent-in-ROPE for Bayesian significance (default 1.0)",
    )
    p.add_argument(
        "--no-assoc-threshold",
        type=float,
        default=99.0,
        help="percent-in-ROPE at or above which no association is flagged",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinreg",
        description="Dual frequentist/Bayesian regression pipeline for quarterly loan-loss data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="descriptive statistics per variable")
    _add_common(p)

    p = sub.add_parser("anova", help="one-way ANOVA of Loss")
    _add_common(p)
    p.add_argument(
        "--group",
        choices=("month", "year"),
        default="month",
        dest="group_key",
        help="grouping key: calendar month-of-year or calendar year",
    )

    p = sub.add_parser("ols", help="OLS fit with inference and diagnostics")
    _add_common(p)
    p.add_argument("--vif-cutoff", type=float, default=10.0)

    p = sub.add_parser("bayes", help="Bayesian posterior summary with ROPE")
    _add_common(p)
    _add_bayes_flags(p)

    p = sub.add_parser("verdict", help="combined significance verdict")
    _add_common(p)
    _add_bayes_flags(p)
    _add_verdict_flags(p)

    p = sub.add_parser("report", help="full report: all sections")
    _add_common(p)
    _add_bayes_flags(p)
    _add_verdict_flags(p)
    p.add_argument("--vif-cutoff", type=float, default=10.0)

    p = sub.add_parser(
        "aggregate", help="average a daily series over the month before a quarter start"
    )
    _add_common(p)
    p.add_argument(
        "--quarter-start", required=True, help="quarter start date, YYYY-MM-DD"
    )

    return parser


def _config_from_args(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    cfg = RunConfig(command=args.command, input=args.input, fmt=args.fmt)
    for name in (
        "group_key",
        "draws",
        "seed",
        "ci_level",
        "pirope_epsilon",
        "no_assoc_threshold",
        "vif_cutoff",
        "coef_sd",
        "sigma2_shape",
        "sigma2_scale",
        "quarter_start",
    ):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "hdi"):
        cfg.use_hdi = args.hdi
    if cfg.draws < 1000:
        parser.error(f"--draws must be at least 1000, got {cfg.draws}")
    if not 0.0 < cfg.ci_level < 1.0:
        parser.error(f"--ci-level must lie in (0, 1), got {cfg.ci_level}")
    if not 0.0 <= cfg.pirope_epsilon <= 100.0:
        parser.error(
            f"--pirope-epsilon must lie in [0, 100], got {cfg.pirope_epsilon}"
        )
    return cfg


def _load_frame(cfg: RunConfig) -> data.ModelFrame:
    return data.apply_transforms(data.load_csv(cfg.input))


def _bayes_summaries(
    cfg: RunConfig, design: ols.DesignMatrix, frame: data.ModelFrame
) -> list[bayes.PosteriorSummary]:
    prior = bayes.default_prior(
        design,
        coef_sd=cfg.coef_sd,
        sigma2_shape=cfg.sigma2_shape,
        sigma2_scale=cfg.sigma2_scale,
    )
    rs = RandomSource(cfg.seed)
    post = bayes.sample_posterior(design, prior, cfg.draws, rs)
    return bayes.summarize_posterior(
        post, frame.loss, level=cfg.ci_level, use_hdi=cfg.use_hdi
    )


def _run(cfg: RunConfig) -> bytes:
    if cfg.command == "aggregate":
        with open(cfg.input, "rb") as fh:
            daily = data.parse_daily_csv(fh)
        try:
            qs = datetime.date.fromisoformat(cfg.quarter_start or "")
        except ValueError:
            raise DataError(f"malformed --quarter-start {cfg.quarter_start!r}") from None
        value = data.aggregate_prior_month(daily, qs)
        if cfg.fmt == "json":
            import json

            doc = {"quarter_start": qs.isoformat(), "prior_month_mean": value}
            return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
        return f"{value!r}\n".encode("utf-8")

    frame = _load_frame(cfg)
    sections = report.ReportSections(bayes_level=cfg.ci_level)

    if cfg.command == "describe":
        sections.descriptive = describe.summarize(frame)
    elif cfg.command == "anova":
        fn = describe.anova_by_year if cfg.group_key == "year" else describe.anova_by_month
        sections.anova = [fn(frame)]
    elif cfg.command == "ols":
        design = ols.build_design(frame)
        sections.ols_fit = ols.fit_ols(design)
        sections.ols_diag = ols.diagnostics(design, sections.ols_fit, cfg.vif_cutoff)
    elif cfg.command == "bayes":
        design = ols.build_design(frame)
        sections.bayes = _bayes_summaries(cfg, design, frame)
    elif cfg.command == "verdict":
        design = ols.build_design(frame)
        fit = ols.fit_ols(design)
        posts = _bayes_summaries(cfg, design, frame)
        sections.verdicts = report.combined_verdict(
            fit,
            posts,
            pirope_epsilon=cfg.pirope_epsilon,
            no_assoc_threshold=cfg.no_assoc_threshold,
        )
    elif cfg.command == "report":
        design = ols.build_design(frame)
        fit = ols.fit_ols(design)
        posts = _bayes_summaries(cfg, design, frame)
        sections.descriptive = describe.summarize(frame)
        sections.anova = [describe.anova_by_month(frame), describe.anova_by_year(frame)]
        sections.ols_fit = fit
        sections.ols_diag = ols.diagnostics(design, fit, cfg.vif_cutoff)
        sections.bayes = posts
        sections.verdicts = report.combined_verdict(
            fit,
            posts,
            pirope_epsilon=cfg.pirope_epsilon,
            no_assoc_threshold=cfg.no_assoc_threshold,
        )
    else:  # pragma: no cover - argparse restricts the choices
        raise DataError(f"unknown command {cfg.command!r}")

    return report.render_report(sections, cfg.fmt)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        out = _run(cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except SingularDesignError as exc:
        print(f"singular design: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"consistency error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 1

    sys.stdout.buffer.write(out)
    sys.stdout.buffer.flush()
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
