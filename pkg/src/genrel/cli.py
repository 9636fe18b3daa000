"""``genrel`` command line.

Subcommands::

    genrel estimate --data traits.csv [--target correlation] [--out report.json]
    genrel simulate --config ex1_desk [--reps 50] [--out table.json]
    genrel oracle   --config ex3_desk [--draws 1000000]

``--config`` takes an INI file or a preset name.  Exit status is 0 on
success, 1 on a usage error and 2 when estimation or data handling fails.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from genrel import __version__
from genrel.errors import ConfigError, GenrelError
from genrel.estimators import (
    estimate_correlation,
    estimate_covariance,
    estimate_covariance_fullsample,
    estimate_covariance_naive,
)
from genrel.io import (
    RunConfig,
    dgp_from_data,
    file_digest,
    parse_learner,
    parse_link,
    read_config,
    read_table,
    write_report,
)
from genrel.learners import LearnerSpec

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", help="INI file or preset name (e.g. ex1_desk)")
    common.add_argument("--learner-m", help="learner for m: lasso, lasso:binomial, ridge, mlp, constant:0")
    common.add_argument("--learner-h", help="learner for h, same forms as --learner-m")
    common.add_argument("--link1", help="link for trait y: identity or logit")
    common.add_argument("--link2", help="link for trait z: identity or logit")
    common.add_argument("--alpha", type=float, help="one minus the confidence level (default 0.05)")
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("--out", help="write the structured report here")
    common.add_argument("--target", choices=("covariance", "correlation"))

    parser = _Parser(prog="genrel", description="Genetic covariance and correlation estimation.")
    parser.add_argument("--version", action="version", version=f"genrel {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    est = sub.add_parser("estimate", parents=[common], help="estimate from a trait table")
    est.add_argument("--data", help="comma-separated table with x1..xp, y, z[, t_y, t_z]")
    est.add_argument("--method", choices=("crossfit", "fullsample", "naive"))
    sim = sub.add_parser("simulate", parents=[common], help="run a Monte Carlo preset")
    sim.add_argument("--reps", type=int, help="number of replications")
    sim.add_argument("--workers", type=int, help="process count (default GENREL_THREADS)")
    orc = sub.add_parser("oracle", parents=[common], help="Monte Carlo truth of a design")
    orc.add_argument("--draws", type=int, help="predictor draws (default 1e6)")
    return parser


def _load_config(ref):
    """Return (RunConfig, preset name or None)."""
    if ref is None:
        return RunConfig(), None
    if os.path.exists(ref):
        cfg = read_config(ref)
        return cfg, cfg.preset
    from genrel.simulation.presets import PRESETS
    if ref in PRESETS:
        return RunConfig(preset=ref), ref
    raise ConfigError(f"--config {ref!r} is neither a file nor a preset name")


def _merge(args, cfg):
    """Command-line flags override the config file."""
    if args.learner_m:
        cfg.learner_m = parse_learner(args.learner_m, "--learner-m")
    if args.learner_h:
        cfg.learner_h = parse_learner(args.learner_h, "--learner-h")
    if args.link1:
        cfg.g1 = parse_link(args.link1)
    if args.link2:
        cfg.g2 = parse_link(args.link2)
    for key in ("alpha", "seed", "out", "target", "reps", "method", "draws"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    data = getattr(args, "data", None)
    if data:
        cfg.data = dict(cfg.data, path=data)
    return cfg.validate()


def _estimate(cfg, out):
    path = cfg.data.get("path")
    if not path:
        raise ConfigError("estimate needs --data or [data] path")
    if not os.path.exists(path):
        raise ConfigError(f"data file {path!r} does not exist")
    d = read_table(path)
    lm = cfg.learner_m or LearnerSpec()
    lh = cfg.learner_h or LearnerSpec()
    g1, g2 = cfg.g1 or parse_link("identity"), cfg.g2 or parse_link("identity")
    if cfg.method != "crossfit":
        if cfg.target == "correlation" or not (g1.is_identity and g2.is_identity):
            raise ConfigError(f"method {cfg.method} supports the identity-link covariance only")
        fn = estimate_covariance_fullsample if cfg.method == "fullsample" else estimate_covariance_naive
        value = fn(d, lm, lh, cfg.seed)
        print(f"{value:.6g}", file=out)
        if cfg.out:
            write_report({"target": "covariance", "method": cfg.method, "point": value,
                          "seed": cfg.seed, "data": {"path": path, "sha256": file_digest(path)},
                          "learner_m": lm.describe(), "learner_h": lh.describe(),
                          "flags": {"biased": cfg.method == "naive", "has_se": False}}, cfg.out)
        return
    fn = estimate_correlation if cfg.target == "correlation" else estimate_covariance
    report = fn(d, lm, lh, g1, g2, cfg.alpha, cfg.seed, cfg.variance_form)
    print(report.summary(), file=out)
    if cfg.out:
        report.metadata["data"] = {"path": path, "sha256": file_digest(path)}
        write_report(report, cfg.out)


def _dgp_and_config(cfg, preset):
    from genrel.simulation.dgp import DgpSpec
    from genrel.simulation.montecarlo import EstimatorConfig
    from genrel.simulation.presets import get_preset

    if preset:
        dgp, est, reps = get_preset(preset)
        dgp = dgp_from_data(cfg.data, dgp) if cfg.data else dgp
    else:
        if "example" not in cfg.data:
            raise ConfigError("simulate and oracle need a preset or [data] example")
        dgp = dgp_from_data(cfg.data)
        est, reps = EstimatorConfig(), 100
    links = None
    if cfg.g1 or cfg.g2:
        g1, g2 = dgp.links
        links = (cfg.g1 or g1, cfg.g2 or g2)
    est = replace(est,
                  learner_m=cfg.learner_m or est.learner_m,
                  learner_h=cfg.learner_h or est.learner_h,
                  links=links or est.links,
                  target=cfg.target or est.target,
                  variance_form=cfg.variance_form)
    if cfg.method != "crossfit":
        est = replace(est, method=cfg.method, paired_naive=False)
    return dgp, est, cfg.reps or reps


def _simulate(cfg, preset, workers, out):
    from genrel.simulation.montecarlo import run_monte_carlo

    dgp, est, reps = _dgp_and_config(cfg, preset)
    table = run_monte_carlo(dgp, est, reps, cfg.alpha, cfg.seed, workers=workers)
    out.write(table.to_text())
    if table.failures:
        print(f"failed replications: {dict(sorted(table.failures.items()))}", file=out)
    if cfg.out:
        write_report(table, cfg.out)


def _oracle(cfg, preset, out):
    from genrel.simulation.oracle import true_value_oracle

    dgp, _, _ = _dgp_and_config(cfg, preset)
    value, se = true_value_oracle(dgp, cfg.draws, cfg.seed)
    print(f"{value:.8g} ± {se:.3g}", file=out)
    if cfg.out:
        write_report({"kind": "oracle", "example": dgp.example, "p": dgp.p, "s1": dgp.s1,
                      "s2": dgp.s2_, "ar": dgp.ar, "draws": cfg.draws, "seed": cfg.seed,
                      "truth": value, "mc_se": se, "software": f"genrel {__version__}"}, cfg.out)


def run_cli(argv=None, out=None, err=None):
    """Run the command line; returns the exit status instead of exiting."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError(parser.format_usage() + "genrel: error: a subcommand is required")
        cfg, preset = _load_config(args.config)
        if cfg.command and cfg.command != args.command:
            raise ConfigError(f"config is for {cfg.command!r}, not {args.command!r}")
        cfg = _merge(args, cfg)
        if args.command == "estimate":
            _estimate(cfg, out)
        elif args.command == "simulate":
            _simulate(cfg, preset, args.workers, out)
        else:
            _oracle(cfg, preset, out)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except _UsageError as exc:
        print(str(exc), file=err)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"genrel: usage error: {exc}", file=err)
        return EXIT_USAGE
    except GenrelError as exc:
        print(f"genrel: {exc.name}: {exc}", file=err)
        return EXIT_FAILURE
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
