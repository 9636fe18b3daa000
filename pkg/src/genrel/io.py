"""Reading trait tables, writing reports and parsing run configurations."""

from __future__ import annotations

import configparser
import csv
import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from genrel.data import Dataset
from genrel.errors import (
    ConfigError,
    HeaderMismatch,
    InconsistentIndicator,
    IoError,
    NonNumericCell,
    SerializationInvariant,
)
from genrel.learners import LassoSettings, LearnerSpec, MlpSettings, RidgeSettings
from genrel.links import Link

SIG_DIGITS = 12


# --------------------------------------------------------------------- tables

def _cell(text, row, col):
    try:
        return float(text)
    except ValueError:
        raise NonNumericCell(row, col, text) from None


def _indicator(text, row, col):
    v = _cell(text, row, col)
    if v not in (0.0, 1.0):
        raise NonNumericCell(row, col, text)
    return bool(v)


def read_table(path):
    """Read a comma-separated trait table into a :class:`Dataset`.

    The header holds ``x1..xp`` in order, then any of ``y``, ``z``, ``t_y``,
    ``t_z``.  Without an indicator column, an empty trait cell marks the
    trait as unobserved; with one, the indicator decides and ``t = 1``
    requires a value.  Row numbers in errors count data rows from 1.
    """
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise HeaderMismatch(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    p = 0
    while p < len(header) and header[p] == f"x{p + 1}":
        p += 1
    rest = header[p:]
    if p == 0:
        raise HeaderMismatch("the header must start with x1")
    allowed = ("y", "z", "t_y", "t_z")
    if any(c not in allowed for c in rest) or len(set(rest)) != len(rest):
        raise HeaderMismatch(f"after x1..x{p} only {allowed} may appear once each; got {rest}")
    for t, v in (("t_y", "y"), ("t_z", "z")):
        if t in rest and v not in rest:
            raise HeaderMismatch(f"column {t} needs column {v}")
    pos = {c: p + k for k, c in enumerate(rest)}

    n = len(rows) - 1
    x = np.empty((n, p))
    vals = {"y": np.full(n, np.nan), "z": np.full(n, np.nan)}
    obs = {"y": np.zeros(n, dtype=bool), "z": np.zeros(n, dtype=bool)}
    for i, r in enumerate(rows[1:], start=1):
        if len(r) != len(header):
            raise HeaderMismatch(f"row {i} has {len(r)} cells, header has {len(header)}")
        r = [c.strip() for c in r]
        for j in range(p):
            x[i - 1, j] = _cell(r[j], i, header[j])
        for v in ("y", "z"):
            if v not in pos:
                continue
            text = r[pos[v]]
            tcol = f"t_{v}"
            if tcol in pos:
                flag = _indicator(r[pos[tcol]], i, tcol)
                if flag and text == "":
                    raise InconsistentIndicator(i, tcol)
            else:
                flag = text != ""
            obs[v][i - 1] = flag
            if flag:
                vals[v][i - 1] = _cell(text, i, v)
    return Dataset.from_arrays(x, np.where(obs["y"], vals["y"], 0.0),
                               np.where(obs["z"], vals["z"], 0.0), obs["y"], obs["z"])


def write_table(d, path):
    """Write ``d`` in the format :func:`read_table` reads, with explicit indicators."""
    header = [f"x{j + 1}" for j in range(d.p)] + ["y", "z", "t_y", "t_z"]
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for i in range(d.n_rows):
                w.writerow([repr(float(v)) for v in d.x[i]]
                           + [repr(float(d.y[i])) if d.t_y[i] else "",
                              repr(float(d.z[i])) if d.t_z[i] else "",
                              int(d.t_y[i]), int(d.t_z[i])])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


# -------------------------------------------------------------------- reports

def _round(v, where):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            raise SerializationInvariant(f"non-finite value {v} at {where}")
        return float(f"{v:.{SIG_DIGITS}g}")
    if isinstance(v, dict):
        return {str(k): _round(x, f"{where}.{k}") for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_round(x, f"{where}[{i}]") for i, x in enumerate(v)]
    if v is None or isinstance(v, str):
        return v
    raise SerializationInvariant(f"cannot serialize {type(v).__name__} at {where}")


def dumps_report(report):
    """Deterministic JSON text for an EstimateReport, MonteCarloTable or plain dict."""
    body = report.as_dict() if hasattr(report, "as_dict") else report
    return json.dumps(_round(body, "report"), indent=2, allow_nan=False) + "\n"


def write_report(report, path):
    text = dumps_report(report)
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_report(path):
    """Parse a report written by :func:`write_report` back into a dict."""
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


# --------------------------------------------------------------------- config

_SECTIONS = ("data", "learner_m", "learner_h", "links", "run")
_DATA_KEYS = ("path", "example", "n_y", "n_z", "p", "s1", "s2", "overlap", "ar", "noise_scale")
_LEARNER_KEYS = ("kind", "family", "value",
                 "cv_folds", "lambda_grid_size", "lambda_min_ratio", "max_iter", "tol", "dev_ratio_stop",
                 "lambda", "hidden", "learning_rate", "learning_rate_init", "batch_size",
                 "patience", "alpha", "mlp_seed")
_LINK_KEYS = ("g1", "g2", "clip_eps")
_RUN_KEYS = ("command", "target", "alpha", "seed", "reps", "out", "preset", "method",
             "variance_form", "draws")


@dataclass
class RunConfig:
    command: str | None = None
    data: dict = field(default_factory=dict)
    learner_m: LearnerSpec | None = None
    learner_h: LearnerSpec | None = None
    g1: Link | None = None
    g2: Link | None = None
    target: str | None = None
    alpha: float = 0.05
    seed: int = 0
    reps: int | None = None
    out: str | None = None
    preset: str | None = None
    method: str = "crossfit"
    variance_form: str = "proposition"
    draws: int = 1_000_000

    def validate(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.target not in (None, "covariance", "correlation"):
            raise ConfigError(f"target must be covariance or correlation, got {self.target!r}")
        if self.reps is not None and self.reps < 1:
            raise ConfigError("reps must be >= 1")
        if self.method not in ("crossfit", "fullsample", "naive"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.variance_form not in ("proposition", "theorem"):
            raise ConfigError(f"unknown variance_form {self.variance_form!r}")
        return self


def _num(section, key, text, kind):
    try:
        return kind(text)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {text!r} is not a valid {kind.__name__}") from None


def parse_learner(text, section="learner"):
    """Parse the short form ``kind[:family]`` or ``constant:value``."""
    kind, _, arg = str(text).strip().partition(":")
    kind = kind.lower()
    try:
        if kind == "constant":
            return LearnerSpec(kind="constant", constant=_num(section, "value", arg or "0", float))
        if kind == "oracle":
            raise ConfigError("oracle learners exist only inside simulations")
        return LearnerSpec(kind=kind, family=arg.lower() or "gaussian")
    except ValueError as exc:
        raise ConfigError(f"{section}: {exc}") from None


def learner_from_section(sec, name):
    """Build a LearnerSpec from an INI section's key-value pairs."""
    unknown = set(sec) - set(_LEARNER_KEYS)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(sorted(unknown))}")
    kind = sec.get("kind", "lasso").strip().lower()
    family = sec.get("family", "gaussian").strip().lower()

    def get(key, typ, default):
        return _num(name, key, sec[key], typ) if key in sec else default

    try:
        lasso = LassoSettings(
            cv_folds=get("cv_folds", int, 10),
            lambda_grid_size=get("lambda_grid_size", int, 100),
            lambda_min_ratio=get("lambda_min_ratio", float, 1e-4),
            max_iter=get("max_iter", int, 10_000) if kind == "lasso" else 10_000,
            tol=get("tol", float, 1e-4) if kind == "lasso" else 1e-4,
            dev_ratio_stop=(None if sec.get("dev_ratio_stop", "").strip().lower() == "none"
                            else get("dev_ratio_stop", float, 0.999)),
        )
        ridge = RidgeSettings(lam=get("lambda", float, 1.0))
        hidden = (tuple(_num(name, "hidden", h, int) for h in sec["hidden"].replace(",", " ").split())
                  if "hidden" in sec else (100, 100))
        mlp = MlpSettings(
            hidden=hidden,
            max_iter=get("max_iter", int, 5000) if kind == "mlp" else 5000,
            learning_rate=sec.get("learning_rate", "adaptive").strip(),
            learning_rate_init=get("learning_rate_init", float, 1e-3),
            batch_size=get("batch_size", int, 32),
            patience=get("patience", int, 20),
            tol=get("tol", float, 1e-4) if kind == "mlp" else 1e-4,
            alpha=get("alpha", float, 1e-4),
            seed=get("mlp_seed", int, None),
        )
        return LearnerSpec(kind=kind, family=family, lasso=lasso, ridge=ridge, mlp=mlp,
                           constant=get("value", float, 0.0))
    except ValueError as exc:
        raise ConfigError(f"[{name}]: {exc}") from None


def parse_link(text, clip_eps=1e-6):
    try:
        return Link.parse(text, clip_eps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def read_config(path):
    """Parse an INI run configuration strictly: unknown sections or keys are errors."""
    cp = configparser.ConfigParser(interpolation=None, default_section="__none__")
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None

    extra = set(cp.sections()) - set(_SECTIONS)
    if extra:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(extra))}; allowed {_SECTIONS}")
    for name, keys in (("data", _DATA_KEYS), ("links", _LINK_KEYS), ("run", _RUN_KEYS)):
        if cp.has_section(name):
            unknown = set(cp[name]) - set(keys)
            if unknown:
                raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(sorted(unknown))}")

    cfg = RunConfig()
    if cp.has_section("data"):
        cfg.data = dict(cp["data"])
    for name in ("learner_m", "learner_h"):
        if cp.has_section(name):
            setattr(cfg, name, learner_from_section(dict(cp[name]), name))
    if cp.has_section("links"):
        sec = cp["links"]
        eps = _num("links", "clip_eps", sec["clip_eps"], float) if "clip_eps" in sec else 1e-6
        if "g1" in sec:
            cfg.g1 = parse_link(sec["g1"], eps)
        if "g2" in sec:
            cfg.g2 = parse_link(sec["g2"], eps)
    if cp.has_section("run"):
        sec = cp["run"]
        for key, typ in (("alpha", float), ("seed", int), ("reps", int), ("draws", int)):
            if key in sec:
                setattr(cfg, key, _num("run", key, sec[key], typ))
        for key in ("command", "target", "out", "preset", "method", "variance_form"):
            if key in sec:
                setattr(cfg, key, sec[key].strip())
    return cfg.validate()


def dgp_from_data(data, base=None):
    """Build a DgpSpec from ``[data]`` keys, starting from ``base`` when given."""
    from dataclasses import replace

    from genrel.simulation.dgp import DgpSpec

    spec = base or DgpSpec()
    casts = {"example": str, "overlap": str, "n_y": int, "n_z": int, "p": int, "s1": int,
             "s2": int, "ar": float, "noise_scale": float}
    kw = {k: _num("data", k, v, casts[k]) if casts[k] is not str else v.strip()
          for k, v in data.items() if k in casts}
    if "s1" in kw and "s2" not in kw and base is None:
        kw["s2"] = None
    return replace(spec, **kw).validate()
