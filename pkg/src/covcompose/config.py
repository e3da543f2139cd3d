"""Flat `key = value` run configuration, experiment presets, and the run
manifest (which is itself a loadable config, with results as comments).

Precedence when assembling a run: built-in defaults, then the config file,
then a preset, then command-line flags.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .errors import BadValue, UnknownKey, UnknownPreset
from .features import resolve_spec


@dataclass
class RunConfig:
    source: str = ""
    target: str = ""
    feature_set: str = "1"  # preset id 1|2|3 or a comma list of feature names
    l: int = 25
    metric: str = "logeuclidean"  # euclidean | logeuclidean | affine
    weighting: str = "saliency"  # uniform | saliency
    w_s: float = 0.5
    w_t: float = 0.5
    sigma_frac: float = 0.04
    b: int | None = None  # None ("auto") -> floor(0.25 * m * n)
    mu: int = 4
    generations: int = 2000
    p_c: float = 0.2
    t_cr: int = 10000
    t_lb: float = 50.0
    t_ub: float = 5000.0
    adapt_factor: float = 2.0
    adapt_k: int = 8
    t_init: float = 5000.0
    seed: int = 0
    rebuild_every: int = 200
    out_dir: str = "out"
    dump_saliency: bool = False
    figures: bool = True


# The experiment matrix: feature comparison at l=25 with uniform 0.5/0.5
# weights under the Euclidean metric; weighting and metric comparisons at
# l=20 with Feature Set 1; `best` is the headline combination.
PRESETS = {
    "feat1": dict(feature_set="1", l=25, weighting="uniform", w_s=0.5, w_t=0.5, metric="euclidean"),
    "feat2": dict(feature_set="2", l=25, weighting="uniform", w_s=0.5, w_t=0.5, metric="euclidean"),
    "feat3": dict(feature_set="3", l=25, weighting="uniform", w_s=0.5, w_t=0.5, metric="euclidean"),
    "weights-uniform-25": dict(feature_set="1", l=20, weighting="uniform", w_s=0.25, w_t=0.75, metric="logeuclidean"),
    "weights-uniform-50": dict(feature_set="1", l=20, weighting="uniform", w_s=0.5, w_t=0.5, metric="logeuclidean"),
    "weights-uniform-75": dict(feature_set="1", l=20, weighting="uniform", w_s=0.75, w_t=0.25, metric="logeuclidean"),
    "weights-saliency": dict(feature_set="1", l=20, weighting="saliency", metric="logeuclidean"),
    "metric-E": dict(feature_set="1", l=20, weighting="saliency", metric="euclidean"),
    "metric-L": dict(feature_set="1", l=20, weighting="saliency", metric="logeuclidean"),
    "metric-A": dict(feature_set="1", l=20, weighting="saliency", metric="affine"),
    "best": dict(feature_set="1", l=20, weighting="saliency", metric="logeuclidean"),
}


def _to_int(key, value):
    try:
        return int(value)
    except ValueError:
        raise BadValue(f"{key}: expected an integer, got {value!r}") from None


def _to_float(key, value):
    try:
        return float(value)
    except ValueError:
        raise BadValue(f"{key}: expected a number, got {value!r}") from None


def _to_bool(key, value):
    low = str(value).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise BadValue(f"{key}: expected a boolean, got {value!r}")


def _to_bound(key, value):
    if str(value).strip().lower() == "auto":
        return None
    b = _to_int(key, value)
    if b < 0:
        raise BadValue(f"{key}: bound must be >= 0 or 'auto'")
    return b


_PARSERS = {
    "source": lambda k, v: v,
    "target": lambda k, v: v,
    "out_dir": lambda k, v: v,
    "feature_set": lambda k, v: v,
    "metric": lambda k, v: v,
    "weighting": lambda k, v: v,
    "l": _to_int,
    "w_s": _to_float,
    "w_t": _to_float,
    "sigma_frac": _to_float,
    "b": _to_bound,
    "mu": _to_int,
    "generations": _to_int,
    "p_c": _to_float,
    "t_cr": _to_int,
    "t_lb": _to_float,
    "t_ub": _to_float,
    "adapt_factor": _to_float,
    "adapt_k": _to_int,
    "t_init": _to_float,
    "seed": _to_int,
    "rebuild_every": _to_int,
    "dump_saliency": _to_bool,
    "figures": _to_bool,
}


def set_key(cfg: RunConfig, key: str, value: str) -> RunConfig:
    if key not in _PARSERS:
        raise UnknownKey(f"unknown config key: {key!r}")
    return replace(cfg, **{key: _PARSERS[key](key, value)})


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse `key = value` lines; '#' starts a comment; unknown keys fail fast."""
    cfg = replace(base) if base is not None else RunConfig()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BadValue(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        cfg = set_key(cfg, key.strip(), value.strip())
    return cfg


def apply_preset(cfg: RunConfig, name: str) -> RunConfig:
    if name not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise UnknownPreset(f"unknown preset {name!r}; known presets: {known}")
    return replace(cfg, **PRESETS[name])


def validate(cfg: RunConfig) -> RunConfig:
    """Cross-field checks; returns cfg unchanged on success."""
    resolve_spec(cfg.feature_set)
    if cfg.l < 1:
        raise BadValue(f"l: region half-width must be >= 1, got {cfg.l}")
    if cfg.metric not in ("euclidean", "logeuclidean", "affine"):
        raise BadValue(f"metric: expected euclidean|logeuclidean|affine, got {cfg.metric!r}")
    if cfg.weighting not in ("uniform", "saliency"):
        raise BadValue(f"weighting: expected uniform|saliency, got {cfg.weighting!r}")
    for key, w in (("w_s", cfg.w_s), ("w_t", cfg.w_t)):
        if not 0.0 <= w <= 1.0:
            raise BadValue(f"{key}: weight must lie in [0, 1], got {w}")
    if not 0.0 < cfg.sigma_frac < 0.5:
        raise BadValue(f"sigma_frac: must lie in (0, 0.5), got {cfg.sigma_frac}")
    if not 0.0 <= cfg.p_c <= 1.0:
        raise BadValue(f"p_c: must lie in [0, 1], got {cfg.p_c}")
    if cfg.mu < 1 or (cfg.p_c > 0 and cfg.mu < 2):
        raise BadValue("mu: population must be >= 2 when crossover is enabled")
    if cfg.generations < 0:
        raise BadValue("generations: must be >= 0")
    if not 0.0 < cfg.t_lb <= cfg.t_ub:
        raise BadValue("walk-length bounds need 0 < t_lb <= t_ub")
    if cfg.adapt_factor <= 1.0:
        raise BadValue("adapt_factor: must be > 1")
    if cfg.adapt_k < 1:
        raise BadValue("adapt_k: must be >= 1")
    if cfg.t_cr < 0:
        raise BadValue("t_cr: must be >= 0")
    if cfg.rebuild_every < 0:
        raise BadValue("rebuild_every: must be >= 0")
    return cfg


def _format_value(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(cfg: RunConfig) -> str:
    return "\n".join(f"{f.name} = {_format_value(getattr(cfg, f.name))}" for f in fields(cfg))


def write_manifest(path, cfg: RunConfig, checksums: dict, finals) -> None:
    """Write the resolved config plus (as comments) checksums and final stats.

    The manifest parses back through parse_config, so re-running from it
    reproduces the run.
    """
    lines = ["# composition run manifest (loadable with --config)", format_config(cfg), ""]
    for name, digest in checksums.items():
        lines.append(f"# sha256 {name} = {digest}")
    for slot, (fit, constraint) in enumerate(finals):
        lines.append(f"# final slot {slot}: fitness = {fit!r} constraint = {constraint}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
