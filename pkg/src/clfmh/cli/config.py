"""Experiment configuration: TOML parsing, defaults, validation, builders.

A configuration is a plain nested dict with a fixed table layout:

    [experiment]  id, scale, seed, algorithms
    [model]       testbed constructor arguments (experiment-specific)
    [data]        n (replicates), theta_true (optional override)
    [sampler]     T, burn_in, m, nrep, chains, init ("truth" | "abc" | array)
    [mcwm]        M, N (bridge estimator) or K (latent-path estimator)
    [abc]         m_draws, r, summary
    [classifier]  kind plus any classifier-spec field
    [features]    kind plus any feature-spec field
    [prior]       kind ("default" or an explicit prior) plus its arguments
    [proposal]    kind plus its arguments

Missing keys take the full-scale defaults below; the shipped preset files
spell every key out anyway so that reduced-scale settings live on disk,
not in code.  ``validate_config`` checks every cross-field constraint and
returns the complete list of problems, each prefixed with the offending
field path.
"""

from __future__ import annotations

import copy
import hashlib
import json
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - version shim
    import tomli as tomllib

from clfmh.classifiers import ClassifierSpec
from clfmh.errors import SupportError
from clfmh.features import FeatureSpec
from clfmh.models import MODEL_CLASSES
from clfmh.samplers import (
    CIRImproper,
    DiscreteFlipPlusRW,
    FlatImproper,
    GaussianRW,
    LogGaussianRW,
    ModelChoicePrior,
    NormalInverseGamma,
    PerCoordMixed,
    UniformBox,
    UniformWindowBlocked,
)

EXPERIMENTS = ("normal_ls", "ricker", "lotka_volterra", "cir", "model_choice")
SCALES = ("paper", "desk")
ALGORITHMS = (
    "mhc_fixed",
    "mhc_random",
    "mhc_debias",
    "exact_mh",
    "mcwm",
    "abc",
    "two_sample",
)

# Which testbed backs each experiment.
MODEL_NAME = {
    "normal_ls": "normal_ls",
    "ricker": "ricker",
    "lotka_volterra": "lotka_volterra",
    "cir": "cir",
    "model_choice": "gauss_choice",
}

# Experiments with a conditional-latent structure the double-refresh
# kernel can exploit (diffusion bridge / latent-path average).
MCWM_EXPERIMENTS = ("cir", "ricker")

_MODEL_KEYS = {
    "normal_ls": (),
    "ricker": ("T",),
    "lotka_volterra": ("horizon", "dt_record", "x0", "y0", "cap"),
    "cir": ("T", "delta", "x0"),
    "model_choice": ("n_obs",),
}

_PRIOR_KEYS = {
    "default": (),
    "uniform_box": ("lows", "highs"),
    "normal_inverse_gamma": ("mu0", "lam", "a", "b"),
    "flat_improper": ("lows",),
    "cir_improper": (),
    "model_choice": (),
}

_PROPOSAL_KEYS = {
    "gaussian_rw": ("scales",),
    "log_gaussian_rw": ("scales",),
    "uniform_window_blocked": ("window_ab", "window_sigma", "p_joint"),
    "per_coord_mixed": ("n_obs",),
    "discrete_flip_plus_rw": ("flip_prob", "scale"),
}

_CLASSIFIER_KEYS = tuple(f.name for f in ClassifierSpec.__dataclass_fields__.values())
_FEATURE_KEYS = tuple(f.name for f in FeatureSpec.__dataclass_fields__.values())

# Full-scale defaults per experiment: sample sizes, chain lengths, and the
# classifier/feature/proposal combinations each testbed is analyzed with.
_DEFAULTS: dict[str, dict[str, dict[str, Any]]] = {
    "normal_ls": {
        "experiment": {"algorithms": ["exact_mh", "mhc_fixed", "mhc_random", "mhc_debias"]},
        "model": {},
        "data": {"n": 5000},
        "sampler": {"T": 500, "burn_in": 100},
        "classifier": {"kind": "logistic_l1_cv", "lambdas": [1e-9]},
        "features": {"kind": "poly2"},
        "proposal": {"kind": "gaussian_rw", "scales": [0.03, 0.05]},
        "abc": {"m_draws": 2000, "r": 200, "summary": "sum"},
    },
    "cir": {
        "experiment": {"algorithms": ["exact_mh", "mhc_random", "mcwm"]},
        "model": {"T": 500, "delta": 1.0, "x0": 0.1},
        "data": {"n": 100},
        "sampler": {"T": 5000, "burn_in": 1000},
        "classifier": {"kind": "logistic_l1_cv"},
        "features": {"kind": "summary"},
        "proposal": {
            "kind": "uniform_window_blocked",
            "window_ab": 0.01,
            "window_sigma": 0.005,
            "p_joint": 2.0 / 3.0,
        },
        "mcwm": {"M": 2, "N": 4},
        "abc": {"m_draws": 2000, "r": 100, "summary": "summary"},
    },
    "lotka_volterra": {
        "experiment": {"algorithms": ["mhc_random", "abc"]},
        "model": {"horizon": 20.0, "dt_record": 0.1, "x0": 50, "y0": 100},
        "data": {"n": 20},
        "sampler": {"T": 5000, "burn_in": 1000, "init": "abc"},
        "classifier": {"kind": "random_forest", "n_trees": 500},
        "features": {"kind": "summary"},
        "proposal": {"kind": "log_gaussian_rw", "scales": [0.05, 0.05, 0.05, 0.05]},
        "abc": {"m_draws": 1000, "r": 50, "summary": "summary"},
    },
    "ricker": {
        "experiment": {"algorithms": ["mhc_fixed", "mhc_random", "mhc_debias", "mcwm"]},
        "model": {"T": 20},
        "data": {"n": 300},
        "sampler": {"T": 5000, "burn_in": 1000},
        "classifier": {
            "kind": "neural_net",
            "hidden": 50,
            "epochs": 500,
            "learning_rate": 0.01,
            "momentum": 0.9,
        },
        "features": {"kind": "summary"},
        "proposal": {"kind": "per_coord_mixed", "n_obs": 300},
        "mcwm": {"K": 6000},  # 20 x n
        "abc": {"m_draws": 2000, "r": 100, "summary": "summary"},
    },
    "model_choice": {
        "experiment": {"algorithms": ["exact_mh", "mhc_fixed", "abc"]},
        "model": {"n_obs": 500},
        "data": {"n": 500},
        "sampler": {"T": 700, "burn_in": 200},
        "classifier": {"kind": "logistic_l1_cv", "lambdas": [1e-9]},
        "features": {"kind": "poly2"},
        "proposal": {"kind": "discrete_flip_plus_rw", "flip_prob": 0.5, "scale": 0.1},
        "abc": {"m_draws": 2000, "r": 200, "summary": "sum"},
    },
}

_BASE_SAMPLER = {"burn_in": 0, "m": None, "nrep": 1, "chains": 1, "init": "truth"}
_BASE_MCWM = {"M": 2, "N": None, "K": None}


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for table, entries in override.items():
        if isinstance(entries, dict):
            out.setdefault(table, {}).update(copy.deepcopy(entries))
        else:
            out[table] = copy.deepcopy(entries)
    return out


def parse_override(expr: str) -> tuple[list[str], Any]:
    """Parse one ``a.b=value`` override; values use TOML literal syntax."""
    if "=" not in expr:
        raise ValueError(f"override {expr!r} must look like table.key=value")
    path, _, value = expr.partition("=")
    keys = [k.strip() for k in path.strip().split(".")]
    if not all(keys) or len(keys) < 2:
        raise ValueError(f"override path {path!r} must name table.key")
    try:
        parsed = tomllib.loads(f"v = {value.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        parsed = value.strip()
    return keys, parsed


def apply_overrides(raw: dict, overrides) -> dict:
    out = copy.deepcopy(raw)
    for expr in overrides:
        keys, value = parse_override(expr)
        node = out
        for k in keys[:-1]:
            node = node.setdefault(k, {})
            if not isinstance(node, dict):
                raise ValueError(f"override path {'.'.join(keys)!r} crosses a non-table")
        node[keys[-1]] = value
    return out


def load_config(path, overrides=(), seed=None) -> dict:
    """Parse a TOML file, apply defaults and overrides, return the dict."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    raw = apply_overrides(raw, overrides)
    if seed is not None:
        raw.setdefault("experiment", {})["seed"] = int(seed)
    return resolve_defaults(raw)


def resolve_defaults(raw: dict) -> dict:
    """Overlay experiment defaults beneath the given config dict."""
    exp_id = raw.get("experiment", {}).get("id")
    base: dict[str, dict] = {
        "experiment": {"scale": "desk", "seed": 0},
        "data": {},
        "sampler": dict(_BASE_SAMPLER),
        "mcwm": dict(_BASE_MCWM),
        "prior": {"kind": "default"},
    }
    if exp_id in _DEFAULTS:
        base = _merge(base, _DEFAULTS[exp_id])
    return _merge(base, raw)


def config_sha256(raw: dict) -> str:
    """Content hash of the resolved configuration."""
    return hashlib.sha256(
        json.dumps(raw, sort_keys=True, default=str).encode()
    ).hexdigest()


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _check_keys(errors, raw, table, allowed):
    for key in raw.get(table, {}) or {}:
        if key not in allowed:
            errors.append(f"{table}.{key}: unknown key (allowed: {', '.join(allowed) or 'none'})")


def _positive_int(errors, raw, table, key, minimum=1):
    value = raw.get(table, {}).get(key)
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        errors.append(f"{table}.{key}: must be an integer >= {minimum}, got {value!r}")
        return None
    return value


def validate_config(raw: dict) -> list[str]:
    """Every constraint violation in the config, named by field path."""
    errors: list[str] = []
    exp = raw.get("experiment", {})
    exp_id = exp.get("id")
    if exp_id not in EXPERIMENTS:
        errors.append(
            f"experiment.id: unknown experiment {exp_id!r} (choose from {', '.join(EXPERIMENTS)})"
        )
        return errors  # everything downstream depends on the experiment
    if exp.get("scale") not in SCALES:
        errors.append(f"experiment.scale: must be one of {SCALES}, got {exp.get('scale')!r}")
    if not isinstance(exp.get("seed"), int) or isinstance(exp.get("seed"), bool) or exp["seed"] < 0:
        errors.append(f"experiment.seed: must be a nonnegative integer, got {exp.get('seed')!r}")

    _check_keys(errors, raw, "experiment", ("id", "scale", "seed", "algorithms"))
    _check_keys(errors, raw, "model", _MODEL_KEYS[exp_id])
    _check_keys(errors, raw, "data", ("n", "theta_true"))
    _check_keys(errors, raw, "sampler", ("T", "burn_in", "m", "nrep", "chains", "init"))
    _check_keys(errors, raw, "mcwm", ("M", "N", "K"))
    _check_keys(errors, raw, "abc", ("m_draws", "r", "summary"))
    _check_keys(errors, raw, "classifier", _CLASSIFIER_KEYS)
    _check_keys(errors, raw, "features", _FEATURE_KEYS)
    _check_keys(errors, raw, "proposal", ("kind",) + sum(_PROPOSAL_KEYS.values(), ()))
    _check_keys(errors, raw, "prior", ("kind",) + sum(_PRIOR_KEYS.values(), ()))

    algorithms = exp.get("algorithms")
    if not isinstance(algorithms, list) or not algorithms:
        errors.append("experiment.algorithms: must be a nonempty list")
        algorithms = []
    for algo in algorithms:
        if algo not in ALGORITHMS:
            errors.append(
                f"experiment.algorithms: unknown algorithm {algo!r} "
                f"(choose from {', '.join(ALGORITHMS)})"
            )
    algorithms = [a for a in algorithms if a in ALGORITHMS]

    # Model and data.
    model = None
    try:
        model = _build_model(exp_id, raw.get("model", {}))
    except (TypeError, ValueError) as exc:
        errors.append(f"model: {exc}")
    n = _positive_int(errors, raw, "data", "n")
    theta_true = raw.get("data", {}).get("theta_true")
    if theta_true is not None and model is not None:
        try:
            model.validate_theta(np.asarray(theta_true, float))
        except (SupportError, ValueError) as exc:
            errors.append(f"data.theta_true: {exc}")

    # Prior (needed for algorithm cross-checks).
    prior = None
    prior_kind = raw.get("prior", {}).get("kind", "default")
    if prior_kind not in _PRIOR_KEYS:
        errors.append(
            f"prior.kind: unknown prior {prior_kind!r} (choose from {', '.join(_PRIOR_KEYS)})"
        )
    else:
        try:
            prior = _build_prior(exp_id, raw.get("prior", {}))
        except (TypeError, ValueError) as exc:
            errors.append(f"prior: {exc}")
    if prior is not None and model is not None and prior.dim != model.dim:
        errors.append(
            f"prior.kind: prior dimension {prior.dim} != model dimension {model.dim}"
        )

    # Algorithm cross-field rules.
    if model is not None:
        if "exact_mh" in algorithms and not model.has_oracle:
            errors.append(
                f"experiment.algorithms: exact_mh requires an exact likelihood; "
                f"the {exp_id} testbed has none"
            )
    if "mcwm" in algorithms and exp_id not in MCWM_EXPERIMENTS:
        errors.append(
            f"experiment.algorithms: mcwm not available for {exp_id}: "
            f"no conditional-latent structure"
        )
    if "abc" in algorithms and prior is not None and not prior.proper:
        errors.append(
            f"experiment.algorithms: abc requires proper prior "
            f"(prior.kind = {prior.kind!r} is improper)"
        )
    if "mhc_debias" in algorithms:
        if not {"mhc_fixed", "mhc_random"} <= set(algorithms):
            errors.append(
                "experiment.algorithms: mhc_debias combines the mhc_fixed and "
                "mhc_random chains; list both"
            )
        if exp_id == "model_choice":
            errors.append(
                "experiment.algorithms: mhc_debias is undefined for the "
                "model_choice experiment (discrete model indicator)"
            )

    # Sampler block.
    t = _positive_int(errors, raw, "sampler", "T")
    burn = _positive_int(errors, raw, "sampler", "burn_in", minimum=0)
    if t is not None and burn is not None and burn >= t:
        errors.append(f"sampler.burn_in: must be < sampler.T = {t}, got {burn}")
    _positive_int(errors, raw, "sampler", "nrep")
    _positive_int(errors, raw, "sampler", "chains")
    m = raw.get("sampler", {}).get("m")
    if m is not None and (not isinstance(m, int) or isinstance(m, bool) or m < 1):
        errors.append(f"sampler.m: must be an integer >= 1 or omitted, got {m!r}")

    init = raw.get("sampler", {}).get("init", "truth")
    if isinstance(init, str):
        if init not in ("truth", "abc"):
            errors.append(f"sampler.init: must be 'truth', 'abc', or an array, got {init!r}")
        elif init == "abc" and prior is not None and not prior.proper:
            errors.append(
                "sampler.init: abc requires proper prior to draw the pilot from "
                f"(prior.kind = {prior.kind!r})"
            )
    else:
        try:
            init_arr = np.asarray(init, float)
            if model is not None:
                model.validate_theta(init_arr)
            if prior is not None and not prior.in_support(init_arr):
                errors.append(f"sampler.init: {init} outside prior support")
        except (SupportError, ValueError) as exc:
            errors.append(f"sampler.init: {exc}")

    # Estimator blocks, checked when the algorithms that read them are on.
    if "mcwm" in algorithms and exp_id in MCWM_EXPERIMENTS:
        if exp_id == "cir":
            mm = raw.get("mcwm", {}).get("M", 2)
            if not isinstance(mm, int) or mm < 2:
                errors.append(f"mcwm.M: bridge estimator needs an integer M >= 2, got {mm!r}")
            nn = raw.get("mcwm", {}).get("N")
            if nn is not None and (not isinstance(nn, int) or nn < 1):
                errors.append(f"mcwm.N: must be an integer >= 1 or omitted, got {nn!r}")
        if exp_id == "ricker":
            kk = raw.get("mcwm", {}).get("K")
            if kk is not None and (not isinstance(kk, int) or kk < 1):
                errors.append(f"mcwm.K: must be an integer >= 1, got {kk!r}")
    abc_needed = "abc" in algorithms or init == "abc"
    if abc_needed:
        md = _positive_int(errors, raw, "abc", "m_draws")
        r = _positive_int(errors, raw, "abc", "r")
        if md is not None and r is not None and r > md:
            errors.append(f"abc.r: keep count {r} exceeds abc.m_draws = {md}")
        kind = raw.get("abc", {}).get("summary")
        if kind not in ("summary", "sum"):
            errors.append(f"abc.summary: must be 'summary' or 'sum', got {kind!r}")

    # Classifier / features.
    cspec = None
    try:
        cspec = _build_classifier(raw.get("classifier", {}))
    except (TypeError, ValueError) as exc:
        errors.append(f"classifier: {exc}")
    fspec = None
    try:
        fspec = _build_features(raw.get("features", {}))
    except (TypeError, ValueError) as exc:
        errors.append(f"features: {exc}")
    if cspec is not None and cspec.kind == "oracle":
        if model is not None and not model.has_oracle:
            errors.append(
                f"classifier.kind: the oracle discriminator needs an exact-density "
                f"model; the {exp_id} testbed has none"
            )
        if fspec is not None and fspec.kind != "raw":
            errors.append(
                f"classifier.kind: oracle classifier consumes raw rows only "
                f"(features.kind = {fspec.kind!r})"
            )

    # Proposal.
    prop_kind = raw.get("proposal", {}).get("kind")
    if prop_kind not in _PROPOSAL_KEYS:
        errors.append(
            f"proposal.kind: unknown proposal {prop_kind!r} "
            f"(choose from {', '.join(_PROPOSAL_KEYS)})"
        )
    else:
        extra = set(raw.get("proposal", {})) - {"kind"} - set(_PROPOSAL_KEYS[prop_kind])
        for key in sorted(extra):
            errors.append(f"proposal.{key}: not a parameter of {prop_kind!r}")
        fixed_dim = {
            "uniform_window_blocked": 3,
            "per_coord_mixed": 3,
            "discrete_flip_plus_rw": 2,
        }.get(prop_kind)
        if model is not None and fixed_dim is not None and model.dim != fixed_dim:
            errors.append(
                f"proposal.kind: {prop_kind} proposes {fixed_dim} coordinates "
                f"but the {exp_id} testbed has {model.dim}"
            )
        try:
            prop = _build_proposal(raw.get("proposal", {}))
            if model is not None and hasattr(prop, "scales") and len(prop.scales) != model.dim:
                errors.append(
                    f"proposal.scales: got {len(prop.scales)} scales for a "
                    f"{model.dim}-parameter model"
                )
        except (TypeError, ValueError) as exc:
            errors.append(f"proposal: {exc}")

    return errors


# ---------------------------------------------------------------------------
# Builders (assume a validated config)
# ---------------------------------------------------------------------------


def _build_model(exp_id: str, model_table: dict):
    return MODEL_CLASSES[MODEL_NAME[exp_id]](**(model_table or {}))


def _build_prior(exp_id: str, prior_table: dict):
    kind = prior_table.get("kind", "default")
    if kind == "default":
        from clfmh.samplers import default_prior

        return default_prior(MODEL_NAME[exp_id])
    args = {k: v for k, v in prior_table.items() if k != "kind"}
    cls = {
        "uniform_box": UniformBox,
        "normal_inverse_gamma": NormalInverseGamma,
        "flat_improper": FlatImproper,
        "cir_improper": CIRImproper,
        "model_choice": ModelChoicePrior,
    }[kind]
    if kind == "flat_improper":
        lows = args.pop("lows", None)
        dim = MODEL_CLASSES[MODEL_NAME[exp_id]]().dim
        return cls(dim, lows=lows, **args)
    return cls(**args)


def _build_proposal(prop_table: dict):
    kind = prop_table["kind"]
    args = {k: v for k, v in prop_table.items() if k != "kind"}
    cls = {
        "gaussian_rw": GaussianRW,
        "log_gaussian_rw": LogGaussianRW,
        "uniform_window_blocked": UniformWindowBlocked,
        "per_coord_mixed": PerCoordMixed,
        "discrete_flip_plus_rw": DiscreteFlipPlusRW,
    }[kind]
    return cls(**args)


def _build_classifier(table: dict) -> ClassifierSpec:
    args = dict(table or {})
    if "lambdas" in args and args["lambdas"] is not None:
        args["lambdas"] = tuple(args["lambdas"])
    return ClassifierSpec(**args)


def _build_features(table: dict) -> FeatureSpec:
    args = dict(table or {})
    if "acf_lags" in args:
        args["acf_lags"] = tuple(args["acf_lags"])
    return FeatureSpec(**args)


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated configuration plus builders for its runtime objects."""

    raw: dict

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        errors = validate_config(raw)
        if errors:
            raise ValueError("invalid configuration:\n" + "\n".join(errors))
        return cls(raw=copy.deepcopy(raw))

    # -- plain accessors ----------------------------------------------------
    @property
    def id(self) -> str:
        return self.raw["experiment"]["id"]

    @property
    def scale(self) -> str:
        return self.raw["experiment"]["scale"]

    @property
    def seed(self) -> int:
        return self.raw["experiment"]["seed"]

    @property
    def algorithms(self) -> list[str]:
        return list(self.raw["experiment"]["algorithms"])

    @property
    def n(self) -> int:
        return self.raw["data"]["n"]

    @property
    def sampler(self) -> dict:
        return dict(self.raw["sampler"])

    @property
    def m(self) -> int:
        return self.raw["sampler"].get("m") or self.n

    @property
    def chains(self) -> int:
        return self.raw["sampler"]["chains"]

    @property
    def burn_in(self) -> int:
        return self.raw["sampler"]["burn_in"]

    @property
    def abc_settings(self) -> dict:
        return dict(self.raw["abc"])

    def mcwm_settings(self, n: int) -> dict:
        table = self.raw.get("mcwm", {})
        m = table.get("M", 2)
        return {
            "M": m,
            "N": table.get("N") or m * m,
            "K": table.get("K") or 20 * n,
        }

    # -- builders -----------------------------------------------------------
    def build_model(self):
        return _build_model(self.id, self.raw.get("model", {}))

    def build_prior(self):
        return _build_prior(self.id, self.raw.get("prior", {}))

    def build_proposal(self):
        return _build_proposal(self.raw["proposal"])

    def classifier_spec(self) -> ClassifierSpec:
        return _build_classifier(self.raw.get("classifier", {}))

    def feature_spec(self) -> FeatureSpec:
        return _build_features(self.raw.get("features", {}))

    def theta_true(self, model) -> np.ndarray:
        override = self.raw.get("data", {}).get("theta_true")
        if override is not None:
            return model.validate_theta(np.asarray(override, float))
        return np.asarray(model.theta_true, float)

    def sha256(self) -> str:
        return config_sha256(self.raw)
