"""Experiment runner: deterministic artifacts on disk plus a manifest.

Every random object in a run is keyed off the config seed through fixed
stream ids, so reruns of the same config are byte-identical:

    real dataset          (seed, 900)
    rejection-sampler init pilot  (seed, 800)
    exact_mh chain k      (seed, 100 + k)
    mhc_fixed chain k     (seed, 200 + k)
    mhc_random chain k    (seed, 300 + k)
    two_sample chain k    (seed, 400 + k)
    mcwm chain k          (seed, 500 + k)
    abc                   (seed, 600)

Each algorithm writes a chain CSV, a metadata JSON (the only artifact
holding timestamps), and a posterior-summary CSV.  The de-biasing
algorithm is a pure function of the fixed- and random-generator chains
and runs after they finish.  Worker processes rebuild everything from the
config dict, so a --jobs pool changes wall time, never artifact bytes.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd

from clfmh.diagnostics import bayes_factor, summarize
from clfmh.models.base import Dataset
from clfmh.rng import make_stream
from clfmh.samplers import (
    Chain,
    ChainConfig,
    debias,
    run_abc,
    run_exact_mh,
    run_mcwm,
    run_mhc,
    run_ricker_mcwm,
)

from clfmh.cli.config import ExperimentConfig

DATA_STREAM_ID = 900
ABC_INIT_STREAM_ID = 800
ABC_STREAM_ID = 600
STREAM_BASE = {
    "exact_mh": 100,
    "mhc_fixed": 200,
    "mhc_random": 300,
    "two_sample": 400,
    "mcwm": 500,
}
_MHC_MODE = {"mhc_fixed": "fixed", "mhc_random": "random", "two_sample": "two_sample"}


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def simulate_real(cfg: ExperimentConfig, model) -> Dataset:
    return model.simulate(cfg.theta_true(model), cfg.n, make_stream(cfg.seed, DATA_STREAM_ID))


def resolve_init(cfg: ExperimentConfig, model, prior, real) -> np.ndarray:
    """The chain's starting point: truth, explicit array, or pilot mean."""
    init = cfg.sampler["init"]
    if isinstance(init, str) and init == "truth":
        return cfg.theta_true(model)
    if isinstance(init, str):  # "abc": accepted-draw mean of a pilot
        abc = cfg.abc_settings
        pilot = run_abc(
            model, prior, real, abc["summary"], abc["m_draws"], abc["r"],
            cfg.seed, stream_id=ABC_INIT_STREAM_ID, m=cfg.n,
        )
        return pilot.accepted.mean(axis=0)
    return np.asarray(init, float)


def _abc_pseudo_chain(cfg: ExperimentConfig, model, prior, result) -> Chain:
    """Accepted draws wrapped in the chain container (no MCMC semantics)."""
    draws = result.accepted
    return Chain(
        draws=draws,
        log_lik_est=np.full(len(draws), np.nan),
        log_prior=np.array([prior.log_density(t) for t in draws]),
        accepted=np.ones(len(draws), bool),
        param_names=model.param_names,
        algorithm="abc",
        seed=cfg.seed,
        stream_id=ABC_STREAM_ID,
        meta={
            "model": model.name,
            "summary_kind": cfg.abc_settings["summary"],
            "m_draws": cfg.abc_settings["m_draws"],
            "r": cfg.abc_settings["r"],
            "threshold": float(result.accepted_distances[-1]),
            "n_exploded": result.meta.get("n_exploded", 0),
        },
    )


def _run_chain(cfg: ExperimentConfig, algo: str, k: int, init: np.ndarray) -> Chain:
    """One algorithm's chain k, rebuilt from scratch for determinism."""
    model = cfg.build_model()
    prior = cfg.build_prior()
    real = simulate_real(cfg, model)
    if algo == "abc":
        abc = cfg.abc_settings
        result = run_abc(
            model, prior, real, abc["summary"], abc["m_draws"], abc["r"],
            cfg.seed, stream_id=ABC_STREAM_ID, m=cfg.n,
        )
        return _abc_pseudo_chain(cfg, model, prior, result)

    sampler = cfg.sampler
    chain_cfg = ChainConfig(
        T=sampler["T"],
        init=init,
        seed=cfg.seed,
        stream_id=STREAM_BASE[algo] + k,
        m=cfg.m if algo in _MHC_MODE else 0,
        nrep=sampler["nrep"] if algo in _MHC_MODE else 1,
    )
    proposal = cfg.build_proposal()
    if algo == "exact_mh":
        return run_exact_mh(model, real, prior, proposal, chain_cfg)
    if algo in _MHC_MODE:
        return run_mhc(
            _MHC_MODE[algo], model, real, prior, proposal,
            cfg.classifier_spec(), cfg.feature_spec(), chain_cfg,
        )
    if algo == "mcwm":
        settings = cfg.mcwm_settings(cfg.n)
        if cfg.id == "cir":
            return run_mcwm(
                model, real, prior, proposal, settings["M"], chain_cfg, N=settings["N"]
            )
        return run_ricker_mcwm(model, real, prior, proposal, settings["K"], chain_cfg)
    raise ValueError(f"no runner for algorithm {algo!r}")


def _model_indicator_bf(cfg: ExperimentConfig, chain: Chain, burn_in: int) -> float | None:
    if cfg.id != "model_choice":
        return None
    post = chain.tail(burn_in) if burn_in else chain
    idx = chain.param_names.index("model")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # degenerate draws legitimately yield inf/0
        return float(bayes_factor(post.draws[:, idx]))


def _write_chain_artifacts(cfg: ExperimentConfig, algo: str, k: int,
                           chain: Chain, out_dir: Path) -> list[dict]:
    """Chain CSV + metadata JSON + summary CSV; returns manifest records."""
    # abc rows are accepted draws and the de-biased chain is built from
    # already-tailed legs, so neither has a burn-in left to drop
    burn_in = 0 if algo in ("abc", "mhc_debias") else cfg.burn_in
    stem = f"{algo}_chain{k}"
    chain_path = out_dir / f"{stem}.csv"
    chain.to_csv(chain_path)

    summary = summarize(chain, burn_in=burn_in)
    frame = summary.to_frame()
    bf = _model_indicator_bf(cfg, chain, burn_in)
    if bf is not None:
        frame = pd.concat(
            [frame, pd.DataFrame([{"param": "bayes_factor", "mean": bf}])],
            ignore_index=True,
        )
    summary_path = out_dir / f"{stem}_summary.csv"
    frame.to_csv(summary_path, index=False)

    meta = {
        "experiment": cfg.id,
        "scale": cfg.scale,
        "config_sha256": cfg.sha256(),
        "chain_index": k,
        "burn_in": burn_in,
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        **chain.metadata(),
    }
    if bf is not None:
        meta["bayes_factor"] = bf if math.isfinite(bf) else repr(bf)
    meta_path = out_dir / f"{stem}_meta.json"
    meta_path.write_text(json.dumps(meta, indent=2, default=str) + "\n")

    return [
        {"path": chain_path.name, "kind": "chain", "algorithm": algo,
         "chain": k, "sha256": _sha256(chain_path)},
        {"path": summary_path.name, "kind": "summary", "algorithm": algo,
         "chain": k, "sha256": _sha256(summary_path)},
        {"path": meta_path.name, "kind": "metadata", "algorithm": algo,
         "chain": k, "sha256": None},  # holds timestamps; excluded from content hashing
    ]


def _job(raw: dict, algo: str, k: int, init_list: list, out_dir_str: str) -> list[dict]:
    cfg = ExperimentConfig.from_dict(raw)
    chain = _run_chain(cfg, algo, k, np.asarray(init_list, float))
    return _write_chain_artifacts(cfg, algo, k, chain, Path(out_dir_str))


def _debias_artifacts(cfg: ExperimentConfig, k: int, out_dir: Path) -> list[dict]:
    """Combine the written fixed/random legs into the de-biased sample."""
    legs = []
    for leg in ("mhc_fixed", "mhc_random"):
        path = out_dir / f"{leg}_chain{k}.csv"
        if not path.exists():
            raise FileNotFoundError(f"de-biasing needs {path.name}, which was not produced")
        legs.append(Chain.from_csv(path, algorithm=leg, seed=cfg.seed,
                                   stream_id=STREAM_BASE[leg] + k))
    burn = cfg.burn_in
    combined = debias(legs[0].tail(burn), legs[1].tail(burn))
    return _write_chain_artifacts(cfg, "mhc_debias", k, combined, out_dir)


def run_experiment(cfg: ExperimentConfig, out_dir, jobs: int = 1) -> dict:
    """Execute every configured algorithm; write artifacts and manifest.

    Returns the manifest dict (also written to manifest.json).  Partial
    results of a failing run are kept, with the manifest marked
    incomplete and the failures listed.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    model = cfg.build_model()
    prior = cfg.build_prior()
    real = simulate_real(cfg, model)
    try:
        init = resolve_init(cfg, model, prior, real)
    except Exception as exc:  # noqa: BLE001 - reported in manifest
        manifest = {
            "experiment": cfg.id,
            "scale": cfg.scale,
            "seed": cfg.seed,
            "config_sha256": cfg.sha256(),
            "complete": False,
            "errors": [{"algorithm": "init", "chain": None, "error": repr(exc)}],
            "artifacts": [],
        }
        (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
        return manifest

    jobs_list = []
    for algo in cfg.algorithms:
        if algo == "mhc_debias":
            continue  # post-processing of the two generator chains
        n_chains = 1 if algo == "abc" else cfg.chains
        jobs_list.extend((algo, k) for k in range(n_chains))

    artifacts: list[dict] = []
    errors: list[dict] = []
    init_list = [float(v) for v in init]
    if jobs > 1 and len(jobs_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                pool.submit(_job, cfg.raw, algo, k, init_list, str(out_dir)): (algo, k)
                for algo, k in jobs_list
            }
            for future, (algo, k) in futures.items():
                try:
                    artifacts.extend(future.result())
                except Exception as exc:  # noqa: BLE001 - reported in manifest
                    errors.append({"algorithm": algo, "chain": k, "error": repr(exc)})
    else:
        for algo, k in jobs_list:
            try:
                artifacts.extend(_job(cfg.raw, algo, k, init_list, str(out_dir)))
            except Exception as exc:  # noqa: BLE001 - reported in manifest
                errors.append({"algorithm": algo, "chain": k, "error": repr(exc)})

    if "mhc_debias" in cfg.algorithms:
        for k in range(cfg.chains):
            try:
                artifacts.extend(_debias_artifacts(cfg, k, out_dir))
            except Exception as exc:  # noqa: BLE001 - reported in manifest
                errors.append({"algorithm": "mhc_debias", "chain": k, "error": repr(exc)})

    artifacts.sort(key=lambda rec: rec["path"])
    manifest = {
        "experiment": cfg.id,
        "scale": cfg.scale,
        "seed": cfg.seed,
        "config_sha256": cfg.sha256(),
        "init": init_list,
        "complete": not errors,
        "errors": errors,
        "artifacts": artifacts,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
