"""Scenario presets and scenario-file loading.

The preset table is the single source of truth for the four studied setups.
Efficiencies given as an overall detection level (60%, 30%) are modeled as
detector efficiency epsilon = overall / T with eta1 = 1, except for the
overlap study where the 30% acts before the displacement (eta1 = 0.3).
"""

from __future__ import annotations

import json
from dataclasses import replace

import numpy as np

from .detector import TmdConfig
from .montecarlo import ExperimentScenario

PRESET_NAMES = ("case1", "case2a", "case2b", "case3-fock1", "case3-fock2",
                "case4", "custom")

_DEFAULT_GRID = tuple(np.round(np.arange(0.0, 2.0001, 0.1), 10))


def _base(**kw) -> ExperimentScenario:
    defaults = dict(
        input_fock_m=1,
        eta1=1.0,
        T=0.95,
        epsilon=1.0,
        overlap_M=1.0,
        tmd_generation=TmdConfig.balanced(3),
        tmd_reconstruction=TmdConfig.balanced(3),
        alpha_grid=_DEFAULT_GRID,
        events_per_run=10**6,
        runs=10,
        rng_seed=0,
        reliability_threshold=-0.001,
        overflow_limit=0.025,
    )
    defaults.update(kw)
    return ExperimentScenario(**defaults)


def preset(name: str) -> ExperimentScenario:
    """Build the scenario for a named preset."""
    if name == "case1":
        return _base()
    if name == "case2a":
        return _base(epsilon=0.6 / 0.95,
                     tmd_generation=TmdConfig.uniform(3, 0.45))
    if name == "case2b":
        return _base(epsilon=0.6 / 0.95,
                     tmd_generation=TmdConfig.uniform(4, 0.45),
                     tmd_reconstruction=TmdConfig.balanced(4))
    if name == "case3-fock1":
        return _base(epsilon=0.3 / 0.95,
                     tmd_generation=TmdConfig.uniform(3, 0.45))
    if name == "case3-fock2":
        return _base(input_fock_m=2, epsilon=0.3 / 0.95,
                     tmd_generation=TmdConfig.uniform(3, 0.45))
    if name == "case4":
        return _base(eta1=0.3, overlap_M=0.5, reliability_threshold=-0.003)
    raise ValueError(f"unknown preset {name!r}; expected one of "
                     f"{', '.join(PRESET_NAMES[:-1])}")


def preset_table() -> dict:
    """Physics fields of every preset, for the config-dump golden check."""
    out = {}
    for name in PRESET_NAMES[:-1]:
        scn = preset(name)
        out[name] = scenario_to_dict(scn)
    return out


def scenario_to_dict(scn: ExperimentScenario) -> dict:
    return {
        "input_fock_m": scn.input_fock_m,
        "eta1": scn.eta1,
        "T": scn.T,
        "epsilon": scn.epsilon,
        "overlap_M": scn.overlap_M,
        "generation_stages": scn.tmd_generation.stages,
        "generation_ratios": list(scn.tmd_generation.coupler_ratios),
        "reconstruction_stages": scn.tmd_reconstruction.stages,
        "reconstruction_ratios": list(scn.tmd_reconstruction.coupler_ratios),
        "bins": scn.tmd_reconstruction.bins,
        "alpha_grid": list(scn.alpha_grid),
        "events_per_run": scn.events_per_run,
        "runs": scn.runs,
        "rng_seed": scn.rng_seed,
        "reliability_threshold": scn.reliability_threshold,
        "overflow_limit": scn.overflow_limit,
    }


def scenario_from_dict(doc: dict) -> ExperimentScenario:
    """Build a scenario from flat keys, optionally starting from a preset."""
    doc = dict(doc)
    name = doc.pop("preset", "custom")
    if name != "custom":
        scn = preset(name)
    else:
        required = {"input_fock_m", "eta1", "T", "epsilon", "overlap_M",
                    "generation_stages", "reconstruction_stages"}
        missing = required - doc.keys()
        if missing:
            raise ValueError("custom scenario missing fields: "
                             + ", ".join(sorted(missing)))
        scn = _base()

    tmd_kw = {}
    if "generation_stages" in doc or "generation_ratios" in doc:
        stages = int(doc.pop("generation_stages", scn.tmd_generation.stages))
        ratios = doc.pop("generation_ratios", None)
        if ratios is None:
            ratios = (0.5,) * stages
        tmd_kw["tmd_generation"] = TmdConfig(stages, tuple(ratios))
    if "reconstruction_stages" in doc or "reconstruction_ratios" in doc:
        stages = int(doc.pop("reconstruction_stages", scn.tmd_reconstruction.stages))
        ratios = doc.pop("reconstruction_ratios", None)
        if ratios is None:
            ratios = (0.5,) * stages
        tmd_kw["tmd_reconstruction"] = TmdConfig(stages, tuple(ratios))

    simple = {}
    for key in ("input_fock_m", "eta1", "T", "epsilon", "overlap_M",
                "alpha_grid", "events_per_run", "runs", "rng_seed",
                "reliability_threshold", "overflow_limit"):
        if key in doc:
            simple[key] = doc.pop(key)
    doc.pop("bins", None)
    if doc:
        raise ValueError("unknown scenario fields: " + ", ".join(sorted(doc)))
    if "alpha_grid" in simple:
        simple["alpha_grid"] = tuple(simple["alpha_grid"])
    return replace(scn, **tmd_kw, **simple)


def load_scenario_file(path) -> ExperimentScenario:
    """Read a scenario from a flat-key JSON document."""
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError("scenario file must hold a JSON object")
    return scenario_from_dict(doc)
