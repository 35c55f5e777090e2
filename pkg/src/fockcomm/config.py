"""Declarative experiment configuration.

Experiments are described by a TOML file with sections [state], [optics],
[detector.alice], [detector.bob], [bell], [qubit], [sweep], [run] and
[output]; any key can be overridden on the command line as
``--section.key=value``.  Unknown keys are rejected with the offending key
named in the error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .detectors import (DetectorModel, parity_effects, presence_effects,
                        qubit_effects, sva_effects, tke_effects)
from .optics import BeamSplitterModel
from .states import SingleModeSpec

EXPERIMENT_KINDS = ("gyni", "gyni-sweep", "bell-sweep", "theorem", "prepare-check", "validate")

_SECTION_KEYS = {
    "experiment": {"kind"},
    "state": {"kind", "alpha", "alpha_im", "alpha2", "r", "theta", "n", "coeffs", "lambda", "phi"},
    "optics": {"model", "eta"},
    "detector": {"type", "kappa", "saturation", "grouping", "n_multiplex", "nu",
                 "theta", "epsilon", "swap_outcomes"},
    "bell": {"r", "phi1", "phi2", "n_phi"},
    "qubit": {"lambda", "phi", "n_theta"},
    "sweep": set(),  # validated per-axis
    "run": {"seed", "jobs", "cutoff", "cutoff_tol", "strict"},
    "output": {"csv", "manifest", "directory"},
}

_AXIS_KEYS = {"name", "start", "stop", "step"}
SWEEP_AXES = ("eta", "alpha2", "alpha", "r", "kappa", "nu", "saturation",
              "phi1", "phi2", "lambda", "theta", "theta_prime")


class ConfigError(ValueError):
    """Configuration problem; the message names the offending key."""


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.name not in SWEEP_AXES:
            raise ConfigError(f"sweep.axis.name: unknown axis {self.name!r}")
        if self.step <= 0:
            raise ConfigError(f"sweep.axis.step: must be > 0 (axis {self.name!r})")
        if self.start > self.stop:
            raise ConfigError(f"sweep.axis.start: start > stop (axis {self.name!r})")

    def values(self):
        out = []
        k = 0
        while True:
            v = self.start + k * self.step
            if v > self.stop + 1e-9 * max(1.0, abs(self.stop)):
                break
            out.append(min(round(v, 12), self.stop))
            k += 1
        return out


@dataclass
class ExperimentConfig:
    kind: str
    state: dict = field(default_factory=dict)
    optics: dict = field(default_factory=dict)
    detector_alice: dict = field(default_factory=dict)
    detector_bob: dict = field(default_factory=dict)
    bell: dict = field(default_factory=dict)
    qubit: dict = field(default_factory=dict)
    sweep_axes: tuple = ()
    seed: int = 0
    jobs: int = 1
    cutoff: int | None = None
    cutoff_tol: float | None = None
    strict: bool = False
    csv_path: str = "results.csv"
    manifest_path: str | None = None

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"experiment.kind: unknown kind {self.kind!r}")
        if self.kind.endswith("sweep") and not self.sweep_axes:
            raise ConfigError("sweep.axis: sweep experiments need at least one axis")
        if self.cutoff_tol is not None and not (0.0 < self.cutoff_tol <= 1e-6):
            raise ConfigError("run.cutoff_tol: must lie in (0, 1e-6]")
        if self.jobs < 1:
            raise ConfigError("run.jobs: must be >= 1")


def _check_keys(section: str, data: dict, allowed: set):
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{section}.{key}: unknown key")


def parse_config(data: dict) -> ExperimentConfig:
    for section in data:
        if section not in ("experiment", "state", "optics", "detector", "bell",
                           "qubit", "sweep", "run", "output"):
            raise ConfigError(f"{section}: unknown section")
    exp = data.get("experiment", {})
    _check_keys("experiment", exp, _SECTION_KEYS["experiment"])
    kind = exp.get("kind")
    if kind is None:
        raise ConfigError("experiment.kind: missing")

    state = dict(data.get("state", {}))
    _check_keys("state", state, _SECTION_KEYS["state"])
    optics = dict(data.get("optics", {}))
    _check_keys("optics", optics, _SECTION_KEYS["optics"])

    det = data.get("detector", {})
    for party in det:
        if party not in ("alice", "bob"):
            raise ConfigError(f"detector.{party}: unknown key")
    det_a = dict(det.get("alice", {}))
    det_b = dict(det.get("bob", {}))
    _check_keys("detector.alice", det_a, _SECTION_KEYS["detector"])
    _check_keys("detector.bob", det_b, _SECTION_KEYS["detector"])

    bell_cfg = dict(data.get("bell", {}))
    _check_keys("bell", bell_cfg, _SECTION_KEYS["bell"])
    qubit = dict(data.get("qubit", {}))
    _check_keys("qubit", qubit, _SECTION_KEYS["qubit"])

    sweep = data.get("sweep", {})
    axes = []
    if sweep:
        for key in sweep:
            if key != "axis":
                raise ConfigError(f"sweep.{key}: unknown key")
        raw_axes = sweep.get("axis", [])
        if not isinstance(raw_axes, list) or not all(isinstance(a, dict) for a in raw_axes):
            raise ConfigError("sweep.axis: must be an array of tables ([[sweep.axis]])")
        for raw in raw_axes:
            _check_keys("sweep.axis", raw, _AXIS_KEYS)
            try:
                axes.append(SweepAxis(raw["name"], float(raw["start"]),
                                      float(raw["stop"]), float(raw["step"])))
            except KeyError as exc:
                raise ConfigError(f"sweep.axis.{exc.args[0]}: missing") from None

    if kind == "bell-sweep" and not axes:
        # default measurement-phase grid: [0, 2 pi) at n_phi points per axis
        n_phi = int(bell_cfg.get("n_phi", 64))
        if n_phi < 2:
            raise ConfigError("bell.n_phi: must be >= 2")
        step = 2.0 * math.pi / n_phi
        for name in ("phi1", "phi2"):
            axes.append(SweepAxis(name, 0.0, (n_phi - 1) * step, step))

    run = dict(data.get("run", {}))
    _check_keys("run", run, _SECTION_KEYS["run"])
    out = dict(data.get("output", {}))
    _check_keys("output", out, _SECTION_KEYS["output"])

    cutoff = run.get("cutoff")
    if isinstance(cutoff, str):
        if cutoff != "auto":
            raise ConfigError("run.cutoff: must be an integer or 'auto'")
        cutoff = None

    return ExperimentConfig(
        kind=kind,
        state=state,
        optics=optics,
        detector_alice=det_a,
        detector_bob=det_b,
        bell=bell_cfg,
        qubit=qubit,
        sweep_axes=tuple(axes),
        seed=int(run.get("seed", 0)),
        jobs=int(run.get("jobs", 1)),
        cutoff=cutoff,
        cutoff_tol=float(run["cutoff_tol"]) if "cutoff_tol" in run else None,
        strict=bool(run.get("strict", False)),
        csv_path=out.get("csv", "results.csv"),
        manifest_path=out.get("manifest"),
    )


def load_config(path: str, overrides=()) -> ExperimentConfig:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    for item in overrides:
        data = _apply_override(data, item)
    return parse_config(data)


def _apply_override(data: dict, item: str) -> dict:
    if "=" not in item:
        raise ConfigError(f"override {item!r}: expected key=value")
    key, _, raw = item.partition("=")
    key = key.strip().lstrip("-")
    parts = key.split(".")
    if not all(parts):
        raise ConfigError(f"override {item!r}: malformed key")
    node = data
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"{key}: cannot override a scalar with a table")
    node[parts[-1]] = _coerce(raw.strip())
    return data


def _coerce(raw: str):
    low = raw.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


# -- realization of configured objects --------------------------------------------


def state_spec(cfg: dict) -> SingleModeSpec:
    kind = cfg.get("kind")
    if kind is None:
        raise ConfigError("state.kind: missing")
    alpha = complex(cfg.get("alpha", 0.0), cfg.get("alpha_im", 0.0))
    if "alpha2" in cfg:
        if "alpha" in cfg or "alpha_im" in cfg:
            raise ConfigError("state.alpha2: give either alpha or alpha2, not both")
        a2 = float(cfg["alpha2"])
        if a2 < 0:
            raise ConfigError("state.alpha2: must be >= 0")
        alpha = complex(math.sqrt(a2))
    if kind == "finite_superposition" and "lambda" in cfg:
        lam = float(cfg["lambda"])
        if not 0.0 <= lam < 1.0:
            raise ConfigError("state.lambda: must lie in [0, 1)")
        phi = float(cfg.get("phi", 0.0))
        coeffs = (math.sqrt(lam),
                  complex(math.cos(phi), math.sin(phi)) * math.sqrt(1.0 - lam))
        return SingleModeSpec(kind, coeffs=coeffs)
    try:
        return SingleModeSpec(
            kind,
            alpha=alpha,
            r=float(cfg.get("r", 0.0)),
            theta=float(cfg.get("theta", 0.0)),
            n=int(cfg.get("n", 0)),
            coeffs=tuple(_as_complex(c) for c in cfg.get("coeffs", ())),
        )
    except ValueError as exc:
        raise ConfigError(f"state: {exc}") from None


def _as_complex(value):
    if isinstance(value, (list, tuple)):
        return complex(value[0], value[1])
    return complex(value)


def optics_model(cfg: dict) -> BeamSplitterModel:
    model = cfg.get("model", "lossless")
    if model in ("lossless", "lossless_5050"):
        return BeamSplitterModel("lossless_5050")
    if model == "lossy":
        if "eta" not in cfg:
            raise ConfigError("optics.eta: missing for the lossy model")
        return BeamSplitterModel("lossy", eta=float(cfg["eta"]))
    raise ConfigError(f"optics.model: unknown model {model!r}")


def detector_builder(cfg: dict, party: str):
    """Callable cutoff -> DetectorModel for one party's configuration."""
    dtype = cfg.get("type", "parity")
    swap = bool(cfg.get("swap_outcomes", False))

    def build(cutoff: int) -> DetectorModel:
        if dtype == "parity":
            model = parity_effects(cutoff)
        elif dtype == "presence":
            model = presence_effects(cutoff)
        elif dtype == "qubit":
            model = qubit_effects(float(cfg.get("theta", 0.0)),
                                  float(cfg.get("epsilon", 0.0)), cutoff)
        elif dtype == "tke":
            model = tke_effects(float(cfg.get("kappa", 1.0)),
                                int(cfg.get("saturation", 1)),
                                cfg.get("grouping", "even"), cutoff)
        elif dtype == "sva":
            model = sva_effects(int(cfg.get("n_multiplex", 8)),
                                float(cfg.get("kappa", 1.0)),
                                float(cfg.get("nu", 0.0)), cutoff)
        else:
            raise ConfigError(f"detector.{party}.type: unknown type {dtype!r}")
        return model.swapped() if swap else model

    return build
