"""Run configuration: schema, strict validation and typed access"""

from dataclasses import dataclass, field
from numbers import Real
from typing import Any, Dict, List, Optional

import numpy as np

from hybridflow.dynamics.integrator import Method
from hybridflow.phase_space.operations import NORM_TOL, as_amplitudes
from hybridflow.utils.config import get_block

COMMANDS = (
    "simulate",
    "ensemble",
    "bracket-check",
    "benchmark-peres-terno",
    "tangibility",
    "closure-check",
)
MODEL_KINDS = ("bilinear", "localized", "generic")
PROFILES = ("smooth_step", "bump")

# None marks a leaf, a dict a nested block, a one-element list a list of blocks
SCHEMA: Dict[str, Any] = {
    "command": None,
    "model": {
        "kind": None,
        "N": None,
        "basis": None,
        "m": None,
        "omega": None,
        "M": None,
        "Omega": None,
        "lam": None,
        "quadrature": {"nodes": None, "range_multiplier": None},
        "n": None,
        "classical_potential": None,
        "quantum_potential": None,
        "H_qm": None,
        "interaction": [{"coefficient": None, "word": None}],
    },
    "initial_state": {
        "x": None,
        "p": None,
        "amplitudes": None,
        "X": None,
        "P": None,
        "coherent": None,
    },
    "numerics": {
        "dt": None,
        "T": None,
        "method": None,
        "renormalize_every": None,
        "seed": None,
        "workers": None,
        "constraint_tol": None,
        "energy_tol": None,
    },
    "output": {"dir": None, "trajectory_csv": None, "sample_csv": None},
    "perturbation": {
        "t0": None,
        "kind": None,
        "index": None,
        "profile": None,
        "amplitude": None,
        "width": None,
    },
    "density": {"components": [{"weight": None, "state": None}]},
    "sampler": {
        "samples": None,
        "proposal": {"mean_x": None, "mean_p": None, "width_x": None, "width_p": None},
    },
    "observables": [
        {"name": None, "classical": None, "operator": None, "coefficient": None, "matrix": None}
    ],
    "check": {"n": None, "N": None, "pairs": None, "points": None},
}

SEEDED_COMMANDS = ("ensemble", "bracket-check", "closure-check")
TIMED_COMMANDS = ("simulate", "ensemble", "benchmark-peres-terno", "tangibility")


@dataclass(frozen=True)
class Diagnostic:
    """One configuration problem at a dotted key path"""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass
class RunConfig:
    """Typed view of a run configuration"""

    command: str
    model: Dict[str, Any] = field(default_factory=dict)
    initial_state: Dict[str, Any] = field(default_factory=dict)
    numerics: Dict[str, Any] = field(default_factory=dict)
    output: Dict[str, Any] = field(default_factory=dict)
    perturbation: Dict[str, Any] = field(default_factory=dict)
    density: Dict[str, Any] = field(default_factory=dict)
    sampler: Dict[str, Any] = field(default_factory=dict)
    observables: List[Dict[str, Any]] = field(default_factory=list)
    check: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], command: Optional[str] = None) -> "RunConfig":
        return cls(
            command=command or data.get("command", ""),
            model=get_block(data, "model"),
            initial_state=get_block(data, "initial_state"),
            numerics=get_block(data, "numerics"),
            output=get_block(data, "output"),
            perturbation=get_block(data, "perturbation"),
            density=get_block(data, "density"),
            sampler=get_block(data, "sampler"),
            observables=list(data.get("observables") or []),
            check=get_block(data, "check"),
        )

    @property
    def dt(self) -> float:
        return float(self.numerics["dt"])

    @property
    def T(self) -> float:
        return float(self.numerics["T"])

    @property
    def seed(self) -> Optional[int]:
        seed = self.numerics.get("seed")
        return None if seed is None else int(seed)

    @property
    def method(self) -> Method:
        return Method(self.numerics.get("method", Method.MIDPOINT.value))


def _unknown_keys(data: Any, schema: Any, path: str) -> List[Diagnostic]:
    out: List[Diagnostic] = []
    if isinstance(schema, dict):
        if not isinstance(data, dict):
            return [Diagnostic(path or "<root>", f"expected a mapping, got {type(data).__name__}")]
        for key, value in data.items():
            where = f"{path}.{key}" if path else str(key)
            if key not in schema:
                out.append(Diagnostic(where, "unknown key"))
            elif schema[key] is not None and value is not None:
                out.extend(_unknown_keys(value, schema[key], where))
    elif isinstance(schema, list):
        if not isinstance(data, list):
            return [Diagnostic(path, f"expected a list, got {type(data).__name__}")]
        for i, item in enumerate(data):
            out.extend(_unknown_keys(item, schema[0], f"{path}[{i}]"))
    return out


def _is_number(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool) and np.isfinite(value)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _check_numerics(cfg: RunConfig, out: List[Diagnostic]) -> None:
    num = cfg.numerics
    if cfg.command in TIMED_COMMANDS:
        for key in ("dt", "T"):
            value = num.get(key)
            if value is None:
                out.append(Diagnostic(f"numerics.{key}", "required"))
            elif not _is_number(value) or value <= 0:
                out.append(
                    Diagnostic(f"numerics.{key}", f"must be a positive number, got {value!r}")
                )
    method = num.get("method", Method.MIDPOINT.value)
    if method not in [m.value for m in Method]:
        out.append(Diagnostic("numerics.method", f"unknown integrator {method!r}"))
    seed = num.get("seed")
    if seed is None and cfg.command in SEEDED_COMMANDS:
        out.append(Diagnostic("numerics.seed", f"required for {cfg.command}"))
    elif seed is not None and (not _is_int(seed) or not 0 <= seed < 2**64):
        out.append(Diagnostic("numerics.seed", f"must be an unsigned 64-bit integer, got {seed!r}"))
    for key in ("renormalize_every", "workers"):
        value = num.get(key)
        if value is not None and (not _is_int(value) or value < 1):
            out.append(Diagnostic(f"numerics.{key}", f"must be a positive integer, got {value!r}"))


def _vector_length(value: Any) -> Optional[int]:
    return len(value) if isinstance(value, (list, tuple)) else None


def _check_amplitudes(values: Any, N: Optional[int], path: str, out: List[Diagnostic]) -> None:
    try:
        c = as_amplitudes(values)
    except (TypeError, ValueError) as e:
        out.append(Diagnostic(path, f"invalid amplitudes: {e}"))
        return
    if N is not None and c.size != N:
        out.append(Diagnostic(path, f"expected {N} amplitudes, got {c.size}"))
    norm = float(np.linalg.norm(c))
    if abs(norm - 1.0) > NORM_TOL:
        out.append(Diagnostic(path, f"amplitudes are not normalized: norm = {norm:.17g}"))


def model_dimensions(model: Dict[str, Any]) -> tuple:
    """(n, N) declared by a model block, None where undeterminable"""
    kind = model.get("kind")
    N = model.get("N") if _is_int(model.get("N")) else None
    if kind == "generic":
        n = model.get("n") if _is_int(model.get("n")) else None
    else:
        n = _vector_length(model.get("m", [1.0]))
    return n, N


def _check_model(cfg: RunConfig, out: List[Diagnostic]) -> None:
    model = cfg.model
    kind = model.get("kind")
    if kind not in MODEL_KINDS:
        kinds = ", ".join(MODEL_KINDS)
        out.append(Diagnostic("model.kind", f"must be one of {kinds}, got {kind!r}"))
        return
    N = model.get("N")
    if not _is_int(N) or N < (2 if kind != "generic" else 1):
        out.append(Diagnostic("model.N", f"invalid truncation dimension {N!r}"))
    if kind == "generic":
        if not _is_int(model.get("n")) or model["n"] < 0:
            out.append(Diagnostic("model.n", f"invalid classical dimension {model.get('n')!r}"))
        if model.get("basis", "abstract") not in ("abstract", "harmonic"):
            out.append(Diagnostic("model.basis", f"unknown basis {model.get('basis')!r}"))
        if "H_qm" in model and "quantum_potential" in model:
            out.append(Diagnostic("model", "give either H_qm or quantum_potential, not both"))
        return
    defaults = {"m": [1.0], "omega": [1.0], "lam": [0.0]}
    lengths = {key: _vector_length(model.get(key, value)) for key, value in defaults.items()}
    if None in lengths.values() or len(set(lengths.values())) != 1:
        out.append(
            Diagnostic("model", f"m, omega and lam must be lists of equal length, got {lengths}")
        )


def _check_initial_state(cfg: RunConfig, out: List[Diagnostic]) -> None:
    n, N = model_dimensions(cfg.model)
    state = cfg.initial_state
    for key in ("x", "p"):
        if key in state and n is not None and _vector_length(state[key]) != n:
            out.append(Diagnostic(f"initial_state.{key}", f"expected {n} entries"))
    given = [k for k in ("amplitudes", "X", "coherent") if k in state]
    if len(given) > 1:
        out.append(Diagnostic("initial_state", f"conflicting quantum state keys {given}"))
    if "amplitudes" in state:
        _check_amplitudes(state["amplitudes"], N, "initial_state.amplitudes", out)
    if ("X" in state) != ("P" in state):
        out.append(Diagnostic("initial_state", "X and P must be given together"))
    elif "X" in state:
        X, P = np.asarray(state["X"], dtype=float), np.asarray(state["P"], dtype=float)
        if N is not None and (X.size != N or P.size != N):
            out.append(Diagnostic("initial_state.X", f"expected {N} entries for X and P"))
        C = 0.5 * float(np.dot(X, X) + np.dot(P, P))
        if abs(C - 1.0) > 1e-12:
            out.append(Diagnostic("initial_state.X", f"constraint value C = {C:.17g} is not 1"))
    abstract = cfg.model.get("kind") == "generic" and cfg.model.get("basis") != "harmonic"
    if "coherent" in state and abstract:
        out.append(Diagnostic("initial_state.coherent", "needs a harmonic-oscillator basis"))


def _check_perturbation(cfg: RunConfig, out: List[Diagnostic]) -> None:
    pert = cfg.perturbation
    if not pert:
        out.append(Diagnostic("perturbation", "required for tangibility"))
        return
    t0, T = pert.get("t0"), cfg.numerics.get("T")
    if not _is_number(t0):
        out.append(Diagnostic("perturbation.t0", f"must be a number, got {t0!r}"))
    elif _is_number(T) and T > 0 and not 0 < t0 < T:
        out.append(Diagnostic("perturbation.t0", f"must satisfy 0 < t0 < T = {T}, got {t0}"))
    if pert.get("kind", "x") not in ("x", "p"):
        out.append(Diagnostic("perturbation.kind", "must be 'x' or 'p'"))
    n, _ = model_dimensions(cfg.model)
    index = pert.get("index", 1)
    if not _is_int(index) or index < 1 or (n is not None and index > n):
        out.append(Diagnostic("perturbation.index", f"must be in 1..{n}, got {index!r}"))
    if pert.get("profile", "smooth_step") not in PROFILES:
        out.append(Diagnostic("perturbation.profile", f"must be one of {', '.join(PROFILES)}"))
    if not _is_number(pert.get("amplitude", 0.0)):
        out.append(Diagnostic("perturbation.amplitude", "must be a number"))
    width = pert.get("width", 1.0)
    if not _is_number(width) or width <= 0:
        out.append(Diagnostic("perturbation.width", f"must be a positive number, got {width!r}"))


def _check_proposal(proposal: Any, n: Optional[int], out: List[Diagnostic]) -> None:
    if not isinstance(proposal, dict):
        return
    for key in ("mean_x", "mean_p", "width_x", "width_p"):
        if key not in proposal:
            continue
        path = f"sampler.proposal.{key}"
        value = proposal[key]
        values = value if isinstance(value, (list, tuple)) else [value]
        if not values or not all(_is_number(v) for v in values):
            out.append(Diagnostic(path, f"must be a number or a list of numbers, got {value!r}"))
            continue
        if isinstance(value, (list, tuple)) and n is not None and len(values) != n:
            out.append(Diagnostic(path, f"expected {n} entries"))
        if key.startswith("width") and any(v <= 0 for v in values):
            out.append(Diagnostic(path, f"widths must be positive, got {value!r}"))


def _check_observables(observables: List[Any], out: List[Diagnostic]) -> None:
    seen = set()
    for i, obs in enumerate(observables):
        if not isinstance(obs, dict):
            continue
        if sum(k in obs for k in ("classical", "operator", "matrix")) != 1:
            out.append(
                Diagnostic(f"observables[{i}]", "give exactly one of classical, operator, matrix")
            )
        name = obs.get("name")
        if not isinstance(name, str) or not name:
            out.append(Diagnostic(f"observables[{i}].name", "a non-empty string is required"))
        elif name in seen or name == "t":
            out.append(Diagnostic(f"observables[{i}].name", f"duplicate column name {name!r}"))
        else:
            seen.add(name)


def _check_ensemble(cfg: RunConfig, out: List[Diagnostic]) -> None:
    n, N = model_dimensions(cfg.model)
    components = cfg.density.get("components") or []
    if not components:
        out.append(Diagnostic("density.components", "at least one component is required"))
    for i, comp in enumerate(components):
        if not isinstance(comp, dict):
            continue
        if "weight" not in comp:
            out.append(Diagnostic(f"density.components[{i}].weight", "required"))
        if "state" not in comp:
            out.append(Diagnostic(f"density.components[{i}].state", "required"))
        else:
            _check_amplitudes(comp["state"], N, f"density.components[{i}].state", out)
    samples = cfg.sampler.get("samples")
    if not _is_int(samples) or samples < 1:
        out.append(Diagnostic("sampler.samples", f"must be a positive integer, got {samples!r}"))
    _check_proposal(cfg.sampler.get("proposal"), n, out)
    _check_observables(cfg.observables, out)


def _check_check_block(cfg: RunConfig, out: List[Diagnostic]) -> None:
    keys = ("N", "pairs") + (("n", "points") if cfg.command == "closure-check" else ())
    for key in keys:
        value = cfg.check.get(key)
        if not _is_int(value) or value < 1:
            out.append(Diagnostic(f"check.{key}", f"must be a positive integer, got {value!r}"))


def validate(config: Dict[str, Any], command: Optional[str] = None) -> List[Diagnostic]:
    """All problems of a raw configuration; an empty list means runnable"""
    out = _unknown_keys(config, SCHEMA, "")
    if not isinstance(config, dict):
        return out
    declared = config.get("command")
    cmd = command or declared
    if cmd not in COMMANDS:
        out.append(Diagnostic("command", f"must be one of {', '.join(COMMANDS)}, got {cmd!r}"))
        return out
    if command and declared and declared != command:
        out.append(Diagnostic("command", f"config is for {declared!r}, not {command!r}"))
    cfg = RunConfig.from_dict(config, cmd)
    _check_numerics(cfg, out)
    if cmd in ("bracket-check", "closure-check"):
        _check_check_block(cfg, out)
        return out
    _check_model(cfg, out)
    if cmd == "benchmark-peres-terno" and cfg.model.get("kind") != "bilinear":
        out.append(Diagnostic("model.kind", "benchmark-peres-terno needs the bilinear model"))
    if cmd == "ensemble":
        _check_ensemble(cfg, out)
    else:
        _check_initial_state(cfg, out)
    if cmd == "tangibility":
        _check_perturbation(cfg, out)
    return out
