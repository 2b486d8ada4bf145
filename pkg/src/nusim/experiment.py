"""Time-grid experiment runner producing plot-ready CSV.

Config files are flat ``key = value`` text with ``#`` comments::

    experiment = invert
    n = 3
    pair_angle = 1:2:0, 1:3:pi/6, 2:3:pi/6
    t_max = 10
    mode = noisy
    noise = 0.0005, 0.01, 0.02

Angles may be written as numbers or simple products and quotients with
``pi`` (``pi/6``, ``2*pi/3``). For the vacuum experiment the ``t`` column is
the baseline ``L`` in km; for the others it is time in units of ``1/eta``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .circuits import (
    ANCILLA,
    ancilla_p0,
    concurrence_circuit,
    concurrence_from_p0,
    concurrence_stderr,
    evolution_circuit,
    vacuum_circuit,
)
from .neutrino import (
    NeutrinoParams,
    ParamsError,
    concurrence_curve_exact,
    inversion_curve_exact,
    inversion_target,
    table1_params,
    table2_params,
    vacuum_disappearance,
    vacuum_phase,
)
from .qsim import NoiseModel, probability_of, run_noisy, run_statevector, sample_counts

EXPERIMENTS = ("vacuum", "invert", "concurrence")
MODES = ("exact", "statevector-shots", "noisy")
DEFAULT_NOISE = NoiseModel(p_depol_1q=0.0005, p_depol_2q=0.01, p_readout_flip=0.02)
VACUUM_THETA = 0.295

HEADERS = {
    "vacuum": ("t", "p_surv_theory", "p_dis_theory", "p_dis_est", "stderr"),
    "invert": ("t", "p_inv_theory", "p_inv_est", "stderr"),
    "concurrence": ("t", "c_theory", "c_est", "stderr"),
}
_DEFAULT_T_MAX = {"vacuum": 125.0, "invert": 20.0, "concurrence": 12.0}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    params: NeutrinoParams
    t_min: float = 0.0
    t_max: float | None = None
    grid_points: int = 51
    mode: str = "exact"
    shots: int = 4096
    trotter_steps: int | None = None
    noise: NoiseModel = field(default_factory=lambda: DEFAULT_NOISE)
    seed: int = 7
    hardware_swaps: bool = False
    out_path: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.t_max is None:
            self.t_max = _DEFAULT_T_MAX[self.experiment]
        if self.t_min > self.t_max:
            raise ConfigError(f"t_min = {self.t_min} exceeds t_max = {self.t_max}")
        if self.grid_points < 1:
            raise ConfigError("points must be >= 1")
        if self.shots < 1:
            raise ConfigError("shots must be >= 1")
        if self.trotter_steps is not None and self.trotter_steps < 1:
            raise ConfigError("steps must be >= 1")
        if self.experiment == "concurrence" and self.params.n != 2:
            raise ConfigError("the concurrence experiment needs n = 2")
        if self.experiment == "invert":
            if self.params.n < 2:
                raise ConfigError("the invert experiment needs n >= 2")
            try:
                inversion_target(self.params)
            except ParamsError as exc:
                raise ConfigError(str(exc)) from exc

    def times(self) -> np.ndarray:
        if self.grid_points == 1:
            return np.array([self.t_min])
        return np.linspace(self.t_min, self.t_max, self.grid_points)


@dataclass
class CsvReport:
    header: tuple[str, ...]
    rows: list[tuple[float, ...]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([_fmt(x) for x in row])
        return buf.getvalue()

    def write(self, path) -> None:
        Path(path).write_bytes(self.to_csv().encode("utf-8"))

    def column(self, name: str) -> np.ndarray:
        i = self.header.index(name)
        return np.array([r[i] for r in self.rows])


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _sub_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, i]).generate_state(1, dtype=np.uint64)[0])


def _binomial_se(p: float, shots: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / shots)


def _sample(cfg: ExperimentConfig, circuit, i: int, qubits):
    seed = _sub_seed(cfg.seed, i)
    if cfg.mode == "noisy":
        return run_noisy(circuit, None, cfg.shots, cfg.noise, seed, qubits=qubits)
    return sample_counts(run_statevector(circuit), cfg.shots, seed, qubits=qubits)


def _run_vacuum(cfg: ExperimentConfig) -> list[tuple[float, ...]]:
    p = cfg.params
    rows = []
    for i, length in enumerate(cfg.times()):
        theory = vacuum_disappearance(p.theta_nu, p.delta_m2, length, p.energy)
        circ = vacuum_circuit(p.theta_nu, vacuum_phase(p.delta_m2, length, p.energy))
        if cfg.mode == "exact":
            est, se = probability_of(run_statevector(circ), "1"), 0.0
        else:
            est = _sample(cfg, circ, i, None).frequency("1")
            se = _binomial_se(est, cfg.shots)
        rows.append((length, 1.0 - theory, theory, est, se))
    return rows


def _run_invert(cfg: ExperimentConfig) -> list[tuple[float, ...]]:
    p = cfg.params
    ts = cfg.times()
    theory = inversion_curve_exact(p, ts)
    target = inversion_target(p)
    rows = []
    for i, t in enumerate(ts):
        circ = evolution_circuit(p, t, cfg.trotter_steps, hardware_swaps=cfg.hardware_swaps)
        if cfg.mode == "exact":
            est, se = probability_of(run_statevector(circ), target), 0.0
        else:
            est = _sample(cfg, circ, i, None).frequency(target)
            se = _binomial_se(est, cfg.shots)
        rows.append((t, theory[i], est, se))
    return rows


def _run_concurrence(cfg: ExperimentConfig) -> list[tuple[float, ...]]:
    p = cfg.params
    ts = cfg.times()
    theory = concurrence_curve_exact(p, ts)
    rows = []
    for i, t in enumerate(ts):
        circ = concurrence_circuit(p, t, cfg.trotter_steps)
        if cfg.mode == "exact":
            probs = run_statevector(circ).probabilities()
            p0 = float(np.clip(probs[0::2].sum(), 0.0, 1.0))  # ancilla is bit 0
            est, se = concurrence_from_p0(p0), 0.0
        else:
            p0 = ancilla_p0(_sample(cfg, circ, i, [ANCILLA]))
            est, se = concurrence_from_p0(p0), concurrence_stderr(p0, cfg.shots)
        rows.append((t, theory[i], est, se))
    return rows


_RUNNERS = {"vacuum": _run_vacuum, "invert": _run_invert, "concurrence": _run_concurrence}


def run_experiment(config: ExperimentConfig) -> CsvReport:
    """One CSV row per grid point: theory, simulated estimate and its standard error."""
    report = CsvReport(HEADERS[config.experiment], _RUNNERS[config.experiment](config))
    if config.out_path:
        report.write(config.out_path)
    return report


# -- config parsing -----------------------------------------------------------

def parse_angle(text: str) -> float:
    """Parse ``1.2``, ``pi``, ``pi/6``, ``2*pi/3`` and similar."""
    text = text.strip().lower().replace(" ", "")
    if not text:
        raise ValueError("empty angle")
    sign = -1.0 if text.startswith("-") else 1.0
    text = text.lstrip("+-")
    value, op, token = 1.0, "*", ""
    for ch in text + "*":
        if ch in "*/":
            num = math.pi if token == "pi" else float(token)
            value = value * num if op == "*" else value / num
            op, token = ch, ""
        else:
            token += ch
    return sign * value


def parse_pair_angles(text: str) -> dict[tuple[int, int], float]:
    out = {}
    for item in text.replace(";", ",").split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        if len(parts) != 3:
            raise ValueError(f"pair angle {item!r} is not p:q:angle")
        out[(int(parts[0]), int(parts[1]))] = parse_angle(parts[2])
    return out


def parse_noise(text: str) -> NoiseModel:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise ValueError("noise needs three comma-separated values p1,p2,pr")
    return NoiseModel(*parts)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_FIELDS = {
    "experiment": str,
    "n": int,
    "theta_nu": parse_angle,
    "pair_angle": parse_pair_angles,
    "dm2": float,
    "energy": float,
    "v_cc": float,
    "flavours": str,
    "t_min": float,
    "t_max": float,
    "points": int,
    "mode": str,
    "shots": int,
    "steps": int,
    "seed": int,
    "noise": parse_noise,
    "hardware_swaps": _parse_bool,
    "out": str,
}


def coerce(key: str, raw: str, where: str = ""):
    key = key.strip().replace("-", "_")
    if key not in _FIELDS:
        raise ConfigError(f"{where}unknown key {key!r}")
    try:
        return key, _FIELDS[key](raw.strip())
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}bad value for {key!r}: {exc}") from exc


def read_config_file(path) -> dict:
    values = {}
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, raw = line.split("=", 1)
        k, v = coerce(key, raw, f"{path}:{lineno}: ")
        if k == "pair_angle" and k in values:
            v = {**values[k], **v}
        values[k] = v
    return values


def build_config(values: dict) -> ExperimentConfig:
    """Assemble an :class:`ExperimentConfig` from parsed ``key -> value`` pairs."""
    v = dict(values)
    experiment = v.get("experiment")
    if experiment is None:
        raise ConfigError("no experiment given")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {experiment!r}")

    n = v.get("n", 1 if experiment == "vacuum" else 2)
    if experiment == "vacuum":
        base = NeutrinoParams(1, VACUUM_THETA, {}, initial_flavours="e")
    elif n == 3:
        base = table2_params()
    elif n == 2:
        base = table1_params()
    else:
        base = NeutrinoParams(n, table1_params().theta_nu, {})
    angles = dict(base.coupling_angles) if base.n == n else {}
    angles.update(v.get("pair_angle", {}))
    try:
        params = NeutrinoParams(
            n=n,
            theta_nu=v.get("theta_nu", base.theta_nu),
            coupling_angles=angles,
            delta_m2=v.get("dm2", base.delta_m2),
            energy=v.get("energy", base.energy),
            v_cc=v.get("v_cc", base.v_cc),
            initial_flavours=v.get("flavours", base.initial_flavours if base.n == n else ""),
        )
        if experiment != "vacuum":
            missing = [pq for pq in params.pairs if pq not in params.coupling_angles]
            if missing:
                raise ConfigError(f"pair_angle missing for pairs {missing}")
        return ExperimentConfig(
            experiment=experiment,
            params=params,
            t_min=v.get("t_min", 0.0),
            t_max=v.get("t_max"),
            grid_points=v.get("points", 51),
            mode=v.get("mode", "exact"),
            shots=v.get("shots", 4096),
            trotter_steps=v.get("steps"),
            noise=v.get("noise", DEFAULT_NOISE),
            seed=v.get("seed", 7),
            hardware_swaps=v.get("hardware_swaps", False),
            out_path=v.get("out"),
        )
    except ParamsError as exc:
        raise ConfigError(str(exc)) from exc
