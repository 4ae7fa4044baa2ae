"""Scenario configs and the run / verify / sweep pipelines behind the CLI.

A scenario is a single JSON document::

    {
      "profile": {"family": "modulated", "X0": 1, "Y0": 0, "Z0": 1,
                  "epsilon": 0.1, "nu": 2},
      "t0": 0, "t_end": 50, "step": 0.001, "sample_every": 100,
      "hbar": 1, "number_states": [0, 1],
      "oracle": {"enabled": true, "dimension": 128, "step": 0.005},
      "output": {"csv": "run.csv", "report": "report.json"}
    }

Everything except ``profile`` and ``t_end`` has a default.  ``u_scale``
(default 1) multiplies the initial mode; values other than 1 break the
Wronskian normalization on purpose and exist for exercising ``verify``.
"""
from __future__ import annotations

import io
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bogoliubov as bog
from . import fock_oracle as fock
from . import mode_solver as ms
from . import operator_algebra as ops
from .profiles import CoefficientProfile, ProfileError, ReferenceParams, from_dict

__all__ = [
    "ConfigError",
    "OracleConfig",
    "ScenarioConfig",
    "ReportEntry",
    "VerificationReport",
    "RunResult",
    "load_config",
    "parse_config",
    "run",
    "verify",
    "sweep",
    "format_csv",
    "TOLERANCES",
]

TOLERANCES = {
    "wronskian_conservation": 1e-9,
    "unitarity": 1e-9,
    "reference_identity": 1e-14,
    "picture_equality": 1e-14,
    "commutator_invariant": 1e-12,
    "commutator_heisenberg": 1e-12,
    "uncertainty_identity": 1e-9,
    "oracle_correlators": 1e-4,
    "oracle_mean_occupation": 1e-4,
}

_KNOWN_KEYS = {
    "profile", "t0", "t_end", "step", "sample_every", "hbar",
    "number_states", "oracle", "output", "u_scale",
}


class ConfigError(ValueError):
    """Invalid scenario document; the message names the offending field."""


@dataclass(frozen=True)
class OracleConfig:
    enabled: bool = False
    dimension: int = fock.DEFAULT_DIMENSION
    step: float = 1e-3


@dataclass(frozen=True)
class ScenarioConfig:
    profile: dict
    t_end: float
    t0: float = 0.0
    step: float = ms.DEFAULT_STEP
    sample_every: int = 1
    hbar: float = 1.0
    number_states: tuple[int, ...] = (0,)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    output: dict = field(default_factory=dict)
    u_scale: float = 1.0

    def build_profile(self) -> CoefficientProfile:
        try:
            return from_dict(self.profile)
        except ProfileError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        d["number_states"] = list(self.number_states)
        return d


def _number(doc, key, default=None, *, kind=float, where=""):
    name = f"{where}{key}"
    if key not in doc:
        if default is None:
            raise ConfigError(f"{name}: required field missing")
        return default
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{name}: expected a number, got {val!r}")
    if kind is int:
        if isinstance(val, float) and not val.is_integer():
            raise ConfigError(f"{name}: expected an integer, got {val!r}")
        return int(val)
    if not math.isfinite(val):
        raise ConfigError(f"{name}: must be finite")
    return float(val)


def _check_writable(path, name):
    parent = os.path.dirname(os.path.abspath(path)) or "."
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
        raise ConfigError(f"{name}: directory of {path!r} is not writable")
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise ConfigError(f"{name}: {path!r} is not writable")


def parse_config(doc: dict) -> ScenarioConfig:
    """Validate a decoded JSON document and build a :class:`ScenarioConfig`."""
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be an object")
    unknown = sorted(set(doc) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown field")
    if "profile" not in doc:
        raise ConfigError("profile: required field missing")
    if not isinstance(doc["profile"], dict):
        raise ConfigError("profile: expected an object")

    t0 = _number(doc, "t0", 0.0)
    t_end = _number(doc, "t_end")
    step = _number(doc, "step", ms.DEFAULT_STEP)
    sample_every = _number(doc, "sample_every", 1, kind=int)
    hbar = _number(doc, "hbar", 1.0)
    u_scale = _number(doc, "u_scale", 1.0)
    if not t_end > t0:
        raise ConfigError(f"t_end: must exceed t0 ({t_end} <= {t0})")
    if not step > 0:
        raise ConfigError(f"step: must be positive, got {step}")
    if sample_every < 1:
        raise ConfigError(f"sample_every: must be >= 1, got {sample_every}")
    if not hbar > 0:
        raise ConfigError(f"hbar: must be positive, got {hbar}")

    states = doc.get("number_states", [0])
    if not isinstance(states, list) or not states:
        raise ConfigError("number_states: expected a non-empty list of integers")
    for n in states:
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise ConfigError(f"number_states: entries must be non-negative integers, got {n!r}")

    odoc = doc.get("oracle", {})
    if not isinstance(odoc, dict):
        raise ConfigError("oracle: expected an object")
    extra = sorted(set(odoc) - {"enabled", "dimension", "step"})
    if extra:
        raise ConfigError(f"oracle.{extra[0]}: unknown field")
    enabled = odoc.get("enabled", False)
    if not isinstance(enabled, bool):
        raise ConfigError("oracle.enabled: expected true or false")
    oracle = OracleConfig(
        enabled,
        _number(odoc, "dimension", fock.DEFAULT_DIMENSION, kind=int, where="oracle."),
        _number(odoc, "step", 1e-3, where="oracle."),
    )
    if enabled:
        if oracle.dimension < 2:
            raise ConfigError(f"oracle.dimension: must be >= 2, got {oracle.dimension}")
        if not oracle.step > 0:
            raise ConfigError(f"oracle.step: must be positive, got {oracle.step}")
        if max(states) >= oracle.dimension:
            raise ConfigError(
                f"number_states: state {max(states)} does not fit oracle.dimension {oracle.dimension}"
            )

    output = doc.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("output: expected an object")
    for key, path in output.items():
        if key not in ("csv", "report"):
            raise ConfigError(f"output.{key}: unknown field")
        if not isinstance(path, str) or not path:
            raise ConfigError(f"output.{key}: expected a path string")
        _check_writable(path, f"output.{key}")

    cfg = ScenarioConfig(
        profile=dict(doc["profile"]),
        t_end=t_end,
        t0=t0,
        step=step,
        sample_every=sample_every,
        hbar=hbar,
        number_states=tuple(states),
        oracle=oracle,
        output=dict(output),
        u_scale=u_scale,
    )
    prof = cfg.build_profile()
    for key, t in (("t0", t0), ("t_end", t_end)):
        if not prof.t_start - 1e-12 <= t <= prof.t_end + 1e-12:
            raise ConfigError(f"{key}: {t} outside profile domain [{prof.t_start}, {prof.t_end}]")
    return cfg


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON in {path!r}: {exc}") from exc
    return parse_config(doc)


def _setup(cfg: ScenarioConfig, hard_limit):
    prof = cfg.build_profile()
    try:
        ref = ReferenceParams.from_profile(prof, cfg.t0, cfg.hbar)
    except ProfileError as exc:
        raise ms.InitializationError(str(exc)) from exc
    start = ms.vacuum_init(prof, ref).scaled(cfg.u_scale)
    traj = ms.integrate(prof, start, cfg.t_end, cfg.step, cfg.sample_every, hard_limit=hard_limit)
    return prof, ref, traj


# ---------------------------------------------------------------- run

BASE_COLUMNS = [
    "t", "re_u", "im_u", "re_udot", "im_udot", "wronskian_residual",
    "re_alpha", "im_alpha", "re_beta", "im_beta", "unitarity_residual",
    "theta", "r", "phi",
]


@dataclass
class RunResult:
    columns: list[str]
    rows: np.ndarray
    summary: dict

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def run(cfg: ScenarioConfig) -> RunResult:
    """Integrate the mode and tabulate every closed-form quantity per sample."""
    prof, ref, traj = _setup(cfg, ms.HARD_LIMIT)
    columns = list(BASE_COLUMNS)
    for n in cfg.number_states:
        columns += [f"q2_{n}", f"p2_{n}", f"cross_{n}", f"uncertainty_{n}"]

    coeffs = prof.eval(traj.t)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ms.WronskianWarning)
        for k, state in enumerate(traj):
            X, Y = float(coeffs.X[k]), float(coeffs.Y[k])
            pair = bog.bogoliubov_coeffs(state, X, Y, ref, hard_limit=None)
            sq = bog.squeeze_params(pair)
            row = [
                state.t, state.u.real, state.u.imag, state.udot.real, state.udot.imag,
                traj.wronskian_residual[k],
                pair.alpha.real, pair.alpha.imag, pair.beta.real, pair.beta.imag,
                bog.unitarity_residual(pair), sq.theta, sq.r, sq.phi,
            ]
            for n in cfg.number_states:
                c = ops.correlators(state, X, Y, n, cfg.hbar)
                row += [c.q2, c.p2, c.cross, ops.uncertainty_product(c)]
            rows.append(row)
    rows = np.array(rows, dtype=float)
    last = rows[-1]
    summary = {
        "samples": len(rows),
        "t_final": float(last[0]),
        "beta2_final": float(last[8] ** 2 + last[9] ** 2),
        "r_final": float(last[12]),
        "max_wronskian_residual": float(rows[:, 5].max()),
        "max_unitarity_residual": float(rows[:, 10].max()),
    }
    return RunResult(columns, rows, summary)


def format_csv(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


# ---------------------------------------------------------------- verify


@dataclass(frozen=True)
class ReportEntry:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    worst_time: float


@dataclass
class VerificationReport:
    entries: list[ReportEntry]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def entry(self, name: str) -> ReportEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"status": self.status, "entries": [asdict(e) for e in self.entries]}

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            flag = "PASS" if e.passed else "FAIL"
            out.append(
                f"{flag}  {e.name:<24s} max={e.max_residual:.3e}  tol={e.tolerance:.1e}  at t={e.worst_time:.6g}"
            )
        out.append(f"overall: {self.status}")
        return out


class _Tracker:
    def __init__(self):
        self.worst = {}

    def add(self, name, residual, t):
        residual = float(residual)
        cur = self.worst.get(name)
        if cur is None or residual > cur[0] or math.isnan(residual):
            self.worst[name] = (residual, float(t))

    def entry(self, name, tol):
        res, t = self.worst[name]
        return ReportEntry(name, res, tol, bool(res <= tol), t)


def _rel(a, b, scale):
    return abs(a - b) / scale


def verify(cfg: ScenarioConfig) -> VerificationReport:
    """Check every invariant along the scenario's trajectory.

    Residuals are absolute except for the oracle entries: correlators are
    compared relative to ``<q^2>``, ``<p^2>`` and ``sqrt(<q^2><p^2>)``
    respectively; occupations relative to ``max(1, expected)``.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ms.WronskianWarning)
        prof, ref, traj = _setup(cfg, None)
    hbar = cfg.hbar
    coeffs = prof.eval(traj.t)
    tr = _Tracker()
    betas = []

    for k, state in enumerate(traj):
        t = state.t
        X, Y = float(coeffs.X[k]), float(coeffs.Y[k])
        tr.add("wronskian_conservation", traj.wronskian_residual[k], t)
        pair = bog.bogoliubov_coeffs(state, X, Y, ref, hard_limit=None)
        betas.append(pair.beta)
        tr.add("unitarity", bog.unitarity_residual(pair), t)
        if k == 0:
            tr.add("reference_identity", max(abs(pair.alpha - 1.0), abs(pair.beta)), t)

        ql, pl = ops.lvn_quadratures(state, X, Y, hbar, strict=False)
        qh, ph = ops.heisenberg_quadratures(state, X, Y, hbar, strict=False)
        tr.add("commutator_invariant", abs(ops.commutator_residual(ql, pl, hbar)) / hbar, t)
        tr.add("commutator_heisenberg", abs(ops.commutator_residual(qh, ph, hbar)) / hbar, t)
        for n in cfg.number_states:
            closed = ops.correlators(state, X, Y, n, hbar)
            cl = ops.expansion_correlators(ql, pl, n, t)
            ch = ops.expansion_correlators(qh, ph, n, t)
            scale = max(1.0, closed.q2, closed.p2)
            diff = max(
                abs(x - y) for a, b in ((cl, ch), (cl, closed), (ch, closed))
                for x, y in ((a.q2, b.q2), (a.p2, b.p2), (a.cross, b.cross))
            )
            tr.add("picture_equality", diff / scale, t)
            target = hbar ** 2 * (2 * n + 1) ** 2 / 4.0
            tr.add("uncertainty_identity", abs(ops.uncertainty_product(closed) - target) / hbar ** 2, t)

    names = [
        "wronskian_conservation", "unitarity", "reference_identity", "picture_equality",
        "commutator_invariant", "commutator_heisenberg", "uncertainty_identity",
    ]

    if cfg.oracle.enabled:
        N = cfg.oracle.dimension
        for n in cfg.number_states:
            psi0 = fock.number_state(n, N, cfg.t0)
            states = fock.propagate_samples(prof, psi0, traj.t, cfg.oracle.step, ref)
            for k, psi in enumerate(states):
                t = psi.t
                X, Y = float(coeffs.X[k]), float(coeffs.Y[k])
                closed = ops.correlators(traj[k], X, Y, n, hbar)
                got = fock.expect_correlators(psi, ref, N, n)
                err = max(
                    _rel(got.q2, closed.q2, closed.q2),
                    _rel(got.p2, closed.p2, closed.p2),
                    _rel(got.cross, closed.cross, math.sqrt(closed.q2 * closed.p2)),
                )
                tr.add("oracle_correlators", err, t)
                expected = n + abs(betas[k]) ** 2 * (2 * n + 1)
                occ = fock.mean_occupation(psi)
                tr.add("oracle_mean_occupation", _rel(occ, expected, max(1.0, expected)), t)
        names += ["oracle_correlators", "oracle_mean_occupation"]

    return VerificationReport([tr.entry(name, TOLERANCES[name]) for name in names])


# ---------------------------------------------------------------- sweep

SWEEP_COLUMNS = ["value", "beta2_final", "r_final", "max_wronskian_residual", "max_unitarity_residual"]


def _sweep_one(args):
    cfg, parameter, value = args
    profile = dict(cfg.profile)
    profile[parameter] = value
    doc = cfg.to_dict()
    doc["profile"] = profile
    doc["oracle"] = asdict(cfg.oracle)
    doc["output"] = {}
    s = run(parse_config(doc)).summary
    return [value, s["beta2_final"], s["r_final"], s["max_wronskian_residual"], s["max_unitarity_residual"]]


def sweep(cfg: ScenarioConfig, parameter: str, values, workers: int = 1) -> list[list[float]]:
    """Final ``|beta|^2``, ``r`` and max residuals for each value of a profile parameter."""
    current = cfg.profile.get(parameter)
    if parameter == "family" or isinstance(current, bool) or not isinstance(current, (int, float)):
        numeric = sorted(
            k for k, v in cfg.profile.items()
            if k != "family" and isinstance(v, (int, float)) and not isinstance(v, bool)
        )
        raise ConfigError(f"param: {parameter!r} is not a numeric profile field (choose from {numeric})")
    jobs = [(cfg, parameter, float(v)) for v in values]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_one, jobs))
    return [_sweep_one(job) for job in jobs]
