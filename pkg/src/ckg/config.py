"""
Run configuration: a versioned YAML document validated into :class:`RunConfig`.

Example::

    schema_version: 1
    name: soliton
    grid: {a: -24, b: 104, h: 0.25}      # or M: 512 instead of h
    time: {tau: 0.02, t_final: 200}
    n_components: 1
    initial_condition:
      kind: single_soliton               # single_soliton | collision_1c | collision_3c | zero | custom
      c: 0.4
      alpha: [1.0]
    noise: {snr_db: 50, seed: 7, fields: [psi0, psi1, q0]}   # optional
    output:
      dir: runs/soliton
      snapshot_times: [0, 50, 100, 150, 200]
      energy_every: 50                   # steps between energy samples, 0 = off
      error_every: 0
      error_vs_exact: true               # or {c: .., alpha: [..], x0: ..}
    numerics: {zero_nyquist: false, dealias: false}

A ``custom`` initial condition reads a CSV (``path``, relative to the config
file) with header ``x,psi0_1..psi0_N,psi1_1..psi1_N,q0`` and one row per grid
point, optionally including the periodic endpoint.
"""

import csv
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError, ParameterError
from .grid import GridSpec
from .solitons import (
    InitialCondition,
    SolitonSpec,
    build_collision_ic_1c,
    build_collision_ic_3c,
    build_single_soliton_ic,
    zero_ic,
)

__all__ = ["SCHEMA_VERSION", "ICRecipe", "NoiseSpec", "RunConfig", "load_config", "parse_config"]

SCHEMA_VERSION = 1
IC_KINDS = ("single_soliton", "collision_1c", "collision_3c", "zero", "custom")
NOISE_FIELDS = ("psi0", "psi1", "q0")


@dataclass(frozen=True)
class ICRecipe:
    kind: str
    c: float | None = None
    alpha: tuple = (1.0,)
    x0: float = 0.0
    path: str | None = None

    @property
    def soliton(self):
        return SolitonSpec(self.c, self.alpha, self.x0)

    def build(self, n_components):
        if self.kind == "single_soliton":
            return build_single_soliton_ic(self.soliton, n_components)
        if self.kind == "collision_1c":
            return build_collision_ic_1c(self.x0)
        if self.kind == "collision_3c":
            return build_collision_ic_3c(self.x0)
        if self.kind == "zero":
            return zero_ic(n_components)
        return _read_custom_ic(self.path, n_components)


@dataclass(frozen=True)
class NoiseSpec:
    snr_db: float
    seed: int
    fields: tuple = NOISE_FIELDS


@dataclass(frozen=True)
class RunConfig:
    a: float
    b: float
    M: int
    tau: float
    t_final: float
    ic: ICRecipe
    n_components: int = 1
    noise: NoiseSpec | None = None
    snapshot_times: tuple = ()
    energy_every: int = 0
    error_every: int = 0
    error_vs_exact: SolitonSpec | None = None
    output_dir: str | None = None
    zero_nyquist: bool = False
    dealias: bool = False
    name: str = "run"

    @property
    def grid(self):
        return GridSpec(self.a, self.b, self.M)

    @property
    def h(self):
        return (self.b - self.a) / self.M

    @property
    def n_steps(self):
        return steps_for(self.t_final, self.tau)

    def with_spacing(self, h):
        return replace(self, M=GridSpec.from_spacing(self.a, self.b, h).M)

    def with_tau(self, tau):
        cfg = replace(self, tau=float(tau))
        cfg.n_steps  # noqa: B018 - validates t_final / tau
        return cfg

    def build_ic(self):
        return self.ic.build(self.n_components)

    def to_dict(self):
        out = asdict(self)
        out["h"] = self.h
        out["n_steps"] = self.n_steps
        return out


def steps_for(t, tau):
    """Number of steps ``t / tau``; raises ParameterError unless it is an integer."""
    ratio = t / tau
    n = int(round(ratio))
    if abs(ratio - n) > 1e-9 * max(1.0, abs(ratio)):
        raise ParameterError(f"t={t!r} is not a whole number of steps of tau={tau!r}")
    return n


def _read_custom_ic(path, N):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    cols = ["x"] + [f"psi0_{k}" for k in range(1, N + 1)] + [f"psi1_{k}" for k in range(1, N + 1)] + ["q0"]
    if not rows or any(c not in rows[0] for c in cols):
        raise ParameterError(f"{path}: expected columns {','.join(cols)}")
    try:
        data = {c: np.array([float(r[c]) for r in rows]) for c in cols}
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{path}: non-numeric value ({exc})") from None
    xs = data["x"]

    def lookup(col):
        values = data[col]

        def f(x):
            x = np.asarray(x, dtype=float)
            idx = np.searchsorted(xs, x)
            idx = np.clip(idx, 0, len(xs) - 1)
            if not np.allclose(xs[idx], x, rtol=0, atol=1e-9 * max(1.0, np.abs(xs).max())):
                raise ParameterError(f"{path}: grid points do not match the configured grid")
            return values[idx]

        return f

    return InitialCondition(
        psi0=[lookup(f"psi0_{k}") for k in range(1, N + 1)],
        psi1=[lookup(f"psi1_{k}") for k in range(1, N + 1)],
        q0=lookup("q0"),
        label=f"custom({path})",
    )


def _line_map(text):
    """Map key paths like ('grid', 'M') to 1-based line numbers."""
    lines = {}

    def walk(node, path):
        if isinstance(node, yaml.MappingNode):
            for key, value in node.value:
                p = path + (str(key.value),)
                lines[p] = key.start_mark.line + 1
                walk(value, p)

    try:
        walk(yaml.compose(text, Loader=yaml.SafeLoader), ())
    except yaml.YAMLError:
        pass
    return lines


class _Reader:
    """Typed access to a parsed document, raising ConfigError with key and line."""

    def __init__(self, doc, lines):
        self.doc = doc
        self.lines = lines

    def fail(self, path, message):
        raise ConfigError(".".join(path), message, self.lines.get(tuple(path)))

    def section(self, path, required=True):
        node = self.doc
        for key in path:
            if not isinstance(node, dict) or key not in node:
                if required:
                    self.fail(path, "missing section")
                return None
            node = node[key]
        if not isinstance(node, dict):
            self.fail(path, "must be a mapping")
        return node

    def check_keys(self, path, node, allowed):
        for key in node:
            if key not in allowed:
                self.fail(tuple(path) + (str(key),), f"unknown key (allowed: {', '.join(allowed)})")

    def get(self, path, kind, default=..., node=None):
        node = self.doc if node is None else node
        key = path[-1]
        if key not in node or node[key] is None:
            if default is ...:
                self.fail(path, "required key is missing")
            return default
        value = node[key]
        try:
            if kind is bool:
                if not isinstance(value, bool):
                    raise TypeError
                return value
            if kind is int:
                if isinstance(value, bool) or float(value) != int(value):
                    raise TypeError
                return int(value)
            if kind is float:
                if isinstance(value, bool):
                    raise TypeError
                out = float(value)
                if not math.isfinite(out):
                    raise TypeError
                return out
            if kind is str:
                if not isinstance(value, str):
                    raise TypeError
                return value
            if kind == "floats":
                seq = value if isinstance(value, (list, tuple)) else [value]
                return tuple(self.get(path, float, node={key: v}) for v in seq)
        except (TypeError, ValueError):
            self.fail(path, f"expected {getattr(kind, '__name__', kind)}, got {value!r}")
        raise AssertionError(kind)


def parse_config(text, base_dir=None):
    """
    Parse and validate a YAML run configuration.

    Raises :class:`~ckg.errors.ConfigError` naming the offending key (and its
    line, when known) on any schema or constraint violation.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError("<document>", f"invalid YAML: {exc}", mark.line + 1 if mark else None) from None
    if not isinstance(doc, dict):
        raise ConfigError("<document>", "top level must be a mapping")
    r = _Reader(doc, _line_map(text))
    r.check_keys((), doc, ("schema_version", "name", "grid", "time", "n_components",
                           "initial_condition", "noise", "output", "numerics"))

    version = r.get(("schema_version",), int)
    if version != SCHEMA_VERSION:
        r.fail(("schema_version",), f"unsupported schema version {version} (expected {SCHEMA_VERSION})")
    name = r.get(("name",), str, "run")

    grid = r.section(("grid",))
    r.check_keys(("grid",), grid, ("a", "b", "M", "h"))
    a = r.get(("grid", "a"), float, node=grid)
    b = r.get(("grid", "b"), float, node=grid)
    if not b > a:
        r.fail(("grid", "b"), f"must exceed a={a!r}")
    if ("M" in grid) == ("h" in grid):
        r.fail(("grid",), "give exactly one of M or h")
    if "M" in grid:
        M = r.get(("grid", "M"), int, node=grid)
        if M < 4 or M % 2:
            r.fail(("grid", "M"), f"M must be an even integer >= 4, got {M}")
    else:
        h = r.get(("grid", "h"), float, node=grid)
        if not h > 0:
            r.fail(("grid", "h"), "must be positive")
        try:
            M = GridSpec.from_spacing(a, b, h).M
        except ParameterError as exc:
            r.fail(("grid", "h"), str(exc))

    tsec = r.section(("time",))
    r.check_keys(("time",), tsec, ("tau", "t_final"))
    tau = r.get(("time", "tau"), float, node=tsec)
    if not tau > 0:
        r.fail(("time", "tau"), "must be positive")
    t_final = r.get(("time", "t_final"), float, node=tsec)
    if t_final < 0:
        r.fail(("time", "t_final"), "must be non-negative")
    try:
        steps_for(t_final, tau)
    except ParameterError as exc:
        r.fail(("time", "t_final"), str(exc))

    ic_node = r.section(("initial_condition",))
    p = ("initial_condition",)
    r.check_keys(p, ic_node, ("kind", "c", "alpha", "x0", "path"))
    kind = r.get(p + ("kind",), str, node=ic_node)
    if kind not in IC_KINDS:
        r.fail(p + ("kind",), f"unknown kind {kind!r} (expected one of {', '.join(IC_KINDS)})")
    # component count implied by the initial condition (None: any)
    n_default = {"collision_1c": 1, "collision_3c": 3}.get(kind)
    c = alpha = None
    x0 = r.get(p + ("x0",), float, 0.0, node=ic_node)
    path = None
    if kind == "single_soliton":
        c = r.get(p + ("c",), float, node=ic_node)
        if not abs(c) < 1:
            r.fail(p + ("c",), f"soliton speed must satisfy |c| < 1, got {c!r}")
        alpha = r.get(p + ("alpha",), "floats", (1.0,), node=ic_node)
        if abs(sum(v * v for v in alpha) - 1.0) > 1e-12:
            r.fail(p + ("alpha",), "amplitudes must satisfy sum(alpha**2) = 1")
        n_default = len(alpha)
    elif kind in ("collision_1c", "collision_3c"):
        if "x0" not in ic_node:
            r.fail(p + ("x0",), "required key is missing")
        if not x0 > 0:
            r.fail(p + ("x0",), f"dislocation must be positive, got {x0!r}")
    elif kind == "custom":
        path = r.get(p + ("path",), str, node=ic_node)
        if base_dir is not None and not Path(path).is_absolute():
            path = str(Path(base_dir) / path)

    n_components = r.get(("n_components",), int, n_default or 1)
    if n_components < 1:
        r.fail(("n_components",), "must be positive")
    if n_default is not None and n_components != n_default:
        r.fail(("n_components",), f"initial condition {kind!r} has {n_default} component(s), got {n_components}")
    ic = ICRecipe(kind, c, tuple(alpha) if alpha else (1.0,), x0, path)

    noise = None
    nsec = r.section(("noise",), required=False)
    if nsec is not None:
        r.check_keys(("noise",), nsec, ("snr_db", "seed", "fields"))
        fields = nsec.get("fields", list(NOISE_FIELDS))
        if not isinstance(fields, list) or any(f not in NOISE_FIELDS for f in fields):
            r.fail(("noise", "fields"), f"must be a list drawn from {', '.join(NOISE_FIELDS)}")
        noise = NoiseSpec(
            snr_db=r.get(("noise", "snr_db"), float, node=nsec),
            seed=r.get(("noise", "seed"), int, node=nsec),
            fields=tuple(fields),
        )

    osec = r.section(("output",), required=False) or {}
    r.check_keys(("output",), osec, ("dir", "snapshot_times", "energy_every", "error_every", "error_vs_exact"))
    out_dir = r.get(("output", "dir"), str, None, node=osec)
    if out_dir is not None and base_dir is not None and not Path(out_dir).is_absolute():
        out_dir = str(Path(base_dir) / out_dir)
    snaps = r.get(("output", "snapshot_times"), "floats", (), node=osec)
    for t in snaps:
        if not 0 <= t <= t_final:
            r.fail(("output", "snapshot_times"), f"time {t!r} outside [0, t_final]")
        try:
            steps_for(t, tau)
        except ParameterError as exc:
            r.fail(("output", "snapshot_times"), str(exc))
    energy_every = r.get(("output", "energy_every"), int, 0, node=osec)
    error_every = r.get(("output", "error_every"), int, 0, node=osec)
    for key, val in (("energy_every", energy_every), ("error_every", error_every)):
        if val < 0:
            r.fail(("output", key), "must be non-negative")

    exact = None
    ev = osec.get("error_vs_exact")
    if ev is True:
        if kind != "single_soliton":
            r.fail(("output", "error_vs_exact"), "true is only valid for a single_soliton initial condition")
        exact = SolitonSpec(c, alpha, x0)
    elif isinstance(ev, dict):
        q = ("output", "error_vs_exact")
        r.check_keys(q, ev, ("c", "alpha", "x0"))
        ec = r.get(q + ("c",), float, node=ev)
        if not abs(ec) < 1:
            r.fail(q + ("c",), f"soliton speed must satisfy |c| < 1, got {ec!r}")
        exact = SolitonSpec(ec, r.get(q + ("alpha",), "floats", (1.0,), node=ev), r.get(q + ("x0",), float, 0.0, node=ev))
    elif ev not in (None, False):
        r.fail(("output", "error_vs_exact"), "expected true, false or a soliton mapping")
    if error_every and exact is None:
        r.fail(("output", "error_every"), "needs output.error_vs_exact")

    num = r.section(("numerics",), required=False) or {}
    r.check_keys(("numerics",), num, ("zero_nyquist", "dealias"))

    return RunConfig(
        a=a, b=b, M=M, tau=tau, t_final=t_final, ic=ic, n_components=n_components,
        noise=noise, snapshot_times=tuple(snaps), energy_every=energy_every,
        error_every=error_every, error_vs_exact=exact, output_dir=out_dir,
        zero_nyquist=r.get(("numerics", "zero_nyquist"), bool, False, node=num),
        dealias=r.get(("numerics", "dealias"), bool, False, node=num),
        name=name,
    )


def load_config(path):
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)


def dump_config(cfg):
    """YAML text that :func:`parse_config` turns back into ``cfg``."""
    ic = {"kind": cfg.ic.kind}
    if cfg.ic.kind == "single_soliton":
        ic.update(c=cfg.ic.c, alpha=list(cfg.ic.alpha))
    if cfg.ic.kind != "zero" and cfg.ic.x0:
        ic["x0"] = cfg.ic.x0
    if cfg.ic.path:
        ic["path"] = cfg.ic.path
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": cfg.name,
        "grid": {"a": cfg.a, "b": cfg.b, "M": cfg.M},
        "time": {"tau": cfg.tau, "t_final": cfg.t_final},
        "n_components": cfg.n_components,
        "initial_condition": ic,
        "output": {
            "snapshot_times": list(cfg.snapshot_times),
            "energy_every": cfg.energy_every,
            "error_every": cfg.error_every,
        },
        "numerics": {"zero_nyquist": cfg.zero_nyquist, "dealias": cfg.dealias},
    }
    if cfg.output_dir:
        doc["output"]["dir"] = cfg.output_dir
    if cfg.error_vs_exact is not None:
        e = cfg.error_vs_exact
        doc["output"]["error_vs_exact"] = {"c": e.c, "alpha": list(e.alpha), "x0": e.x0}
    if cfg.noise is not None:
        doc["noise"] = {"snr_db": cfg.noise.snr_db, "seed": cfg.noise.seed, "fields": list(cfg.noise.fields)}
    return yaml.safe_dump(doc, sort_keys=False)
