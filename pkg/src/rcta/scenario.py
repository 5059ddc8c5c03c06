"""Scenario files: grammar, parser, canonical serializer.

A scenario file is line-oriented text: ``[section]`` headers followed by
``key = value`` lines; ``#`` starts a comment.  Sensor labels in files are
1-based and translated to 0-based indices internally.  Unknown keys are
rejected, and every reported problem names the offending line and field.

    [scenario]
    dimension = 2            # parameter length d
    theta = 2.5 -1           # ground truth (hidden from sensors), d entries
    f = 1                    # attack budget per in-neighborhood
    s_set = 1 2 3 4          # claimed well-excited sensors (1-based)
    rounds = 500             # optional, default 500
    weight_policy = uniform  # optional, default uniform
    pe_window = 4            # optional excitation probe window T, default 4
    pe_level = 1e-6          # optional excitation probe level, default 1e-6
    seed = 7                 # optional master seed, default 0

    [graph]
    nodes = 8
    generate = s_size=4 r=4 seed=7    # deterministic generator, or instead:
    # edge = 2 -> 1                   # repeated: 1 receives from 2
    # into 1 = 2 3 4                  # adjacency: in-neighbors of 1

    [sensor 1]                        # one section per node, labels 1..n
    role = faulty
    attack = constant                 # constant | ramp | sinusoid |
    value = 2 -2                      #   random-uniform | custom-table |
                                      #   replay | per-edge
    [sensor 2]
    role = normal
    mu = 0.2
    regressor = recursive-cosine      # constant | alternating-period-2 |
    base = 0 1                        #   recursive-cosine | custom-table
    slot = 1                          # 1-based coordinate holding the recursion
    initial = 1
    angular_step = pi/4               # floats may be written pi, -pi, pi/<int>
    initial_estimate = 0 0            # optional, default zeros

Regressor parameters: ``constant`` takes ``value``; ``alternating-period-2``
takes ``even`` and ``odd``; ``custom-table`` takes repeated ``row`` lines
(cycled).  Attack parameters: ``ramp`` takes ``offset``/``slope``;
``sinusoid`` takes ``offset``/``amplitude``/``omega`` plus optional
``phase``/``slope``; ``random-uniform`` takes ``low``/``high`` plus optional
``seed`` (derived from the scenario seed when omitted); ``custom-table`` and
``replay`` take repeated ``row`` lines, ``replay`` plus optional ``delay``;
``per-edge`` takes ``default`` and repeated ``to <label> = <vector>`` lines.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .attack import (
    ConstantAttack,
    PerEdgeAttack,
    RampAttack,
    RandomUniformAttack,
    ReplayAttack,
    SinusoidAttack,
    TableAttack,
)
from .drem import (
    AlternatingRegressor,
    ConstantRegressor,
    RecursiveCosineRegressor,
    TableRegressor,
)
from .graph import Digraph, generate_robust_topology
from .update import FAULTY, NORMAL

WEIGHT_POLICIES = ("uniform",)


class ParseError(Exception):
    """Carries every problem found in a scenario file."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))


@dataclass
class SensorConfig:
    role: str
    mu: float | None = None
    regressor: object | None = None
    attack: object | None = None
    initial: np.ndarray | None = None


@dataclass
class Scenario:
    graph: Digraph
    dimension: int
    theta: np.ndarray
    f: int
    s_set: frozenset[int]
    sensors: list[SensorConfig]
    rounds: int = 500
    weight_policy: str = "uniform"
    pe_window: int = 4
    pe_level: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        n = self.graph.node_count
        self.theta = np.asarray(self.theta, dtype=float)
        if self.theta.shape != (self.dimension,):
            raise ValueError(f"theta must have {self.dimension} entries")
        if len(self.sensors) != n:
            raise ValueError(f"need one sensor config per node ({n}), got {len(self.sensors)}")
        if self.f < 0 or self.rounds < 1:
            raise ValueError("f must be nonnegative and rounds positive")
        if not self.s_set <= set(range(n)):
            raise ValueError("s_set contains invalid node indices")
        if self.weight_policy not in WEIGHT_POLICIES:
            raise ValueError(f"unknown weight policy {self.weight_policy!r}")
        for idx, cfg in enumerate(self.sensors):
            if cfg.role == NORMAL:
                if cfg.regressor is None or cfg.mu is None or not cfg.mu > 0:
                    raise ValueError(f"sensor {idx + 1}: normal sensors need a regressor and mu > 0")
            elif cfg.role == FAULTY:
                if cfg.attack is None:
                    raise ValueError(f"sensor {idx + 1}: faulty sensors need an attack script")
            else:
                raise ValueError(f"sensor {idx + 1}: unknown role {cfg.role!r}")
            if cfg.initial is None:
                cfg.initial = np.zeros(self.dimension)
            cfg.initial = np.asarray(cfg.initial, dtype=float)
            if cfg.initial.shape != (self.dimension,):
                raise ValueError(f"sensor {idx + 1}: initial estimate must have {self.dimension} entries")

    def normal_ids(self) -> list[int]:
        return [i for i, c in enumerate(self.sensors) if c.role == NORMAL]

    def faulty_ids(self) -> list[int]:
        return [i for i, c in enumerate(self.sensors) if c.role == FAULTY]


# ---------------------------------------------------------------------------
# low-level file reading

_SECTION_RE = re.compile(r"^\[(.+)\]$")
_EDGE_RE = re.compile(r"^(\d+)\s*->\s*(\d+)$")
_PI_RE = re.compile(r"^(-?)pi(?:/(\d+))?$")


@dataclass
class _Entry:
    line: int
    key: str
    value: str


@dataclass
class _Section:
    name: str
    line: int
    entries: list[_Entry] = field(default_factory=list)


def _read_sections(text: str, problems: list[str]) -> list[_Section]:
    sections: list[_Section] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            sections.append(_Section(name=m.group(1).strip(), line=lineno))
            continue
        if "=" not in line:
            problems.append(f"line {lineno}: expected 'key = value' or '[section]', got {line!r}")
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sections:
            problems.append(f"line {lineno}: {key}: key appears before any [section]")
            continue
        if not key:
            problems.append(f"line {lineno}: missing key before '='")
            continue
        sections[-1].entries.append(_Entry(lineno, key, value))
    return sections


class _SectionReader:
    """Pulls typed values out of one section, accumulating named problems."""

    _REPEATABLE_PREFIXES = ("edge", "row", "into ", "to ")

    def __init__(self, section: _Section, problems: list[str]):
        self.section = section
        self.problems = problems
        self._consumed: set[int] = set()
        seen: dict[str, int] = {}
        for e in section.entries:
            repeatable = e.key in ("edge", "row") or e.key.startswith(("into ", "to "))
            if not repeatable and e.key in seen:
                self._err(e.line, e.key, f"duplicate key (first on line {seen[e.key]})")
            seen.setdefault(e.key, e.line)

    def _err(self, line: int, key: str, msg: str) -> None:
        self.problems.append(f"line {line}: [{self.section.name}] {key}: {msg}")

    def missing(self, key: str) -> None:
        self.problems.append(f"line {self.section.line}: [{self.section.name}]: missing required key {key!r}")

    def raw(self, key: str) -> _Entry | None:
        for e in self.section.entries:
            if e.key == key:
                self._consumed.add(id(e))
                return e
        return None

    def raw_all(self, key: str) -> list[_Entry]:
        out = [e for e in self.section.entries if e.key == key]
        for e in out:
            self._consumed.add(id(e))
        return out

    def prefixed(self, prefix: str) -> list[tuple[_Entry, str]]:
        """Entries whose key is '<prefix> <arg>'; returns (entry, arg)."""
        out = []
        for e in self.section.entries:
            if e.key.startswith(prefix + " "):
                self._consumed.add(id(e))
                out.append((e, e.key[len(prefix) + 1 :].strip()))
        return out

    def reject_unknown(self) -> None:
        for e in self.section.entries:
            if id(e) not in self._consumed:
                self._err(e.line, e.key, "unknown key")

    # typed getters -------------------------------------------------------

    def get_int(self, key: str, *, required: bool = False, default: int | None = None,
                minimum: int | None = None) -> int | None:
        e = self.raw(key)
        if e is None:
            if required:
                self.missing(key)
            return default
        try:
            v = int(e.value)
        except ValueError:
            self._err(e.line, key, f"expected an integer, got {e.value!r}")
            return default
        if minimum is not None and v < minimum:
            self._err(e.line, key, f"must be at least {minimum}, got {v}")
            return default
        return v

    def get_float(self, key: str, *, required: bool = False, default: float | None = None) -> float | None:
        e = self.raw(key)
        if e is None:
            if required:
                self.missing(key)
            return default
        v = _parse_float(e.value)
        if v is None:
            self._err(e.line, key, f"expected a number, got {e.value!r}")
            return default
        return v

    def get_str(self, key: str, *, required: bool = False, default: str | None = None,
                choices: tuple[str, ...] | None = None) -> str | None:
        e = self.raw(key)
        if e is None:
            if required:
                self.missing(key)
            return default
        if choices is not None and e.value not in choices:
            self._err(e.line, key, f"expected one of {', '.join(choices)}; got {e.value!r}")
            return default
        return e.value

    def get_vector(self, key: str, dim: int | None, *, required: bool = False) -> np.ndarray | None:
        e = self.raw(key)
        if e is None:
            if required:
                self.missing(key)
            return None
        return self._vector_from(e, key, dim)

    def _vector_from(self, e: _Entry, key: str, dim: int | None) -> np.ndarray | None:
        vals = [_parse_float(tok) for tok in e.value.split()]
        if not vals or any(v is None for v in vals):
            self._err(e.line, key, f"expected {dim or 'some'} numbers, got {e.value!r}")
            return None
        if dim is not None and len(vals) != dim:
            self._err(e.line, key, f"expected {dim} entries, got {len(vals)}")
            return None
        return np.array(vals, dtype=float)

    def get_rows(self, key: str, dim: int | None, *, required: bool = False) -> list[np.ndarray] | None:
        entries = self.raw_all(key)
        if not entries:
            if required:
                self.missing(key)
            return None
        rows = [self._vector_from(e, key, dim) for e in entries]
        if any(r is None for r in rows):
            return None
        return rows  # type: ignore[return-value]

    def get_label(self, key: str, n: int, *, required: bool = False) -> int | None:
        """1-based label in the file, 0-based index out."""
        v = self.get_int(key, required=required)
        if v is None:
            return None
        if not (1 <= v <= n):
            e = self.raw(key)
            self._err(e.line if e else self.section.line, key, f"label must be in 1..{n}, got {v}")
            return None
        return v - 1


def _parse_float(token: str) -> float | None:
    m = _PI_RE.match(token)
    if m:
        v = math.pi / int(m.group(2)) if m.group(2) else math.pi
        return -v if m.group(1) else v
    try:
        return float(token)
    except ValueError:
        return None


# ---------------------------------------------------------------------------
# semantic passes

def _parse_graph(sec: _Section, problems: list[str], scenario_seed: int) -> Digraph | None:
    r = _SectionReader(sec, problems)
    n = r.get_int("nodes", required=True, minimum=1)
    gen = r.raw("generate")
    edge_entries = r.raw_all("edge")
    into_entries = r.prefixed("into")
    r.reject_unknown()
    if n is None:
        return None
    if gen is not None and (edge_entries or into_entries):
        problems.append(f"line {gen.line}: [graph] generate: cannot combine with explicit edge/into lines")
        return None
    if gen is not None:
        params = {}
        ok = True
        for tok in gen.value.split():
            key, eq, val = tok.partition("=")
            if not eq or key not in ("s_size", "r", "seed", "extra_edge_prob"):
                problems.append(f"line {gen.line}: [graph] generate: bad token {tok!r} "
                                "(expected s_size=.. r=.. [seed=..] [extra_edge_prob=..])")
                ok = False
                continue
            params[key] = val
        if not ok:
            return None
        try:
            s_size = int(params["s_size"]) if "s_size" in params else None
            rr = int(params["r"]) if "r" in params else None
            gseed = int(params.get("seed", scenario_seed))
            prob = float(params.get("extra_edge_prob", 0.15))
        except ValueError as exc:
            problems.append(f"line {gen.line}: [graph] generate: {exc}")
            return None
        if s_size is None or rr is None:
            problems.append(f"line {gen.line}: [graph] generate: s_size and r are required")
            return None
        try:
            return generate_robust_topology(n, s_size, rr, gseed, extra_edge_prob=prob)
        except (ValueError, RuntimeError) as exc:
            problems.append(f"line {gen.line}: [graph] generate: {exc}")
            return None
    edges: set[tuple[int, int]] = set()
    ok = True
    for e in edge_entries:
        m = _EDGE_RE.match(e.value)
        if not m:
            problems.append(f"line {e.line}: [graph] edge: expected 'j -> i', got {e.value!r}")
            ok = False
            continue
        j, i = int(m.group(1)), int(m.group(2))
        if not (1 <= j <= n and 1 <= i <= n) or j == i:
            problems.append(f"line {e.line}: [graph] edge: {e.value!r} invalid for {n} nodes (labels 1..{n}, no self-loops)")
            ok = False
            continue
        edges.add((j - 1, i - 1))
    for e, arg in into_entries:
        try:
            i = int(arg)
        except ValueError:
            problems.append(f"line {e.line}: [graph] into {arg}: label must be an integer")
            ok = False
            continue
        senders = []
        try:
            senders = [int(t) for t in e.value.split()]
        except ValueError:
            problems.append(f"line {e.line}: [graph] into {arg}: expected sender labels, got {e.value!r}")
            ok = False
        for j in senders:
            if not (1 <= j <= n and 1 <= i <= n) or j == i:
                problems.append(f"line {e.line}: [graph] into {arg}: bad sender {j} (labels 1..{n}, no self-loops)")
                ok = False
            else:
                edges.add((j - 1, i - 1))
    if not ok:
        return None
    if not edge_entries and not into_entries and n > 1:
        problems.append(f"line {sec.line}: [graph]: need either 'generate = ...' or explicit edge/into lines")
        return None
    return Digraph(n, edges)


_REGRESSOR_KINDS = ("constant", "alternating-period-2", "recursive-cosine", "custom-table")
_ATTACK_KINDS = ("constant", "ramp", "sinusoid", "random-uniform", "custom-table", "replay", "per-edge")


def _parse_regressor(r: _SectionReader, kind: str, d: int | None):
    if kind == "constant":
        value = r.get_vector("value", d, required=True)
        return ConstantRegressor(value) if value is not None else None
    if kind == "alternating-period-2":
        even = r.get_vector("even", d, required=True)
        odd = r.get_vector("odd", d, required=True)
        return AlternatingRegressor(even, odd) if even is not None and odd is not None else None
    if kind == "recursive-cosine":
        base = r.get_vector("base", d, required=True)
        slot = r.get_int("slot", required=True, minimum=1)
        initial = r.get_float("initial", required=True)
        step = r.get_float("angular_step", required=True)
        if None in (slot, initial, step) or base is None:
            return None
        if d is not None and slot > d:
            r._err(r.section.line, "slot", f"must be in 1..{d}, got {slot}")
            return None
        return RecursiveCosineRegressor(base, slot - 1, initial, step)
    if kind == "custom-table":
        rows = r.get_rows("row", d, required=True)
        return TableRegressor(rows) if rows else None
    return None


def _parse_attack(r: _SectionReader, kind: str, d: int | None, n: int, auto_seed: int):
    if kind == "constant":
        value = r.get_vector("value", d, required=True)
        return ConstantAttack(value) if value is not None else None
    if kind == "ramp":
        offset = r.get_vector("offset", d, required=True)
        slope = r.get_vector("slope", d, required=True)
        return RampAttack(offset, slope) if offset is not None and slope is not None else None
    if kind == "sinusoid":
        offset = r.get_vector("offset", d, required=True)
        amplitude = r.get_vector("amplitude", d, required=True)
        omega = r.get_vector("omega", d, required=True)
        phase = r.get_vector("phase", d)
        slope = r.get_vector("slope", d)
        if offset is None or amplitude is None or omega is None:
            return None
        return SinusoidAttack(offset, amplitude, omega, phase=phase, slope=slope)
    if kind == "random-uniform":
        low = r.get_vector("low", d, required=True)
        high = r.get_vector("high", d, required=True)
        seed = r.get_int("seed", default=auto_seed)
        if low is None or high is None:
            return None
        try:
            return RandomUniformAttack(low, high, seed)
        except ValueError as exc:
            r._err(r.section.line, "low", str(exc))
            return None
    if kind == "custom-table":
        rows = r.get_rows("row", d, required=True)
        return TableAttack(rows) if rows else None
    if kind == "replay":
        rows = r.get_rows("row", d, required=True)
        delay = r.get_int("delay", default=0, minimum=0)
        return ReplayAttack(rows, delay) if rows else None
    if kind == "per-edge":
        default = r.get_vector("default", d, required=True)
        per = {}
        ok = default is not None
        for e, arg in r.prefixed("to"):
            try:
                recv = int(arg)
            except ValueError:
                r._err(e.line, f"to {arg}", "receiver label must be an integer")
                ok = False
                continue
            if not (1 <= recv <= n):
                r._err(e.line, f"to {arg}", f"label must be in 1..{n}")
                ok = False
                continue
            vec = r._vector_from(e, f"to {arg}", d)
            if vec is None:
                ok = False
                continue
            per[recv - 1] = ConstantAttack(vec)
        if not ok:
            return None
        return PerEdgeAttack(ConstantAttack(default), per)
    return None


def _parse_sensor(sec: _Section, label: int, d: int | None, n: int,
                  scenario_seed: int, problems: list[str]) -> SensorConfig | None:
    r = _SectionReader(sec, problems)
    role = r.get_str("role", required=True, choices=(NORMAL, FAULTY))
    initial = r.get_vector("initial_estimate", d)
    cfg: SensorConfig | None = None
    if role == NORMAL:
        mu = r.get_float("mu", required=True)
        kind = r.get_str("regressor", required=True, choices=_REGRESSOR_KINDS)
        source = _parse_regressor(r, kind, d) if kind else None
        if mu is not None and not mu > 0:
            e = r.raw("mu")
            r._err(e.line if e else sec.line, "mu", f"must be positive, got {mu}")
            mu = None
        if mu is not None and source is not None:
            cfg = SensorConfig(role=NORMAL, mu=mu, regressor=source, initial=initial)
    elif role == FAULTY:
        kind = r.get_str("attack", required=True, choices=_ATTACK_KINDS)
        auto_seed = scenario_seed * 100003 + label
        script = _parse_attack(r, kind, d, n, auto_seed) if kind else None
        if script is not None:
            cfg = SensorConfig(role=FAULTY, attack=script, initial=initial)
    r.reject_unknown()
    return cfg


def parse_scenario_text(text: str, *, name: str = "<scenario>", seed_override: int | None = None) -> Scenario:
    problems: list[str] = []
    sections = _read_sections(text, problems)
    by_name: dict[str, _Section] = {}
    sensor_secs: dict[int, _Section] = {}
    for sec in sections:
        if sec.name.startswith("sensor"):
            arg = sec.name[len("sensor") :].strip()
            if not arg.isdigit():
                problems.append(f"line {sec.line}: [{sec.name}]: expected '[sensor <label>]'")
                continue
            lab = int(arg)
            if lab in sensor_secs:
                problems.append(f"line {sec.line}: [{sec.name}]: duplicate sensor section")
                continue
            sensor_secs[lab] = sec
        elif sec.name in ("scenario", "graph"):
            if sec.name in by_name:
                problems.append(f"line {sec.line}: [{sec.name}]: duplicate section")
                continue
            by_name[sec.name] = sec
        else:
            problems.append(f"line {sec.line}: [{sec.name}]: unknown section")

    for required in ("scenario", "graph"):
        if required not in by_name:
            problems.append(f"{name}: missing required section [{required}]")
    if problems and ("scenario" not in by_name or "graph" not in by_name):
        raise ParseError(problems)

    sc = _SectionReader(by_name["scenario"], problems)
    dimension = sc.get_int("dimension", required=True, minimum=1)
    theta = sc.get_vector("theta", dimension, required=True)
    f = sc.get_int("f", required=True, minimum=0)
    rounds = sc.get_int("rounds", default=500, minimum=1)
    policy = sc.get_str("weight_policy", default="uniform", choices=WEIGHT_POLICIES)
    pe_window = sc.get_int("pe_window", default=4, minimum=1)
    pe_level = sc.get_float("pe_level", default=1e-6)
    seed = sc.get_int("seed", default=0)
    if seed_override is not None:
        seed = seed_override
    s_entry = sc.raw("s_set")
    sc.reject_unknown()

    graph = _parse_graph(by_name["graph"], problems, seed)
    n = graph.node_count if graph is not None else None

    s_set: frozenset[int] | None = None
    if s_entry is None:
        problems.append(f"line {by_name['scenario'].line}: [scenario]: missing required key 's_set'")
    elif n is not None:
        labels = []
        ok = True
        for tok in s_entry.value.split():
            try:
                lab = int(tok)
            except ValueError:
                problems.append(f"line {s_entry.line}: [scenario] s_set: bad label {tok!r}")
                ok = False
                continue
            if not (1 <= lab <= n):
                problems.append(f"line {s_entry.line}: [scenario] s_set: label must be in 1..{n}, got {lab}")
                ok = False
                continue
            labels.append(lab - 1)
        if ok:
            s_set = frozenset(labels)

    sensors: list[SensorConfig | None] = [None] * (n or 0)
    if n is not None:
        for lab in range(1, n + 1):
            if lab not in sensor_secs:
                problems.append(f"{name}: missing section [sensor {lab}]")
        for lab, sec in sensor_secs.items():
            if lab < 1 or lab > n:
                problems.append(f"line {sec.line}: [{sec.name}]: label must be in 1..{n}")
                continue
            sensors[lab - 1] = _parse_sensor(sec, lab, dimension, n, seed, problems)

    if problems or any(cfg is None for cfg in sensors) or graph is None:
        if not problems:
            problems.append(f"{name}: scenario incomplete")
        raise ParseError(problems)

    try:
        return Scenario(
            graph=graph,
            dimension=dimension,
            theta=theta,
            f=f,
            s_set=s_set if s_set is not None else frozenset(),
            sensors=sensors,  # type: ignore[arg-type]
            rounds=rounds,
            weight_policy=policy,
            pe_window=pe_window,
            pe_level=pe_level,
            seed=seed,
        )
    except ValueError as exc:
        raise ParseError([f"{name}: {exc}"]) from exc


def parse_scenario(path, *, seed_override: int | None = None) -> Scenario:
    """Parse a scenario file into a fully validated Scenario."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_scenario_text(text, name=str(path), seed_override=seed_override)


# ---------------------------------------------------------------------------
# canonical serialization

def _fmt(x: float) -> str:
    return repr(float(x))

def _fmt_vec(v) -> str:
    return " ".join(_fmt(x) for x in np.asarray(v, dtype=float))


def _regressor_lines(src) -> list[str]:
    if isinstance(src, ConstantRegressor):
        return ["regressor = constant", f"value = {_fmt_vec(src.value)}"]
    if isinstance(src, AlternatingRegressor):
        return ["regressor = alternating-period-2", f"even = {_fmt_vec(src.even)}", f"odd = {_fmt_vec(src.odd)}"]
    if isinstance(src, RecursiveCosineRegressor):
        return [
            "regressor = recursive-cosine",
            f"base = {_fmt_vec(src.base)}",
            f"slot = {src.slot + 1}",
            f"initial = {_fmt(src.initial)}",
            f"angular_step = {_fmt(src.angular_step)}",
        ]
    if isinstance(src, TableRegressor):
        return ["regressor = custom-table"] + [f"row = {_fmt_vec(r)}" for r in src.rows]
    raise ValueError(f"cannot serialize regressor of type {type(src).__name__}")


def _attack_lines(script) -> list[str]:
    if isinstance(script, ConstantAttack):
        return ["attack = constant", f"value = {_fmt_vec(script.value)}"]
    if isinstance(script, RampAttack):
        return ["attack = ramp", f"offset = {_fmt_vec(script.offset)}", f"slope = {_fmt_vec(script.slope)}"]
    if isinstance(script, SinusoidAttack):
        lines = [
            "attack = sinusoid",
            f"offset = {_fmt_vec(script.offset)}",
            f"amplitude = {_fmt_vec(script.amplitude)}",
            f"omega = {_fmt_vec(script.omega)}",
        ]
        if np.any(script.phase):
            lines.append(f"phase = {_fmt_vec(script.phase)}")
        if np.any(script.slope):
            lines.append(f"slope = {_fmt_vec(script.slope)}")
        return lines
    if isinstance(script, RandomUniformAttack):
        return [
            "attack = random-uniform",
            f"low = {_fmt_vec(script.low)}",
            f"high = {_fmt_vec(script.high)}",
            f"seed = {script.seed}",
        ]
    if isinstance(script, TableAttack):
        return ["attack = custom-table"] + [f"row = {_fmt_vec(r)}" for r in script.rows]
    if isinstance(script, ReplayAttack):
        return ["attack = replay"] + [f"row = {_fmt_vec(r)}" for r in script.rows] + [f"delay = {script.delay}"]
    if isinstance(script, PerEdgeAttack):
        if not isinstance(script.default, ConstantAttack) or any(
            not isinstance(s, ConstantAttack) for s in script.per_receiver.values()
        ):
            raise ValueError("per-edge scripts with non-constant payloads are API-only and cannot be serialized")
        lines = ["attack = per-edge", f"default = {_fmt_vec(script.default.value)}"]
        for recv in sorted(script.per_receiver):
            lines.append(f"to {recv + 1} = {_fmt_vec(script.per_receiver[recv].value)}")
        return lines
    raise ValueError(f"cannot serialize attack of type {type(script).__name__}")


def serialize_scenario(sc: Scenario) -> str:
    """Canonical text form; parsing it back yields an identical Scenario."""
    out = [
        "[scenario]",
        f"dimension = {sc.dimension}",
        f"theta = {_fmt_vec(sc.theta)}",
        f"f = {sc.f}",
        f"s_set = {' '.join(str(i + 1) for i in sorted(sc.s_set))}",
        f"rounds = {sc.rounds}",
        f"weight_policy = {sc.weight_policy}",
        f"pe_window = {sc.pe_window}",
        f"pe_level = {_fmt(sc.pe_level)}",
        f"seed = {sc.seed}",
        "",
        "[graph]",
        f"nodes = {sc.graph.node_count}",
    ]
    for j, i in sorted(sc.graph.edges):
        out.append(f"edge = {j + 1} -> {i + 1}")
    for idx, cfg in enumerate(sc.sensors):
        out.append("")
        out.append(f"[sensor {idx + 1}]")
        out.append(f"role = {cfg.role}")
        if cfg.role == NORMAL:
            out.append(f"mu = {_fmt(cfg.mu)}")
            out.extend(_regressor_lines(cfg.regressor))
        else:
            out.extend(_attack_lines(cfg.attack))
        if np.any(cfg.initial):
            out.append(f"initial_estimate = {_fmt_vec(cfg.initial)}")
    return "\n".join(out) + "\n"


def scenario_hash(sc: Scenario) -> str:
    """Provenance digest of the canonical form, stamped into output files."""
    return hashlib.sha256(serialize_scenario(sc).encode("utf-8")).hexdigest()[:16]
