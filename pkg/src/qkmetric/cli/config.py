"""Scenario configuration: TOML file and command-line flags."""

from __future__ import annotations

import hashlib
import json
import re
import sys
from dataclasses import asdict, dataclass, field, replace

from ..errors import ConfigError
from ..prepotential import CubicForm, Quadratic, VerySpecial

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

__all__ = ["ScenarioConfig", "parse_cubic", "load_toml", "COMMANDS"]

COMMANDS = ("verify", "einstein", "rnorm2", "isometry", "geodesic", "domains")
MODELS = ("quadratic", "very-special")
FORMATS = ("json", "csv")

_FACTOR = re.compile(r"x(\d+)(?:\s*\^\s*(\d+))?")
_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?P<coef>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*"
    r"(?P<vars>x\d+(?:\s*\^\s*\d+)?(?:\s*\*?\s*x\d+(?:\s*\^\s*\d+)?)*)\s*"
)


def parse_cubic(text: str) -> dict[tuple[int, int, int], float]:
    """Parse a sum of cubic monomials such as ``"x1^3 - 3 x1*x2^2"``.

    Returns ``{(a, b, c): coefficient}`` with sorted 1-based indices.
    """
    out: dict[tuple[int, int, int], float] = {}
    pos = 0
    text = text.strip()
    if not text:
        raise ConfigError("empty cubic polynomial")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (pos > 0 and m.group("sign") is None):
            raise ConfigError(f"cannot parse cubic polynomial {text!r} at column {pos + 1}")
        coef = float(m.group("coef")) if m.group("coef") else 1.0
        if m.group("sign") == "-":
            coef = -coef
        idx: list[int] = []
        for f in _FACTOR.finditer(m.group("vars")):
            i, power = int(f.group(1)), int(f.group(2) or 1)
            if i < 1:
                raise ConfigError(f"variable x{i} in {text!r}: indices start at 1")
            idx.extend([i] * power)
        if len(idx) != 3:
            raise ConfigError(f"term {m.group(0).strip()!r} has degree {len(idx)}, expected 3")
        key = tuple(sorted(idx))
        out[key] = out.get(key, 0.0) + coef
        pos = m.end()
    return out


@dataclass(frozen=True)
class ScenarioConfig:
    command: str = "verify"
    model: str = "quadratic"
    n: int | None = None
    h: str | None = None
    cubic: tuple = ()
    c: tuple = (0.0,)
    rho: tuple = ()
    points: int = 3
    seed: int = 0
    steps: int = 40
    covariant: bool = False
    tol: tuple = ()
    out: str | None = None
    format: str = "json"
    jobs: int = 1
    _n_resolved: int = field(default=0, repr=False, compare=False)

    # keys that do not influence the computed checks
    OUTPUT_KEYS = ("out", "format", "jobs")

    def validated(self) -> "ScenarioConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.points < 1:
            raise ConfigError("points must be at least 1")
        if self.steps < 1:
            raise ConfigError("steps must be at least 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if not self.c:
            raise ConfigError("at least one value of c is required")
        if self.command != "domains" and any(r <= 0 for r in self.rho):
            raise ConfigError("rho values must be positive (indefinite branches are not assembled)")
        if self.model == "quadratic":
            if self.h or self.cubic:
                raise ConfigError("a cubic form only makes sense with --model very-special")
            n = 1 if self.n is None else self.n
            if n < 0:
                raise ConfigError("n must be non-negative")
        else:
            if bool(self.h) == bool(self.cubic):
                raise ConfigError("very-special needs exactly one of h (polynomial) or cubic (entries)")
            n = self._cubic_form_unchecked().n
        return replace(self, _n_resolved=n)

    def _cubic_form_unchecked(self) -> CubicForm:
        if self.h:
            monomials = parse_cubic(self.h)
            needed = max(max(k) for k in monomials)
            n = needed if self.n is None else self.n
            if n < needed:
                raise ConfigError(f"h uses x{needed} but n = {n}")
            return CubicForm.from_monomials(n, monomials)
        entries = [tuple(e) for e in self.cubic]
        needed = max(int(max(e[:3])) for e in entries)
        n = needed if self.n is None else self.n
        try:
            return CubicForm.from_entries(n, entries)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid cubic entries: {exc}") from exc

    def build_model(self):
        if self.model == "quadratic":
            return Quadratic(self._n_resolved)
        return VerySpecial(self._cubic_form_unchecked())

    @property
    def tolerances(self) -> dict[str, float]:
        return dict(self.tol)

    def canonical(self) -> dict:
        d = asdict(self)
        d.pop("_n_resolved")
        for k in self.OUTPUT_KEYS:
            d.pop(k)
        d["n"] = self._n_resolved
        d["c"] = [float(x) for x in self.c]
        d["rho"] = [float(x) for x in self.rho]
        d["cubic"] = [list(e) for e in self.cubic]
        d["tol"] = {k: v for k, v in sorted(self.tol)}
        return d

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


_TOML_KEYS = {
    "command", "model", "n", "h", "cubic", "c", "rho", "points", "seed",
    "steps", "covariant", "tol", "out", "format", "jobs",
}


def _float_list(value, key):
    if isinstance(value, (int, float)):
        value = [value]
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key} must be a number or a list of numbers") from exc


def load_toml(path: str) -> dict:
    """Read a scenario file into keyword arguments for :class:`ScenarioConfig`."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    unknown = set(raw) - _TOML_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    out = dict(raw)
    for key in ("c", "rho"):
        if key in out:
            out[key] = _float_list(out[key], f"{path}: {key}")
    if "cubic" in out:
        entries = out["cubic"]
        if not isinstance(entries, list) or not all(isinstance(e, list) and len(e) == 4 for e in entries):
            raise ConfigError(f"{path}: cubic must be a list of [a, b, c, value] entries")
        out["cubic"] = tuple(tuple(e) for e in entries)
    if "tol" in out:
        if not isinstance(out["tol"], dict):
            raise ConfigError(f"{path}: tol must be a table")
        out["tol"] = tuple(sorted((str(k), float(v)) for k, v in out["tol"].items()))
    for key, typ in (("n", int), ("points", int), ("seed", int), ("steps", int), ("jobs", int)):
        if key in out and (not isinstance(out[key], int) or isinstance(out[key], bool)):
            raise ConfigError(f"{path}: {key} must be an integer")
    return out
