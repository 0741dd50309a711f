"""Parameter sweeps of the entangling power, written as CSV."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .entanglement import entangling_power_grid, entangling_power_monte_carlo, optimal_local_noise
from .errors import InvalidInput
from .model import ModelParams

PARAM_NAMES = ("gamma", "n_g", "n_l")


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    points: int
    log: bool = False

    def __post_init__(self):
        if self.name not in PARAM_NAMES:
            raise InvalidInput(f"unknown axis {self.name!r}; expected one of {PARAM_NAMES}")
        if self.points < 2:
            raise InvalidInput("an axis needs at least 2 points")
        if not self.min < self.max:
            raise InvalidInput(f"axis {self.name}: min must be below max")
        if self.log and self.min <= 0:
            raise InvalidInput(f"axis {self.name}: log spacing needs min > 0")

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """Parse ``name:min:max:points[:log]``."""
        parts = text.split(":")
        if len(parts) not in (4, 5) or (len(parts) == 5 and parts[4] not in ("log", "lin")):
            raise InvalidInput(f"bad axis spec {text!r}; use name:min:max:points[:log]")
        try:
            return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]),
                       len(parts) == 5 and parts[4] == "log")
        except ValueError:
            raise InvalidInput(f"bad axis spec {text!r}") from None

    def values(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class ScanSpec:
    axes: tuple
    fixed: dict = field(default_factory=lambda: {"gamma": 0.5, "n_g": 0.0, "n_l": 0.0})
    mode: str = "exact"
    samples: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise InvalidInput("a scan takes one or two axes")
        if len({a.name for a in self.axes}) != len(self.axes):
            raise InvalidInput("axes must be distinct parameters")
        if self.mode not in ("exact", "limit", "mc"):
            raise InvalidInput(f"unknown mode {self.mode!r}")

    def to_dict(self) -> dict:
        return {"axes": [asdict(a) for a in self.axes], "fixed": dict(self.fixed),
                "mode": self.mode, "samples": self.samples, "seed": self.seed}

    def grid(self) -> dict:
        """Full parameter arrays, axis-major (first axis varies slowest)."""
        mesh = np.meshgrid(*(a.values() for a in self.axes), indexing="ij")
        out = {}
        for name in PARAM_NAMES:
            out[name] = np.broadcast_to(np.asarray(self.fixed[name], dtype=float), mesh[0].shape).copy()
        for a, m in zip(self.axes, mesh):
            out[a.name] = m
        return {k: v.ravel() for k, v in out.items()}


def run_scan(spec: ScanSpec) -> list[dict]:
    g = spec.grid()
    if spec.mode == "mc":
        rows = []
        for gamma, n_g, n_l in zip(g["gamma"], g["n_g"], g["n_l"]):
            res = entangling_power_monte_carlo(ModelParams(gamma, n_g, n_l), spec.samples, spec.seed)
            rows.append({"gamma": gamma, "n_g": n_g, "n_l": n_l, "E": res.value,
                         "E_unclamped": res.value, "std_error": res.std_error})
    else:
        for gamma, n_g, n_l in zip(g["gamma"], g["n_g"], g["n_l"]):
            ModelParams(gamma, n_g, n_l)  # validates ranges
        value, raw = entangling_power_grid(g["gamma"], g["n_g"], g["n_l"], spec.mode)
        rows = [{"gamma": a, "n_g": b, "n_l": c, "E": v, "E_unclamped": r}
                for a, b, c, v, r in zip(g["gamma"], g["n_g"], g["n_l"], value, raw)]
    if len(spec.axes) == 2:
        for row in rows:
            row["positive"] = int(row["E"] > 0)
    return rows


def write_csv(rows: list[dict], header: dict, stream) -> None:
    """CSV with a leading ``# {json}`` line echoing the resolved settings."""
    stream.write("# " + json.dumps(header, sort_keys=True) + "\n")
    if not rows:
        return
    writer = csv.DictWriter(stream, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(float(v)) if isinstance(v, (float, np.floating)) else v
                         for k, v in row.items()})


def optimal_curve(n_g: float, gammas, search_max: float = 50.0) -> list[dict]:
    rows = []
    for gamma in gammas:
        n_star, e_star = optimal_local_noise(float(gamma), n_g, search_max)
        rows.append({"gamma": float(gamma), "n_l_star": n_star, "E_star": e_star,
                     "positive": int(e_star > 0)})
    return rows


def csv_text(rows: list[dict], header: dict) -> str:
    buf = io.StringIO()
    write_csv(rows, header, buf)
    return buf.getvalue()
