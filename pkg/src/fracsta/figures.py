"""Versioned registry of benchmark parameter sets.

Every reproducible figure of the report pipeline is one JSON entry in
data/figures.json: the caption parameters, whether it is a single
trajectory or a sweep, and the expected numbers it must hit.  Each
expected value carries a source tag: "published" for numbers stated with
the original curves, "analytic" for values forced by the dark-state
algebra, "derived" for bounds obtained from an independent estimate.  The
registry is data, not code; adding a figure means adding an entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .core import Protocol


class UnknownFigureError(LookupError):
    """Raised for a figure id the registry does not contain."""

    def __init__(self, figure_id: str, valid_ids: tuple[str, ...]):
        super().__init__(
            f"unknown figure id {figure_id!r}; known ids: {', '.join(valid_ids)}"
        )
        self.figure_id = figure_id
        self.valid_ids = valid_ids


@dataclass(frozen=True)
class FigureRegistryEntry:
    """One registered benchmark: parameters plus certified expectations."""

    figure_id: str
    kind: str  # "trajectory" or "sweep"
    system: str  # "lambda" or "tripod"
    protocols: tuple[Protocol, ...]
    params: dict
    gamma: float
    open_system: bool
    sweep: dict | None
    expected: tuple[dict, ...]
    note: str


_registry_cache: dict[str, FigureRegistryEntry] | None = None


def _load_registry() -> dict[str, FigureRegistryEntry]:
    global _registry_cache
    if _registry_cache is None:
        raw = resources.files("fracsta").joinpath("data/figures.json").read_text()
        doc = json.loads(raw)
        entries = {}
        for item in doc["figures"]:
            entry = FigureRegistryEntry(
                figure_id=item["id"],
                kind=item["kind"],
                system=item["system"],
                protocols=tuple(Protocol(p) for p in item["protocols"]),
                params=item["params"],
                gamma=item["gamma"],
                open_system=item["open_system"],
                sweep=item["sweep"],
                expected=tuple(item["expected"]),
                note=item["note"],
            )
            entries[entry.figure_id] = entry
        _registry_cache = entries
    return _registry_cache


def figure_ids() -> tuple[str, ...]:
    """All registered figure ids, sorted."""
    return tuple(sorted(_load_registry()))


def registry_lookup(figure_id: str) -> FigureRegistryEntry:
    """Case-insensitive lookup; unknown ids raise with the full id list."""
    registry = _load_registry()
    key = figure_id.lower()
    if key not in registry:
        raise UnknownFigureError(figure_id, figure_ids())
    return registry[key]


@dataclass(frozen=True)
class CheckOutcome:
    description: str
    passed: bool
    detail: str


def _sweep_column(result, check: dict) -> tuple[np.ndarray, np.ndarray]:
    finals = result.finals[Protocol(check["protocol"])]
    return result.swept_values, finals[:, check["state"] - 1]


def evaluate_entry(entry: FigureRegistryEntry, result) -> list[CheckOutcome]:
    """Grade a Trajectory or SweepResult against the entry's expected block."""
    outcomes = []
    for check in entry.expected:
        kind = check["kind"]
        if kind == "final_populations":
            worst = float(np.abs(np.asarray(result.final_populations) - check["value"]).max())
            ok = worst <= check["tol"]
            detail = f"max deviation {worst:.2e} (tol {check['tol']:.1e})"
        elif kind == "max_excited_population":
            worst = result.max_intermediate_population
            ok = worst <= check["bound"]
            detail = f"max excited population {worst:.2e} (bound {check['bound']:.1e})"
        elif kind == "final_off_target":
            got = float(result.final_populations[check["state"] - 1])
            miss = abs(got - check["target"])
            ok = miss >= check["margin"]
            detail = (
                f"final P{check['state']} = {got:.4f} misses {check['target']:.4f} "
                f"by {miss:.4f} (needs >= {check['margin']:.2g})"
            )
        elif kind == "constant_final":
            values, col = _sweep_column(result, check)
            mask = values >= check.get("from", -np.inf)
            worst = float(np.abs(col[mask] - check["value"]).max())
            ok = worst <= check["tol"]
            detail = f"max deviation {worst:.2e} from {check['value']:.6g} (tol {check['tol']:.1e})"
        elif kind == "matches_theory":
            finals = result.finals[Protocol(check["protocol"])]
            lo, hi = check.get("domain", (-np.inf, np.inf))
            mask = (result.swept_values >= lo) & (result.swept_values <= hi)
            worst = float(np.abs(finals[mask] - result.theory[mask]).max())
            ok = worst <= check["tol"]
            detail = f"max deviation from theory {worst:.2e} (tol {check['tol']:.1e})"
        elif kind == "first_crossing":
            values, col = _sweep_column(result, check)
            above = np.nonzero(col >= check["level"])[0]
            lo, hi = check["window"]
            if above.size == 0:
                ok, detail = False, f"P{check['state']} never reaches {check['level']}"
            else:
                at = float(values[above[0]])
                ok = lo <= at <= hi
                detail = f"first crossing at {at:.4g} (window [{lo}, {hi}])"
        elif kind == "plateau":
            values, col = _sweep_column(result, check)
            lo, hi = check["domain"]
            seg = col[(values >= lo) & (values <= hi)]
            blo, bhi = check["band"]
            ok = bool(seg.size) and float(seg.min()) >= blo and float(seg.max()) <= bhi
            detail = f"plateau range [{seg.min():.4f}, {seg.max():.4f}] (band [{blo}, {bhi}])"
        elif kind == "monotone":
            values, col = _sweep_column(result, check)
            picks = [float(col[np.argmin(np.abs(values - v))]) for v in check["at"]]
            diffs = np.diff(picks)
            ok = bool(np.all(diffs > 0)) if check["direction"] == "increasing" else bool(
                np.all(diffs < 0)
            )
            detail = f"P{check['state']} at {check['at']} = {np.round(picks, 4).tolist()}"
        elif kind == "local_max_then_settle":
            values, col = _sweep_column(result, check)
            interior = (col[1:-1] > col[:-2]) & (col[1:-1] > col[2:])
            peaks = col[1:-1][interior]
            has_peak = bool(peaks.size) and float(peaks.max()) > check["peak_above"]
            tail = col[values > check["settle_from"]]
            settled = bool(tail.size) and float(
                np.abs(tail - check["settle_about"]).max()
            ) < check["settle_band"]
            ok = has_peak and settled
            detail = (
                f"peak {peaks.max() if peaks.size else float('nan'):.4f} "
                f"(need > {check['peak_above']}), tail spread "
                f"{np.abs(tail - check['settle_about']).max() if tail.size else float('nan'):.4f}"
            )
        elif kind == "argmax_state":
            finals = result.finals[Protocol(check["protocol"])]
            idx = int(np.argmin(np.abs(result.swept_values - check["at"])))
            winner = int(np.argmax(finals[idx])) + 1
            ok = winner == check["state"]
            detail = f"largest final population at {check['at']} is P{winner}"
        else:
            ok, detail = False, f"unknown check kind {kind!r}"
        outcomes.append(CheckOutcome(description=f"{entry.figure_id}: {kind}", passed=ok, detail=detail))
    return outcomes
