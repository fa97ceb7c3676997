"""Export manager for simulation artifacts (CSV tables with JSON sidecars)."""

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from app.components.core_types import Observables, SpinorField
from app.utils.exceptions import CorruptStateError, InvalidParameter

logger = logging.getLogger(__name__)

WAVEFUNCTION_COLUMNS = ("z", "re_plus", "im_plus", "abs2_plus", "re_minus", "im_minus", "abs2_minus")
TEXTURE_COLUMNS = ("z", "s1", "s2", "s3", "weight", "reliable")
TWIST_COLUMNS = ("z", "phi", "theta")
SCAN_COLUMNS = ("z_center", "passage_probability", "s1", "s2", "s3", "purity")
CONVERGENCE_COLUMNS = ("method", "dt", "dz", "l2_error_vs_oracle")
CLICKS_COLUMNS = ("z_center", "p_up", "shots", "up_count")

SCHEMAS = {
    "wavefunction": WAVEFUNCTION_COLUMNS,
    "texture": TEXTURE_COLUMNS,
    "twist": TWIST_COLUMNS,
    "scan": SCAN_COLUMNS,
    "convergence": CONVERGENCE_COLUMNS,
    "clicks": CLICKS_COLUMNS,
}

Cell = Union[float, int, str, None]


@dataclass(frozen=True)
class ExportTable:
    """A parsed export: header plus rows. Blank cells read back as None."""

    columns: List[str]
    rows: List[List[Cell]]

    def column(self, name: str) -> List[Cell]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


class ExportManager:
    """Writes CSV exports and their `<name>.meta.json` sidecars into one directory."""

    def __init__(self, out_dir: Union[str, Path] = "output", precision: int = 17,
                 metadata: Optional[Dict[str, Any]] = None):
        if not 1 <= precision <= 17:
            raise InvalidParameter(f"precision must be in 1..17, got {precision}")
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.precision = precision
        self.metadata = dict(metadata or {})

    # ==================== Formatting ====================

    def _format(self, value: Cell) -> str:
        if value is None:
            return ""
        if isinstance(value, str):
            return value
        if isinstance(value, (bool, np.bool_)):
            return "1" if value else "0"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        value = float(value)
        if not math.isfinite(value):
            raise CorruptStateError(f"refusing to export non-finite value {value}")
        return format(value, f".{self.precision}g")

    def _write_csv(self, name: str, kind: str, rows: Iterable[Sequence[Cell]],
                   extra_meta: Optional[Dict[str, Any]] = None) -> Path:
        columns = SCHEMAS[kind]
        path = self.out_dir / f"{name}.csv"
        count = 0
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                if len(row) != len(columns):
                    raise InvalidParameter(f"{kind} row has {len(row)} fields, expected {len(columns)}")
                writer.writerow([self._format(v) for v in row])
                count += 1

        meta = dict(self.metadata)
        meta.update(extra_meta or {})
        meta.update({"kind": kind, "columns": list(columns), "rows": count})
        self.write_json(f"{name}.meta", meta)
        logger.info("wrote %s (%d rows)", path, count)
        return path

    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        path = self.out_dir / f"{name}.json"
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
        return path

    # ==================== Writers ====================

    def write_wavefunction(self, name: str, state: SpinorField) -> Path:
        p, m = state.psi_plus, state.psi_minus
        rows = zip(state.grid.z, p.real, p.imag, np.abs(p) ** 2, m.real, m.imag, np.abs(m) ** 2)
        return self._write_csv(name, "wavefunction", rows, {"time": state.time})

    def write_texture(self, name: str, samples) -> Path:
        rows = ((s.z, s.s[0], s.s[1], s.s[2], s.weight, s.reliable) for s in samples)
        return self._write_csv(name, "texture", rows)

    def write_twist(self, name: str, profile, twist_rate: Optional[float] = None) -> Path:
        rows = zip(profile.z, profile.phi, profile.theta)
        extra = {} if twist_rate is None else {"fitted_twist_rate": twist_rate}
        return self._write_csv(name, "twist", rows, extra)

    def write_scan(self, name: str, scan_rows, half_width: float) -> Path:
        rows = []
        for row in sorted(scan_rows, key=lambda r: r.z_center):
            if row.defined:
                rows.append((row.z_center, row.passage_probability, *row.bloch, row.purity))
            else:
                rows.append((row.z_center, None, None, None, None, None))
        return self._write_csv(name, "scan", rows, {"half_width": half_width})

    def write_convergence(self, name: str, entries, extra_meta: Optional[Dict[str, Any]] = None) -> Path:
        """entries: (method, dt, dz, l2_error) tuples, written in sorted order."""
        return self._write_csv(name, "convergence", sorted(entries), extra_meta)

    def write_clicks(self, name: str, entries, axis, seed: int) -> Path:
        """entries: (z_center, p_up, shots, up_count) tuples."""
        extra = {"axis": [float(a) for a in axis], "seed": seed}
        return self._write_csv(name, "clicks", sorted(entries), extra)

    def write_observables(self, name: str, initial: Observables, final: Observables,
                          report=None) -> Path:
        payload = {
            "initial": observables_to_dict(initial),
            "final": observables_to_dict(final),
            "energy_drift": {
                "plus": final.energy_plus - initial.energy_plus,
                "minus": final.energy_minus - initial.energy_minus,
            },
        }
        if report is not None:
            payload["steps"] = {
                "steps_taken": report.steps_taken,
                "final_time": report.final_time,
                "max_norm_drift": report.max_norm_drift,
            }
        payload.update(self.metadata)
        path = self.write_json(name, payload)
        logger.info("wrote %s", path)
        return path


def observables_to_dict(obs: Observables) -> Dict[str, Any]:
    return {
        "mean_z": {"plus": obs.mean_z_plus, "minus": obs.mean_z_minus},
        "mean_p": {"plus": obs.mean_p_plus, "minus": obs.mean_p_minus},
        "energy": {"plus": obs.energy_plus, "minus": obs.energy_minus},
        "norm": {"plus": obs.norm_plus, "minus": obs.norm_minus},
        "separation": obs.separation,
        "overlap": {"re": obs.overlap.real, "im": obs.overlap.imag},
    }


def _parse_cell(text: str) -> Cell:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        return text


def load_export(path: Union[str, Path]) -> ExportTable:
    """Read a CSV export back; numeric cells become floats."""
    with open(path, "r", newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            columns = next(reader)
        except StopIteration:
            raise InvalidParameter(f"{path} is empty") from None
        rows = [[_parse_cell(cell) for cell in row] for row in reader]
    return ExportTable(columns, rows)
