"""Serialization of run results: JSON reports, CSV tables and density maps.

Everything written here is a pure function of its inputs: no timestamps, no
host information, keys sorted. Two runs with the same configuration give
byte-identical files. Text files other than JSON carry the provenance as
leading ``#`` comment lines.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .lattice_grid import GridMask

TOOL = "starbound"
SCHEMA_VERSION = 1
ASCII_RAMP = ".,:;-=+*%@"
PGM_MAXVAL = 255

SPECTRUM_COLUMNS = ("index", "energy", "energy_over_Et", "energy_over_Ec", "localization")


def jsonable(obj):
    """Convert numpy scalars/arrays, enums and tuples to plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def envelope(command: str, config: dict, seed: int, conventions: dict, result: dict) -> dict:
    """Wrap a result with the provenance every report carries."""
    return jsonable(
        {
            "tool": TOOL,
            "version": __version__,
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "config": config,
            "seed": seed,
            "conventions": conventions,
            "result": result,
        }
    )


def dumps(payload: dict) -> str:
    return json.dumps(jsonable(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def provenance_lines(command: str, config: dict, seed: int) -> list[str]:
    cfg = json.dumps(jsonable(config), sort_keys=True, separators=(",", ":"))
    return [f"{TOOL} {__version__} {command}", f"seed={seed}", f"config={cfg}"]


def csv_text(columns, rows: list[dict], header: list[str] | None = None) -> str:
    """CSV with an optional ``#`` comment header. Floats keep full precision."""
    buf = io.StringIO()
    for line in header or []:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def read_csv(text: str) -> list[dict]:
    """Parse a CSV written by :func:`csv_text`, skipping comment lines."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def spectrum_rows(spectrum, localization, e_t: float | None, to_grid) -> list[dict]:
    """One row per eigenvalue; ``to_grid`` maps energies to the grid-shifted frame."""
    rows = []
    for i, e in enumerate(spectrum.eigenvalues):
        eg = float(to_grid(float(e)))
        rows.append(
            {
                "index": i,
                "energy": float(e),
                "energy_over_Et": eg / e_t if e_t else None,
                "energy_over_Ec": eg / 4.0,
                "localization": None if localization is None else float(localization[i]),
            }
        )
    return rows


def _normalized_density(vector) -> np.ndarray:
    d = np.asarray(vector, dtype=float) ** 2
    top = d.max() if d.size else 0.0
    return d / top if top > 0 else d


def density_pgm(mask: GridMask, vector, comments: list[str] | None = None) -> str:
    """Plain PGM (P2) of ``|phi|**2``, scaled so the maximum is 255.

    Absent sites are 0 and occupied sites map to 1..255, so the mask outline
    survives even where the state vanishes. Row ``r`` is lattice row ``y = r``.
    """
    d = _normalized_density(vector)
    img = np.zeros((mask.height, mask.width), dtype=int)
    x, y = mask.coords()
    img[y.astype(int), x.astype(int)] = 1 + np.rint(d * (PGM_MAXVAL - 1)).astype(int)
    out = ["P2"]
    out += [f"# {c}" for c in comments or []]
    out.append(f"{mask.width} {mask.height}")
    out.append(str(PGM_MAXVAL))
    out += [" ".join(str(v) for v in row) for row in img]
    return "\n".join(out) + "\n"


def density_ascii(mask: GridMask, vector, comments: list[str] | None = None) -> str:
    """Terminal rendering with a 10-step ramp; absent sites are blanks."""
    d = _normalized_density(vector)
    levels = np.minimum((d * len(ASCII_RAMP)).astype(int), len(ASCII_RAMP) - 1)
    grid = [[" "] * mask.width for _ in range(mask.height)]
    x, y = mask.coords()
    for xi, yi, lv in zip(x.astype(int), y.astype(int), levels):
        grid[yi][xi] = ASCII_RAMP[lv]
    out = [f"# {c}" for c in comments or []]
    out += ["".join(row).rstrip() for row in grid]
    return "\n".join(out) + "\n"


def load_schema() -> dict:
    text = resources.files("starbound").joinpath("schemas/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
