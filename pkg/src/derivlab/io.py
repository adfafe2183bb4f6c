"""JSON map files and report output."""
from __future__ import annotations

import json
from pathlib import Path

from . import carriers
from .localcheck import AdditiveMap, map_from_basis_images
from .matrices import Matrix, ShapeError
from .scalars import ring_make


class InputError(ValueError):
    """Malformed or inconsistent input file (CLI exit code 2)."""


def map_from_json(d: dict) -> AdditiveMap:
    try:
        ring = ring_make(d["ring"])
        n = int(d["n"])
        if n < 1:
            raise InputError("n must be positive")
        carrier = carriers.normalize_carrier(d.get("carrier", "full"))
        images = [Matrix.from_json(ring, m) for m in d["basis_images"]]
        for m in images:
            if (m.n_rows, m.n_cols) != (n, n):
                raise ShapeError(f"basis image is {m.n_rows}x{m.n_cols}, expected {n}x{n}")
        return map_from_basis_images(ring, n, images, carrier)
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, ArithmeticError) as exc:
        raise InputError(f"bad map file: {exc}") from exc


def load_json(path: str | Path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_map(path: str | Path) -> AdditiveMap:
    d = load_json(path)
    if not isinstance(d, dict):
        raise InputError("map file must hold a JSON object")
    return map_from_json(d)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def save_map(f: AdditiveMap, path: str | Path, meta: dict | None = None) -> None:
    d = f.to_json()
    if meta:
        d["meta"] = meta
    Path(path).write_text(dumps(d) + "\n")
