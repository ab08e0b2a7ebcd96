"""Bundled example rings and modules, and JSON loaders for ring/module files."""

from __future__ import annotations

import json
import os
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import modrep
from .algebra import Algebra, AlgebraSpec, validate

BUNDLED = Path(__file__).with_name("corpus")
RING_IDS = ("r1", "r2", "r3", "gf2", "gf3", "r2_gf3")


def corpus_dir() -> Path:
    env = os.environ.get("CPROJ_CORPUS")
    return Path(env) if env else BUNDLED


def _resolve(ref: str) -> Path:
    path = Path(ref)
    if path.suffix == ".json" and path.exists():
        return path
    for base in (corpus_dir(), BUNDLED):
        cand = base / (ref if ref.endswith(".json") else f"{ref}.json")
        if cand.exists():
            return cand
        cand = base / Path(ref).name
        if cand.exists():
            return cand
    raise FileNotFoundError(f"no ring or module file {ref!r}")


def read_json(ref: str) -> dict:
    with open(_resolve(ref)) as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def _load_ring_cached(path: str) -> Algebra:
    with open(path) as fh:
        data = json.load(fh)
    return validate(AlgebraSpec.from_json(data, name=Path(path).stem))


def load_ring(ref: str) -> Algebra:
    """Validated algebra from a corpus id (``"r3"``) or a JSON path."""
    return _load_ring_cached(str(_resolve(ref).resolve()))


def module_from_json(data: dict, A: Algebra | None = None) -> modrep.FinModule:
    if A is None:
        A = load_ring(data["ring"])
    action = np.asarray(data["action"], dtype=np.int64)
    if action.size == 0:
        action = np.zeros((A.d, 0, 0), dtype=np.int64)
    if action.shape != (A.d, int(data["dim"]), int(data["dim"])):
        raise modrep.ModuleError(
            f"action has shape {action.shape}, expected {(A.d, data['dim'], data['dim'])}")
    return modrep.module_from_action(A, action, name=data.get("name", ""))


def module_to_json(M: modrep.FinModule, ring_ref: str | None = None) -> dict:
    out = M.to_json()
    out["ring"] = ring_ref or M.algebra.name
    return out


def named_module(A: Algebra, text: str, C: modrep.FinModule | None = None) -> modrep.FinModule:
    """Shorthand constructors: ``free:n``, ``residue_field``, ``dual_of_ring``,
    ``quotient:<element>``, ``@ring`` (R itself), or a module file."""
    if text in ("@ring", "ring", "R"):
        return modrep.ring_module(A)
    if text in ("residue_field", "k"):
        return modrep.residue_field(A)
    if text in ("dual_of_ring", "omega"):
        return modrep.dual_of_ring(A)
    if text.startswith("free:"):
        return modrep.free(A, int(text.split(":", 1)[1]))
    if text.startswith("quotient:"):
        x = A.element(text.split(":", 1)[1])
        base = C if C is not None else modrep.ring_module(A)
        Q = modrep.quotient_by_element(base, x).module
        return modrep.FinModule(A, Q.base, 1, f"{base.name or 'R'}/{text.split(':', 1)[1]}")
    data = read_json(text)
    return module_from_json(data, A)
