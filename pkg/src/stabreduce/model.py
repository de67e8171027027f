"""JSON model documents: parsing, validation and canonical serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .cones import Cone, Fan, FanError
from .gmpoly import Graded1TAction, PolyError, poly_str
from .stacks import DiagonalizableGroup, MonomialStack, StackError, ToricStack

MODELS = ("fan", "monomial", "gm_poly", "vargit")


class ModelError(ValueError):
    pass


@dataclass
class Model:
    kind: str
    obj: Any
    options: dict = field(default_factory=dict)
    name: str = ""

    @property
    def rays(self) -> list[tuple[int, ...]]:
        """Ray list used for divisor indices (fan rays or coordinate axes)."""
        if self.kind == "fan":
            return self.obj.fan.rays
        if self.kind == "monomial":
            n = self.obj.n
            return [tuple(int(i == j) for j in range(n)) for i in range(n)]
        return []


def _ints(v, what: str) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ModelError(f"{what} must be a list of integers")
    return v


def parse_group(doc: dict, n: int | None = None) -> DiagonalizableGroup:
    if not isinstance(doc, dict):
        raise ModelError("group must be an object")
    r = doc.get("free_rank", 1)
    tors = _ints(doc.get("torsion", []), "group.torsion")
    weights = doc.get("weights")
    if not isinstance(r, int) or r < 0:
        raise ModelError("group.free_rank must be a non-negative integer")
    if not isinstance(weights, list):
        raise ModelError("group.weights must be a list (one entry per coordinate)")
    cols = []
    for w in weights:
        col = [w] if isinstance(w, int) and not isinstance(w, bool) else w
        col = _ints(col, "group.weights entry")
        if len(col) != r + len(tors):
            raise ModelError(f"each weight needs {r + len(tors)} entries, got {col}")
        cols.append(col)
    if n is not None and len(cols) != n:
        raise ModelError(f"expected {n} weights, got {len(cols)}")
    m = len(cols)
    free = tuple(tuple(c[i] for c in cols) for i in range(r))
    tw = tuple(tuple(c[r + k] for c in cols) for k in range(len(tors)))
    try:
        return DiagonalizableGroup(m, free, tuple(tors), tw)
    except StackError as e:
        raise ModelError(str(e)) from e


def parse_model(doc: dict, name: str = "") -> Model:
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    kind = doc.get("model")
    if kind not in MODELS:
        raise ModelError(f"model must be one of {', '.join(MODELS)}")
    options = doc.get("options", {}) or {}
    if not isinstance(options, dict):
        raise ModelError("options must be an object")
    try:
        if kind == "fan":
            f = doc.get("fan") or {}
            rays = [tuple(_ints(r, "fan ray")) for r in f.get("rays", [])]
            n = doc.get("dimension") or (len(rays[0]) if rays else None)
            G = parse_group(doc.get("group", {}), n)
            n = G.n
            cones = []
            for c in f.get("cones", []):
                idx = _ints(c, "fan cone")
                if any(i < 0 or i >= len(rays) for i in idx):
                    raise ModelError(f"cone {idx} refers to a missing ray")
                cones.append(Cone(n, tuple(rays[i] for i in idx)))
            fan = Fan.from_maximal(n, cones) if cones else Fan(n, frozenset([Cone.zero(n)]))
            obj = ToricStack(fan, G)
        elif kind == "monomial":
            G = parse_group(doc.get("group", {}))
            comps = doc.get("components")
            if not isinstance(comps, list) or not comps:
                raise ModelError("monomial models need a non-empty components list")
            sups = []
            for c in comps:
                idx = _ints(c, "component")
                if any(i < 1 or i > G.n for i in idx):
                    raise ModelError(f"component {idx} uses a coordinate outside 1..{G.n}")
                sups.append(frozenset(i - 1 for i in idx))
            obj = MonomialStack(G.n, tuple(sups), G)
        elif kind == "gm_poly":
            G = parse_group(doc.get("group", {}))
            if G.free_rank != 1 or G.torsion:
                raise ModelError("gm_poly models need the group G_m (free_rank 1, no torsion)")
            polys = doc.get("polynomials", [])
            if not isinstance(polys, list) or not all(isinstance(p, str) for p in polys):
                raise ModelError("polynomials must be a list of strings")
            obj = Graded1TAction.parse(G.free_weights[0], polys)
        else:
            v = doc.get("vargit") or {}
            a, i, j = v.get("a"), v.get("i"), v.get("j")
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in (a, i, j)):
                raise ModelError("vargit needs integers a, i, j")
            if a < 1 or i < 1:
                raise ModelError("vargit needs a >= 1 and i >= 1")
            obj = (a, i, j)
    except (FanError, StackError, PolyError) as e:
        raise ModelError(str(e)) from e
    return Model(kind, obj, dict(options), name)


def serialize_model(m: Model) -> dict:
    doc: dict = {"model": m.kind}
    if m.kind == "fan":
        X: ToricStack = m.obj
        doc["group"] = X.group.to_json()
        fj = X.fan.to_json()
        doc["fan"] = {"rays": fj["rays"], "cones": fj["cones"]}
        doc["dimension"] = X.n
    elif m.kind == "monomial":
        Y: MonomialStack = m.obj
        doc["group"] = Y.group.to_json()
        doc["components"] = [sorted(j + 1 for j in s) for s in Y.supports]
    elif m.kind == "gm_poly":
        P: Graded1TAction = m.obj
        doc["group"] = {"free_rank": 1, "torsion": [], "weights": [[w] for w in P.weights]}
        doc["polynomials"] = [poly_str(g) for g in P.generators]
    else:
        a, i, j = m.obj
        doc["vargit"] = {"a": a, "i": i, "j": j}
    if m.options:
        doc["options"] = m.options
    return doc


def dumps_model(m: Model) -> str:
    return json.dumps(serialize_model(m), indent=2, sort_keys=True) + "\n"


def builtin_names() -> list[str]:
    root = resources.files("stabreduce") / "models"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def builtin_text(name: str) -> str:
    root = resources.files("stabreduce") / "models"
    return (root / f"{name}.json").read_text()


def load_model(path: str) -> Model:
    """Load a model from a file path, or a bundled model by name."""
    p = Path(path)
    if p.exists():
        text, name = p.read_text(), p.stem
    else:
        stem = p.name[:-5] if p.name.endswith(".json") else p.name
        if stem not in builtin_names():
            raise ModelError(f"no such file or bundled model: {path}")
        text, name = builtin_text(stem), stem
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"invalid JSON in {path}: {e}") from e
    return parse_model(doc, name)
