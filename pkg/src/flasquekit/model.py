"""JSON model files: one group plus named lattices, modules and maps.

Layout::

    {
      "group":   {"degree": 2, "generators": [[1, 0]]},
      "lattices": {"Zminus": {"rank": 1, "action": {"g0": [[-1]]}},
                   "ZC2":    {"cosets": [[]]}},
      "modules":  {"Z2": {"rank": 1, "relations": [[2]], "action": {"g0": [[1]]}}},
      "maps":     {"res": {"source": "ZC2", "target": "Z2", "matrix": [[1, 1]]}}
    }

Action matrices are given per generator ("g0", "g1", ...) in the
column-vector convention.  ``cosets`` lists subgroups by generating
permutations; the lattice is the direct sum of the coset lattices.
Module relations are vectors spanning the relation sublattice.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import FlasqueKitError, ParseError, ValidationError
from .groups import FiniteGroup, close_generators, subgroup_generators
from .lattice import (
    GMap,
    GModule,
    cols_of,
    detect_permutation_structure,
    permutation_sum,
    rows_of,
    validate_lattice,
    validate_module,
    with_permutation,
    zmat,
)


@dataclass(frozen=True, eq=False)
class ModelFile:
    group: FiniteGroup
    lattices: dict
    modules: dict
    maps: dict
    digest: str

    def module(self, name: str) -> GModule:
        if name in self.lattices:
            return self.lattices[name]
        if name in self.modules:
            return self.modules[name]
        raise ValidationError(f"no lattice or module named {name!r}", f"/{name}")

    def map(self, name: str) -> GMap:
        if name not in self.maps:
            raise ValidationError(f"no map named {name!r}", f"/maps/{name}")
        return self.maps[name]


def _pointer(*parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def _expect(cond, msg, *where):
    if not cond:
        raise ValidationError(msg, _pointer(*where))


def _int_matrix(value, rows, cols, *where):
    _expect(isinstance(value, list) and len(value) == rows, f"expected {rows} rows", *where)
    for i, row in enumerate(value):
        _expect(isinstance(row, list) and len(row) == cols, f"expected {cols} columns", *where, i)
        for j, x in enumerate(row):
            _expect(isinstance(x, int) and not isinstance(x, bool), "entries must be integers", *where, i, j)
    return value


def _parse_group(spec):
    _expect(isinstance(spec, dict), "group must be an object", "group")
    degree = spec.get("degree")
    _expect(isinstance(degree, int) and degree >= 1, "degree must be a positive integer", "group", "degree")
    gens = spec.get("generators", [])
    _expect(isinstance(gens, list), "generators must be a list", "group", "generators")
    for i, g in enumerate(gens):
        _expect(isinstance(g, list) and all(isinstance(x, int) for x in g),
                "generator must be a list of integers", "group", "generators", i)
    try:
        return close_generators(degree, gens)
    except FlasqueKitError as exc:
        raise ValidationError(str(exc), _pointer("group", "generators")) from exc


def _generator_matrices(G, spec, rank, *where):
    action = spec.get("action", {})
    _expect(isinstance(action, dict), "action must be an object keyed g0, g1, ...", *where, "action")
    extra = set(action) - {f"g{i}" for i in range(len(G.generators))}
    _expect(not extra, f"unknown generator keys {sorted(extra)}", *where, "action")
    mats = []
    for i in range(len(G.generators)):
        key = f"g{i}"
        _expect(key in action, f"missing action for generator {key}", *where, "action")
        mats.append(_int_matrix(action[key], rank, rank, *where, "action", key))
    return mats


def _parse_lattice(G, name, spec):
    where = ("lattices", name)
    _expect(isinstance(spec, dict), "lattice must be an object", *where)
    if "cosets" in spec:
        subs = []
        for i, gens in enumerate(spec["cosets"]):
            _expect(isinstance(gens, list), "coset entry must list subgroup generators", *where, "cosets", i)
            try:
                subs.append(G.generated([G.index(tuple(p)) for p in gens]))
            except (KeyError, TypeError) as exc:
                raise ValidationError("subgroup generator is not a group element",
                                      _pointer(*where, "cosets", i)) from exc
        return permutation_sum(G, subs)
    rank = spec.get("rank")
    _expect(isinstance(rank, int) and rank >= 0, "rank must be a non-negative integer", *where, "rank")
    mats = _generator_matrices(G, spec, rank, *where)
    try:
        L = validate_lattice(G, [zmat(m, (rank, rank)) for m in mats], rank=rank)
    except FlasqueKitError as exc:
        raise ValidationError(str(exc), _pointer(*where, "action")) from exc
    ps = detect_permutation_structure(L)
    return with_permutation(L, ps) if ps is not None else L


def _parse_module(G, name, spec):
    where = ("modules", name)
    _expect(isinstance(spec, dict), "module must be an object", *where)
    rank = spec.get("rank")
    _expect(isinstance(rank, int) and rank >= 0, "rank must be a non-negative integer", *where, "rank")
    rels = spec.get("relations", [])
    _expect(isinstance(rels, list), "relations must be a list of vectors", *where, "relations")
    _int_matrix(rels, len(rels), rank, *where, "relations")
    mats = _generator_matrices(G, spec, rank, *where)
    try:
        return validate_module(G, mats, rels, rank=rank)
    except FlasqueKitError as exc:
        raise ValidationError(str(exc), _pointer(*where)) from exc


def _parse_map(names, name, spec):
    where = ("maps", name)
    _expect(isinstance(spec, dict), "map must be an object", *where)
    for end in ("source", "target"):
        _expect(spec.get(end) in names, f"{end} {spec.get(end)!r} does not name a lattice or module",
                *where, end)
    src, tgt = names[spec["source"]], names[spec["target"]]
    matrix = _int_matrix(spec.get("matrix"), tgt.rank, src.rank, *where, "matrix")
    f = GMap(src, tgt, zmat(matrix, (tgt.rank, src.rank)))
    _expect(f.is_equivariant(), "map is not equivariant", *where, "matrix")
    return f


def parse_model_text(text: str) -> ModelFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    _expect(isinstance(raw, dict), "model must be a JSON object")
    _expect("group" in raw, "missing group", "group")
    G = _parse_group(raw["group"])
    sections = {k: raw.get(k, {}) for k in ("lattices", "modules", "maps")}
    for k, v in sections.items():
        _expect(isinstance(v, dict), f"{k} must be an object", k)
    seen = {}
    for k, v in sections.items():
        for name in v:
            _expect(name not in seen, f"name {name!r} is used in both {seen.get(name)} and {k}", k, name)
            seen[name] = k
    lattices = {n: _parse_lattice(G, n, s) for n, s in sections["lattices"].items()}
    modules = {n: _parse_module(G, n, s) for n, s in sections["modules"].items()}
    names = {**lattices, **modules}
    maps = {n: _parse_map(names, n, s) for n, s in sections["maps"].items()}
    digest = hashlib.sha256(text.encode()).hexdigest()
    return ModelFile(G, lattices, modules, maps, digest)


def parse_model(path) -> ModelFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_model_text(text)


# -- emission ------------------------------------------------------------------

def lattice_to_json(L: GModule) -> dict:
    G = L.group
    out = {"rank": L.rank,
           "action": {f"g{i}": rows_of(L.matrices[s]) for i, s in enumerate(G.generators)}}
    if not L.is_lattice:
        out["relations"] = cols_of(L.relations)
    return out


def group_to_json(G: FiniteGroup) -> dict:
    return {"degree": G.degree, "generators": [list(G.elements[s]) for s in G.generators]}


def model_to_json(model: ModelFile) -> dict:
    """Canonical dictionary form; permutation lattices are written as cosets."""
    G = model.group
    lattices = {}
    for name, L in model.lattices.items():
        if L.permutation is not None and L.rank:
            lattices[name] = {"cosets": [[list(G.elements[g]) for g in subgroup_generators(G, H)]
                                         for H in L.permutation.blocks]}
        else:
            lattices[name] = lattice_to_json(L)
    names = {id(v): k for k, v in {**model.lattices, **model.modules}.items()}
    return {
        "group": group_to_json(G),
        "lattices": lattices,
        "modules": {n: lattice_to_json(M) for n, M in model.modules.items()},
        "maps": {n: {"source": names[id(f.source)], "target": names[id(f.target)],
                     "matrix": rows_of(f.matrix)} for n, f in model.maps.items()},
    }
