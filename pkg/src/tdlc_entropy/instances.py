"""Instance files: JSON descriptions of a universe, an automorphism, a subgroup and an operation.

Rationals are always strings (``"3"``, ``"-1/5"``); floats are rejected. Example::

    {
      "universe": {"kind": "padic", "p": 5, "dim": 2},
      "automorphism": {"kind": "matrix", "rows": [["1/5", "0"], ["0", "5"]]},
      "subgroup": {"kind": "lattice", "basis": [["1", "0"], ["0", "1"]]},
      "op": "entropy",
      "params": {"window": 6, "max_steps": 64}
    }

Universe kinds: ``padic`` (``p``, ``dim``), ``shift`` (``m``), ``finite``
(``moduli`` or ``relations``) and ``product`` (``factors``). Automorphisms:
``matrix`` (``rows``) for p-adic and finite universes, ``shift`` (``k``,
``unit``) for shifts, ``product`` (``factors``). A missing subgroup means the
universe's standard one (``Z_p^n``, zero-at-{0}, the trivial subgroup).
Unknown fields are rejected. The full schema is in ``docs/instance-schema.md``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .engine import ALGORITHMS
from .errors import EntropyError, InvalidInstance
from .finite_abelian import FinAbGroup, FiniteAutomorphism, FiniteUniverse
from .padic import MatrixAutomorphism, PAdicUniverse, matrix_from_json
from .shift import ShiftAutomorphism, ShiftUniverse
from .universe import Automorphism, ProductAutomorphism, ProductUniverse, Universe
from .verify import SUITES

OPS = ("entropy", "entropy-global", "modulus", "scale", "trace", "verify")
PARAM_KEYS = ("window", "max_steps", "base_budget", "seed", "count", "suite", "algorithms", "candidates")
TOP_KEYS = ("universe", "automorphism", "subgroup", "op", "params", "witness")

# allowed keys per object kind, so a misspelt field is an error rather than a default
_FIELDS = {
    "universe": {"padic": ("p", "dim"), "shift": ("m",), "finite": ("moduli", "relations"), "product": ("factors",)},
    "automorphism": {"matrix": ("rows",), "shift": ("k", "unit"), "product": ("factors",)},
    "subgroup": {"lattice": ("basis",), "cylinder": ("zero_coords", "coord_subgroups"), "finite": ("generators",),
                 "product": ("factors",)},
}


def _int(data: dict, key: str, default=None, minimum=None) -> int:
    if key not in data:
        if default is None:
            raise InvalidInstance(f"missing integer field {key!r}")
        return default
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidInstance(f"{key!r} must be an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise InvalidInstance(f"{key!r} must be at least {minimum}, got {v}")
    return v


def _obj(data, what: str) -> dict:
    if not isinstance(data, dict):
        raise InvalidInstance(f"{what} must be a JSON object")
    if "kind" not in data:
        raise InvalidInstance(f"{what} needs a 'kind'")
    allowed = _FIELDS[what].get(data["kind"])
    if allowed is not None:
        extra = set(data) - {"kind", *allowed}
        if extra:
            raise InvalidInstance(f"unknown {what} fields: {', '.join(sorted(extra))}")
    return data


def _int_rows(rows) -> list:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InvalidInstance("expected a non-empty array of integer arrays")
    out = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, bool) or not isinstance(x, (int, str)):
                raise InvalidInstance(f"expected an integer, got {x!r}")
            try:
                row.append(int(x))
            except ValueError:
                raise InvalidInstance(f"expected an integer, got {x!r}") from None
        out.append(row)
    return out


def universe_from_json(data) -> Universe:
    data = _obj(data, "universe")
    kind = data["kind"]
    if kind == "padic":
        return PAdicUniverse(_int(data, "p"), _int(data, "dim", minimum=1))
    if kind == "shift":
        return ShiftUniverse(_int(data, "m", minimum=2))
    if kind == "finite":
        if "moduli" in data:
            moduli = data["moduli"]
            if not isinstance(moduli, list):
                raise InvalidInstance("moduli must be an array of integers")
            return FiniteUniverse(FinAbGroup(_int_rows([moduli])[0] if moduli else []))
        if "relations" in data:
            return FiniteUniverse(FinAbGroup(relations=_int_rows(data["relations"])))
        raise InvalidInstance("finite universe needs 'moduli' or 'relations'")
    if kind == "product":
        parts = data.get("factors")
        if not isinstance(parts, list) or len(parts) < 2:
            raise InvalidInstance("product universe needs at least two factors")
        return ProductUniverse([universe_from_json(d) for d in parts])
    raise InvalidInstance(f"unknown universe kind {kind!r}")


def automorphism_from_json(universe: Universe, data) -> Automorphism:
    data = _obj(data, "automorphism")
    kind = data["kind"]
    if isinstance(universe, PAdicUniverse):
        if kind != "matrix":
            raise InvalidInstance("p-adic automorphisms have kind 'matrix'")
        A = matrix_from_json(data.get("rows"))
        if len(A) != universe.dim or any(len(r) != universe.dim for r in A):
            raise InvalidInstance(f"matrix must be {universe.dim}x{universe.dim}")
        return MatrixAutomorphism(universe, A)
    if isinstance(universe, ShiftUniverse):
        if kind != "shift":
            raise InvalidInstance("shift automorphisms have kind 'shift'")
        return ShiftAutomorphism(universe, _int(data, "k"), _int(data, "unit", default=1))
    if isinstance(universe, FiniteUniverse):
        if kind != "matrix":
            raise InvalidInstance("finite automorphisms have kind 'matrix'")
        rows = _int_rows(data.get("rows"))
        r = universe.group.rank
        if len(rows) != r or any(len(row) != r for row in rows):
            raise InvalidInstance(f"matrix must be {r}x{r}")
        return FiniteAutomorphism(universe, rows)
    if isinstance(universe, ProductUniverse):
        if kind != "product":
            raise InvalidInstance("product automorphisms have kind 'product'")
        parts = data.get("factors")
        if not isinstance(parts, list) or len(parts) != len(universe.factors):
            raise InvalidInstance("product automorphism needs one entry per factor")
        return ProductAutomorphism(universe, [automorphism_from_json(u, d) for u, d in zip(universe.factors, parts)])
    raise InvalidInstance(f"unsupported universe {universe!r}")


def subgroup_from_json(universe: Universe, data):
    data = _obj(data, "subgroup")
    if isinstance(universe, ProductUniverse) and isinstance(data.get("factors"), list):
        for u, d in zip(universe.factors, data["factors"]):
            subgroup_from_json(u, d)
    return universe.subgroup_from_json(data)


@dataclass
class Instance:
    universe: Universe
    automorphism: Automorphism
    subgroup: Any
    op: str = "entropy"
    params: dict = field(default_factory=dict)
    subgroup_given: bool = True

    def param(self, key: str, default=None):
        return self.params.get(key, default)

    @property
    def candidates(self) -> Optional[list]:
        raw = self.params.get("candidates")
        if raw is None:
            return None
        return [subgroup_from_json(self.universe, d) for d in raw]

    def to_json(self) -> dict:
        out = {
            "universe": self.universe.describe(),
            "automorphism": self.automorphism.describe(),
            "subgroup": self.universe.subgroup_to_json(self.subgroup),
            "op": self.op,
        }
        if self.params:
            out["params"] = dict(sorted(self.params.items()))
        return out


def instance_from_json(data) -> Instance:
    """Parse and validate; every problem surfaces as :class:`InvalidInstance`."""
    if not isinstance(data, dict):
        raise InvalidInstance("instance must be a JSON object")
    unknown = set(data) - set(TOP_KEYS)
    if unknown:
        raise InvalidInstance(f"unknown top-level fields: {', '.join(sorted(unknown))}")
    try:
        universe = universe_from_json(data.get("universe"))
        aut = automorphism_from_json(universe, data.get("automorphism"))
        given = data.get("subgroup") is not None
        S = subgroup_from_json(universe, data["subgroup"]) if given else universe.standard_subgroup()
        op = data.get("op", "entropy")
        if op not in OPS:
            raise InvalidInstance(f"unknown op {op!r}; expected one of {', '.join(OPS)}")
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise InvalidInstance("params must be an object")
        unknown = set(params) - set(PARAM_KEYS)
        if unknown:
            raise InvalidInstance(f"unknown params: {', '.join(sorted(unknown))}")
        for key in ("max_steps", "base_budget", "count"):
            if key in params:
                _int(params, key, minimum=1)
        if "window" in params:
            _int(params, "window", minimum=2)
        algorithms = params.get("algorithms", ["limit"])
        if not isinstance(algorithms, list) or not algorithms or set(algorithms) - set(ALGORITHMS):
            raise InvalidInstance(f"algorithms must be a non-empty array drawn from {', '.join(ALGORITHMS)}")
        if "suite" in params and params["suite"] not in SUITES + ("all",):
            raise InvalidInstance(f"unknown suite {params['suite']!r}")
        if "seed" in params:
            _int(params, "seed")
        inst = Instance(universe, aut, S, op, dict(params), given)
        if "candidates" in params:
            if not isinstance(params["candidates"], list):
                raise InvalidInstance("candidates must be an array of subgroups")
            inst.candidates  # validate eagerly
        return inst
    except InvalidInstance:
        raise
    except (EntropyError, ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise InvalidInstance(f"{type(exc).__name__}: {exc}") from None


def load_instance(path) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInstance(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"{path}: not valid JSON ({exc})") from None
    return instance_from_json(data)


def _reject_float(s: str):
    raise InvalidInstance(f"floats are not allowed in instance files (got {s}); write rationals as strings")


def dump_instance(inst: Instance) -> str:
    return json.dumps(inst.to_json(), indent=2, sort_keys=False) + "\n"
