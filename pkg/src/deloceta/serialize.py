"""Deterministic JSON serialization and the cochain file format.

Reports must be byte-identical across runs with the same configuration,
so floats are emitted at a fixed 17-significant-digit precision, object
keys are sorted, and rationals travel as "p/q" strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, Optional

import numpy as np

from .cochains import Cochain, FLAVORS
from .groups import Group, group_from_spec
from .rational import QC, format_rational, parse_rational


def _format_float(x: float) -> str:
    if x != x:
        raise ValueError("NaN is not serializable in reports")
    if x in (float("inf"), float("-inf")):
        raise ValueError("infinite values are not serializable in reports")
    text = format(float(x), ".17g")
    # normalize negative zero for byte-stable output
    return "0" if text == "-0" else text


def dumps_deterministic(obj, indent: int = 2) -> str:
    """JSON text with sorted keys and fixed float formatting."""

    def render(node, depth: int) -> str:
        pad = " " * (indent * depth)
        pad_in = " " * (indent * (depth + 1))
        if isinstance(node, dict):
            if not node:
                return "{}"
            keys = sorted(node, key=str)
            rows = [
                f'{pad_in}{json.dumps(str(k))}: {render(node[k], depth + 1)}'
                for k in keys
            ]
            return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
        if isinstance(node, (list, tuple)):
            if not node:
                return "[]"
            rows = [f"{pad_in}{render(v, depth + 1)}" for v in node]
            return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
        if isinstance(node, bool) or node is None:
            return json.dumps(node)
        if isinstance(node, (np.bool_,)):
            return json.dumps(bool(node))
        if isinstance(node, (int, np.integer)):
            return str(int(node))
        if isinstance(node, (float, np.floating)):
            return _format_float(float(node))
        if isinstance(node, complex):
            return render({"re": node.real, "im": node.imag}, depth)
        if isinstance(node, Fraction):
            return json.dumps(format_rational(node))
        if isinstance(node, QC):
            return render({"re": format_rational(node.re), "im": format_rational(node.im)}, depth)
        if isinstance(node, str):
            return json.dumps(node)
        raise TypeError(f"cannot serialize {type(node).__name__} deterministically")

    return render(obj, 0) + "\n"


def write_report(path: str, obj) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_deterministic(obj))


# ---------------------------------------------------------------------------
# cochain files
# ---------------------------------------------------------------------------


def cochain_to_json(phi: Cochain, include_witnesses: bool = True) -> dict:
    if phi.entries is None:
        raise ValueError("only sparse cochains serialize; materialize first")
    grp = phi.group
    doc: Dict[str, object] = {
        "flavor": phi.flavor,
        "degree": phi.degree,
        "group": grp.spec(),
        "entries": [
            {
                "tuple": [grp.element_name(g) for g in key],
                "re": format_rational(val.re),
                "im": format_rational(val.im),
            }
            for key, val in sorted(
                phi.entries.items(), key=lambda kv: [grp.shortlex_key(g) for g in kv[0]]
            )
        ],
    }
    if phi.cls is not None:
        doc["class"] = {
            "gamma": grp.element_name(phi.cls.gamma),
            "radius": phi.cls.radius,
        }
        if include_witnesses:
            doc["witnesses"] = {
                grp.element_name(y): grp.element_name(h)
                for y, h in sorted(
                    phi.cls.members.items(), key=lambda kv: grp.shortlex_key(kv[0])
                )
            }
    return doc


def cochain_from_json(doc: dict, group: Optional[Group] = None) -> Cochain:
    grp = group if group is not None else group_from_spec(doc["group"])
    flavor = doc["flavor"]
    if flavor not in FLAVORS:
        raise ValueError(f"unknown cochain flavor {flavor!r}")
    degree = int(doc["degree"])
    cls = None
    if "class" in doc and doc["class"] is not None:
        cdoc = doc["class"]
        cls = grp.conjugacy_class(grp.parse_element(cdoc["gamma"]), int(cdoc["radius"]))
    entries = {}
    for entry in doc["entries"]:
        key = tuple(grp.parse_element(name) for name in entry["tuple"])
        entries[key] = QC(parse_rational(entry["re"]), parse_rational(entry.get("im", "0")))
    return Cochain(grp, degree, flavor, entries=entries, cls=cls)


def load_cochain(path: str, group: Optional[Group] = None) -> Cochain:
    with open(path) as fh:
        return cochain_from_json(json.load(fh), group=group)


def save_cochain(path: str, phi: Cochain) -> None:
    write_report(path, cochain_to_json(phi))
