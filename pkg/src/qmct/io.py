"""Instance and report (de)serialization.

Instance documents are JSON objects with ``nodes`` (list of string
ids), ``arcs`` (objects with ``tail``, ``head``, ``capacity``,
``transit``, ``cost``) and ``balances`` (map from node id to value;
missing ids mean zero).  Numeric values are integers or exact strings
("3/2", "1.5"); JSON floats are rejected to keep arithmetic exact.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import ValidationError
from .network import Arc, Network
from .rationals import as_rational, rational_str


def _value(raw: Any, where: str) -> Fraction:
    if isinstance(raw, float):
        raise ValidationError(
            f"{where}: floats are not exact; write the value as a string like \"3/2\""
        )
    try:
        return as_rational(raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def network_from_doc(doc: Any) -> Network:
    """Parse an instance document; raises ValidationError on bad shape."""
    if not isinstance(doc, dict):
        raise ValidationError("instance must be a JSON object")
    nodes = doc.get("nodes")
    if not isinstance(nodes, list) or not all(isinstance(v, str) for v in nodes):
        raise ValidationError("'nodes' must be a list of string ids")
    raw_arcs = doc.get("arcs")
    if not isinstance(raw_arcs, list):
        raise ValidationError("'arcs' must be a list")
    arcs = []
    for k, item in enumerate(raw_arcs):
        if not isinstance(item, dict):
            raise ValidationError(f"arc {k} must be an object")
        try:
            tail = item["tail"]
            head = item["head"]
        except KeyError as exc:
            raise ValidationError(f"arc {k} is missing {exc}") from exc
        arcs.append(
            Arc(
                tail=tail,
                head=head,
                capacity=_value(item.get("capacity", 1), f"arc {k} capacity"),
                transit=_value(item.get("transit", 0), f"arc {k} transit"),
                cost=_value(item.get("cost", 0), f"arc {k} cost"),
            )
        )
    raw_balances = doc.get("balances", {})
    if not isinstance(raw_balances, dict):
        raise ValidationError("'balances' must be an object")
    balances = {
        v: _value(b, f"balance of {v!r}") for v, b in raw_balances.items()
    }
    try:
        return Network.of(nodes, arcs, balances)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def network_to_doc(network: Network) -> dict:
    return {
        "nodes": list(network.nodes),
        "arcs": [
            {
                "tail": a.tail,
                "head": a.head,
                "capacity": rational_str(a.capacity),
                "transit": rational_str(a.transit),
                "cost": rational_str(a.cost),
            }
            for a in network.arcs
        ],
        "balances": {
            v: rational_str(b) for v, b in network.balances.items() if b != 0
        },
    }


def load_instance(path: str | Path) -> Network:
    try:
        with open(path) as handle:
            doc = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
    return network_from_doc(doc)


def save_instance(network: Network, path: str | Path) -> None:
    with open(path, "w") as handle:
        json.dump(network_to_doc(network), handle, indent=2, sort_keys=True)
        handle.write("\n")


def schedule_to_doc(schedule) -> dict:
    return {
        str(entry.arc): [[s, e, rational_str(r)] for s, e, r in entry.intervals]
        for entry in schedule.arc_flows
    }


def report_to_doc(report, include_schedule: bool = False, storage: dict | None = None) -> dict:
    doc: dict[str, Any] = {
        "mode": report.mode,
        "cost": rational_str(report.cost),
        "horizon": None,
        "scale": report.scale,
        "checks": dict(report.checks),
        "timing": {k: round(v, 6) for k, v in report.timing.items()},
    }
    if report.horizon is not None:
        doc["horizon"] = {
            "steps": report.horizon,
            "original": rational_str(report.horizon_original),
        }
    if report.transport_optimum is not None:
        doc["transport_optimum"] = rational_str(report.transport_optimum)
    if report.subnetwork is not None:
        doc["subnetwork"] = sorted(report.subnetwork)
    if include_schedule and report.schedule is not None:
        doc["schedule"] = schedule_to_doc(report.schedule)
    if storage is not None:
        doc["storage"] = {
            v: [rational_str(x) for x in values] for v, values in storage.items()
        }
    return doc
