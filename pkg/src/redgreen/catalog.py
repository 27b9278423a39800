"""Packaged fixture files and loading of diagram/state files.

Fixtures live in ``redgreen/fixtures/*.json``. A path of the form
``fixtures/<name>`` (with or without ``.json``) that does not exist on disk is
looked up there. Files holding ``nodes``/``edges`` are diagrams, files holding
``data`` are tensors.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from importlib import resources
from typing import Dict, Union

import numpy as np

from redgreen import diagram as dg
from redgreen.diagram import Diagram
from redgreen.errors import ParseError
from redgreen.phase import Color, Phase
from redgreen.qtensor import QTensor


def builtin_payloads() -> Dict[str, str]:
    """File name -> exact text of every packaged fixture."""
    from redgreen import wfrob

    third = Phase(Fraction(1, 3))
    diagrams = {
        "ghz_z": dg.ghz_diagram(Color.Z),
        "ghz_x": dg.ghz_diagram(Color.X),
        "w_triangle": dg.w_family_diagram(third, third, third),
        "family_000": dg.w_family_diagram(0, 0, 0),
        "family_00pi": dg.w_family_diagram(0, 0, 1),
        "square4_zero": dg.square4_diagram(0, 0, 0, 0),
    }
    out = {f"{k}.json": dg.dumps(v) for k, v in diagrams.items()}
    s = 1 / np.sqrt(2)
    t = 1 / np.sqrt(3)
    states = {
        "ghz_state": QTensor(0, 3, [s, 0, 0, 0, 0, 0, 0, s]),
        "w_state": QTensor(0, 3, [0, t, t, 0, t, 0, 0, 0]),
        "bell_0_state": QTensor(0, 3, [s, 0, 0, 0, 0, 0, s, 0]),
    }
    out.update({f"{k}.json": v.dumps() for k, v in states.items()})
    out.update(wfrob.fixture_payloads())
    return out


def fixture_text(name: str) -> str:
    if not name.endswith(".json"):
        name += ".json"
    f = resources.files("redgreen").joinpath("fixtures", name)
    if not f.is_file():
        raise ParseError(f"no packaged fixture {name!r}")
    return f.read_text()


def read_source(path: str) -> str:
    if os.path.exists(path):
        try:
            with open(path) as fh:
                return fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc}") from None
    norm = path.replace("\\", "/")
    if norm.startswith("fixtures/"):
        return fixture_text(norm[len("fixtures/"):])
    raise ParseError(f"no such file: {path}")


def parse_object(text: str) -> Union[Diagram, QTensor]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object")
    if "nodes" in obj or "edges" in obj:
        return dg.from_dict(obj)
    if "data" in obj:
        try:
            return QTensor.from_dict(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad tensor file: {exc}") from None
    raise ParseError("file is neither a diagram nor a tensor")


def load(path: str) -> Union[Diagram, QTensor]:
    return parse_object(read_source(path))
