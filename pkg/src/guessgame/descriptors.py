"""JSON strategy descriptors.

Schema (version 1)::

    {"v": 1, "role": "alice" | "bob", "kind": <str>, "params": {...}}

Alice descriptors additionally carry ``"flags"`` on output. Exact rationals
are written as ``{"num": "5", "den": "8"}`` and read back from that form or
from strings like ``"1/3"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from . import alice as A
from . import bob as B
from .core import Constant, CoverageFunction, StepThreshold

SCHEMA_VERSION = 1


class DescriptorError(ValueError):
    pass


def encode_number(v):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return int(v.numerator)
        return {"num": str(v.numerator), "den": str(v.denominator)}
    return v


def decode_number(v):
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return Fraction(int(v["num"]), int(v["den"]))
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            raise DescriptorError(f"not a number: {v!r}") from None
    if isinstance(v, (int, float)):
        return v
    raise DescriptorError(f"not a number: {v!r}")


def to_jsonable(obj):
    if isinstance(obj, CoverageFunction):
        return alice_to_descriptor(obj)
    if isinstance(obj, Fraction):
        return encode_number(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def alice_to_descriptor(F: CoverageFunction) -> dict:
    return {
        "v": SCHEMA_VERSION,
        "role": "alice",
        "kind": F.kind,
        "params": to_jsonable(F.params()),
        "flags": F.flags(),
    }


def _params(desc: dict) -> dict:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise DescriptorError("descriptor must be an object with a 'kind'")
    v = desc.get("v", SCHEMA_VERSION)
    if v != SCHEMA_VERSION:
        raise DescriptorError(f"unsupported schema version {v!r}")
    return desc.get("params", desc.get("parameters", {})) or {}


def alice_from_descriptor(desc: dict) -> CoverageFunction:
    p = _params(desc)
    kind = desc["kind"]
    try:
        if kind in ("constant", "blind"):
            return Constant(decode_number(p.get("p", Fraction(1, 2))))
        if kind == "step":
            return StepThreshold(decode_number(p["t"]))
        if kind == "threshold":
            d = A.ThresholdDistribution(
                p["family"],
                tuple(decode_number(v) for v in p["params"]),
                decode_number(p.get("p_minus", 0)),
                decode_number(p.get("p_plus", 0)),
            )
            return A.random_threshold(d)
        if kind == "dual":
            return A.dual(alice_from_descriptor(p["inner"]))
        if kind == "gamma_mixture":
            return A.gamma_mixture(
                alice_from_descriptor(p["inner"]), decode_number(p["gamma"])
            )
        if kind == "mixture":
            return A.Mixture(
                decode_number(p["weight"]),
                alice_from_descriptor(p["first"]),
                alice_from_descriptor(p["second"]),
            )
        if kind == "poisson":
            return A.poisson_coverage(p["intensity"], float(p.get("rate", 1.0)))
        if kind == "piecewise_linear":
            return A.PiecewiseLinear(
                tuple((decode_number(x), decode_number(y)) for x, y in p["knots"])
            )
        if kind == "lattice":
            return A.LatticeTable(
                int(p["lo"]), tuple(decode_number(v) for v in p["values"])
            )
        if kind == "q_lattice":
            return A.q_lattice(float(p["q"]), int(p.get("lo", -10)), int(p.get("hi", 10)))
    except KeyError as e:
        raise DescriptorError(f"{kind}: missing parameter {e}") from None
    raise DescriptorError(f"unknown alice kind {kind!r}")


def bob_from_descriptor(desc: dict):
    p = _params(desc)
    kind = desc["kind"]
    num = lambda key: decode_number(p[key])
    try:
        if kind == "pure_pair":
            return B.pure_pair(num("a"), num("b"))
        if kind == "consecutive_uniform":
            return B.consecutive_uniform(int(p["m"]))
        if kind == "scaled_consecutive":
            return B.scaled_consecutive(int(p["m"]), int(p["k"]))
        if kind == "modular_three":
            return B.modular_three(
                {int(j): decode_number(w) for j, w in p["weights"].items()}
            )
        if kind == "discrete":
            return B.mixture_of_pairs(
                [tuple(decode_number(v) for v in row) for row in p["pairs"]]
            )
        if kind == "zero_pm_one":
            return B.zero_pm_one()
        if kind == "iid_uniform_pair":
            return B.iid_uniform_pair()
        if kind == "location_uniform":
            return B.location_uniform(float(p["m"]))
        if kind == "scale_uniform_twocards":
            return B.scale_uniform_twocards(float(p["m"]))
        if kind == "arrangement_closest_to_half":
            return B.arrangement_closest_to_half()
    except KeyError as e:
        raise DescriptorError(f"{kind}: missing parameter {e}") from None
    raise DescriptorError(f"unknown bob kind {kind!r}")


def bob_to_descriptor(bob) -> dict:
    d = dict(bob.descriptor)
    return {
        "v": SCHEMA_VERSION,
        "role": "bob",
        "kind": d.get("kind", "discrete"),
        "params": to_jsonable(d.get("params", {})),
    }


def load(text: str) -> Any:
    """Parse a descriptor from JSON text, or from ``@path`` to a JSON file."""
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DescriptorError(f"invalid JSON: {e}") from None
