"""JSON wire formats for polytopes, effects, measurements and results."""

import json
from pathlib import Path

import numpy as np

from .effects import (AffineFunction, Effect, FiniteMeasurement,
                      TwoOutcomeMeasurement)
from .errors import ParseError


def load_json(path):
    path = Path(path)
    text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=False)


def _floats(values):
    return [float(v) for v in np.asarray(values, dtype=float).reshape(-1)]


def affine_to_json(f):
    """Ambient-coordinate form ``{"linear": [...], "offset": b}``."""
    lin, off = f.to_ambient()
    return {"linear": _floats(lin), "offset": float(off)}


def affine_from_json(K, data):
    if not isinstance(data, dict):
        raise ParseError("effect must be a JSON object")
    try:
        if "vertex_values" in data:
            return AffineFunction.from_vertex_values(
                K, _floats(data["vertex_values"]))
        return AffineFunction.from_ambient(K, _floats(data["linear"]),
                                           float(data["offset"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed effect: {exc!r}") from None


def effect_from_json(K, data, tol=None):
    return Effect.of(affine_from_json(K, data), tol=tol)


def measurement_from_json(K, data, tol=None):
    """Two-outcome (``{"effect": ...}`` or a bare effect) or finite
    (``{"outcomes": [...], "effects": [...]}``) measurement."""
    if not isinstance(data, dict):
        raise ParseError("measurement must be a JSON object")
    if "outcomes" in data:
        try:
            outcomes, effects = data["outcomes"], data["effects"]
        except KeyError as exc:
            raise ParseError(f"finite measurement lacks {exc}") from None
        return FiniteMeasurement(
            [o if not isinstance(o, list) else tuple(o) for o in outcomes],
            [effect_from_json(K, e, tol) for e in effects])
    if "effect" in data:
        data = data["effect"]
    return TwoOutcomeMeasurement(effect_from_json(K, data, tol))


def measurement_to_json(m):
    if isinstance(m, TwoOutcomeMeasurement):
        return {"effect": affine_to_json(m.effect)}
    return {"outcomes": [list(o) if isinstance(o, tuple) else o
                         for o in m.outcomes],
            "effects": [affine_to_json(e) for e in m.effects]}


def joint_to_json(joint):
    return {name: affine_to_json(getattr(joint, name))
            for name in ("g11", "g12", "g21", "g22")}


def certificate_to_json(cert):
    if cert is None:
        return None
    return {"a": [float(a) for a in cert.a],
            "z": [_floats(z) for z in cert.z],
            "violation": float(cert.violation)}


def degree_result_to_json(res):
    return {
        "lambda": float(res.lam),
        "mu": float(res.mu),
        "p": affine_to_json(res.p),
        "biases": [float(t) for t in res.biases],
        "certificate": certificate_to_json(res.certificate),
    }
