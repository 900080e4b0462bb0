"""Built-in state spaces and the shape mini-language used by the CLI.

Shape strings::

    simplex:D         standard simplex conv{0, e_1, ..., e_D}
    hypercube:D       [0, 1]^D
    crosspolytope:D   conv{+-e_i}
    ngon:N            regular N-gon, vertices at angles 2 pi k / N
    random:D:N[:SEED] N points uniform on the unit sphere S^(D-1)
    file:PATH         polytope JSON {"vertices": [[...], ...]}

Random shapes draw from numpy's PCG64 bit generator seeded with SEED, so
a given seed yields the same vertices on every platform.
"""

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadShape, ParseError
from .geometry import build_polytope

KINDS = ("simplex", "hypercube", "crosspolytope", "ngon", "random", "file")


@dataclass(frozen=True)
class ShapeSpec:
    kind: str
    params: tuple = ()
    path: str = None

    def __str__(self):
        if self.kind == "file":
            return f"file:{self.path}"
        return ":".join([self.kind, *map(str, self.params)])


def parse_shape(text, seed=0):
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind not in KINDS:
        raise BadShape(f"unknown shape kind {kind!r}; expected one of {KINDS}")
    if kind == "file":
        if not rest:
            raise BadShape("file shape needs a path")
        return ShapeSpec("file", path=rest)
    try:
        params = tuple(int(p) for p in rest.split(":")) if rest else ()
    except ValueError:
        raise BadShape(f"non-integer parameter in {text!r}") from None
    if kind == "random":
        if len(params) == 2:
            params = params + (seed,)
        if len(params) != 3:
            raise BadShape("random shape is random:D:N[:SEED]")
        d, n, _ = params
        if d < 1 or n < 1:
            raise BadShape("random shape needs D >= 1 and N >= 1")
    else:
        if len(params) != 1:
            raise BadShape(f"{kind} takes exactly one integer parameter")
        if kind == "ngon" and params[0] < 3:
            raise BadShape("ngon needs N >= 3")
        if params[0] < 1:
            raise BadShape(f"{kind} needs dimension >= 1")
    return ShapeSpec(kind, params)


def simplex_vertices(d):
    return np.vstack([np.zeros(d), np.eye(d)])


def hypercube_vertices(d):
    return np.array(list(itertools.product((0.0, 1.0), repeat=d)))


def crosspolytope_vertices(d):
    eye = np.eye(d)
    return np.vstack([eye, -eye])


def ngon_vertices(n):
    angles = 2 * np.pi * np.arange(n) / n
    return np.column_stack([np.cos(angles), np.sin(angles)])


def random_sphere_vertices(d, n, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = rng.standard_normal((n, d))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def shape_points(spec):
    if spec.kind == "file":
        path = Path(spec.path)
        try:
            data = json.loads(path.read_text())
            return np.asarray(data["vertices"], dtype=float)
        except FileNotFoundError:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"{path}: not a polytope file ({exc})") from None
    if spec.kind == "simplex":
        return simplex_vertices(*spec.params)
    if spec.kind == "hypercube":
        return hypercube_vertices(*spec.params)
    if spec.kind == "crosspolytope":
        return crosspolytope_vertices(*spec.params)
    if spec.kind == "ngon":
        return ngon_vertices(*spec.params)
    return random_sphere_vertices(*spec.params)


def make_polytope(spec, tol=None):
    if isinstance(spec, str):
        spec = parse_shape(spec)
    return build_polytope(shape_points(spec), tol=tol)
