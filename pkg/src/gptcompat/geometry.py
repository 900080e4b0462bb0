"""Polytopal state spaces given by their vertices.

Every polytope carries an intrinsic chart (an origin plus an orthonormal
basis of the direction space of its affine hull). Facets, effects and all
linear programs are expressed in chart coordinates, so a flat polytope
embedded in a larger space behaves exactly like its full-dimensional copy.
"""

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import default_tol
from .errors import (DegeneratePolytope, DimensionMismatch, EmptyInput,
                     NotASimplex, OutsidePolytope)
from .lp import LinearProgram, solve_lp


@dataclass(frozen=True)
class Facet:
    """Maximal face ``{x in K : normal . chart(x) == offset}``.

    ``normal`` is an inward unit vector in chart coordinates, so
    ``normal . y - offset >= 0`` on the whole polytope.
    """

    normal: np.ndarray
    offset: float
    vertex_indices: frozenset

    def slack(self, local):
        """Value of ``normal . y - offset`` at chart point(s) ``local``."""
        return np.asarray(local) @ self.normal - self.offset


def _chart(points, tol):
    """Origin and orthonormal basis of the affine hull of ``points``.

    Greedy Gram-Schmidt over the difference vectors, always taking the
    one with largest residual next.
    """
    origin = points[0]
    diffs = points[1:] - origin
    scale = max(1.0, float(np.max(np.abs(diffs), initial=0.0)))
    basis = []
    residual = diffs.copy()
    while len(residual):
        norms = np.linalg.norm(residual, axis=1)
        k = int(np.argmax(norms))
        if norms[k] <= tol * scale:
            break
        q = residual[k] / norms[k]
        basis.append(q)
        residual = residual - np.outer(residual @ q, q)
    dim = points.shape[1]
    if basis:
        return origin, np.array(basis).T
    return origin, np.zeros((dim, 0))


def _in_hull(target, points, tol):
    """Feasibility LP: is ``target`` a convex combination of ``points``?"""
    # rows: points.T @ w >= target, -points.T @ w >= -target, sum w == 1
    A = np.vstack([points.T, -points.T, np.ones((1, len(points))),
                   -np.ones((1, len(points)))])
    b = np.concatenate([target, -target, [1.0], [-1.0]])
    sol = solve_lp(LinearProgram(np.zeros(len(points)), A, b),
                   feas_tol=tol)
    return sol.optimal


class Polytope:
    """Convex hull of finitely many points, stored by its extreme points.

    Use :func:`build_polytope` to construct one; it removes duplicates and
    non-extreme points. Instances are treated as immutable.
    """

    def __init__(self, vertices, origin, basis, tol):
        self.vertices = vertices
        self.origin = origin
        self.basis = basis
        self.tol = tol
        self.vertices.flags.writeable = False
        self.local = self.to_local(vertices)
        self.local.flags.writeable = False
        self._eps = tol * max(1.0, float(np.max(np.abs(self.local), initial=0.0)))

    def __repr__(self):
        return (f"Polytope(n_vertices={self.n_vertices}, "
                f"ambient_dim={self.ambient_dim}, "
                f"intrinsic_dim={self.intrinsic_dim})")

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def ambient_dim(self):
        return self.vertices.shape[1]

    @property
    def intrinsic_dim(self):
        return self.basis.shape[1]

    @property
    def eps(self):
        """Absolute tolerance scaled to the polytope's coordinates."""
        return self._eps

    def _check_points(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.ambient_dim:
            raise DimensionMismatch(
                f"point has dimension {x.shape[-1]}, "
                f"polytope lives in dimension {self.ambient_dim}")
        return x

    def to_local(self, x):
        """Chart coordinates of ambient point(s) ``x``."""
        x = self._check_points(x)
        return (x - self.origin) @ self.basis

    def to_ambient(self, y):
        return self.origin + np.asarray(y, dtype=float) @ self.basis.T

    def affine_residual(self, x):
        """Distance of ``x`` from the affine hull."""
        x = self._check_points(x)
        back = self.to_ambient(self.to_local(x))
        return np.linalg.norm(x - back, axis=-1)

    @cached_property
    def facets(self):
        return enumerate_facets(self)

    def to_json(self):
        return {"vertices": self.vertices.tolist()}

    @classmethod
    def from_json(cls, data, tol=None):
        if isinstance(data, str):
            data = json.loads(data)
        return build_polytope(data["vertices"], tol=tol)


def build_polytope(points, tol=None):
    """Build a :class:`Polytope` from points, pruning non-extreme ones.

    Input order is kept for the surviving vertices.
    """
    if tol is None:
        tol = default_tol()
    if len(points) == 0:
        raise EmptyInput("at least one point is required")
    rows = [np.asarray(p, dtype=float).reshape(-1) for p in points]
    if len({len(r) for r in rows}) != 1:
        raise DimensionMismatch("points have different dimensions")
    pts = np.array(rows)
    if pts.shape[1] == 0:
        raise DimensionMismatch("points must have at least one coordinate")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point coordinates must be finite")

    unique = []
    for p in pts:
        if all(np.linalg.norm(p - q) > tol for q in unique):
            unique.append(p)
    pts = np.array(unique)

    origin, basis = _chart(pts, tol)
    local = (pts - origin) @ basis
    keep = np.ones(len(pts), dtype=bool)
    if len(pts) > basis.shape[1] + 1:
        for i in range(len(pts)):
            others = np.delete(local, i, axis=0)
            if _in_hull(local[i], others, tol):
                keep[i] = False
    verts = pts[keep]
    origin, basis = _chart(verts, tol)
    return Polytope(verts, origin, basis, tol)


def enumerate_facets(K):
    """All facets of ``K`` by brute force over affinely independent
    vertex subsets of size ``intrinsic_dim``."""
    d = K.intrinsic_dim
    if d == 0:
        raise DegeneratePolytope("a single point has no facets")
    Y = K.local
    eps = K.eps
    facets = []
    if d == 1:
        order = np.argsort(Y[:, 0])
        lo, hi = int(order[0]), int(order[-1])
        facets.append(Facet(np.array([1.0]), float(Y[lo, 0]), frozenset([lo])))
        facets.append(Facet(np.array([-1.0]), float(-Y[hi, 0]), frozenset([hi])))
        return facets
    for subset in itertools.combinations(range(K.n_vertices), d):
        if any(set(subset) <= f.vertex_indices for f in facets):
            continue
        P = Y[list(subset)]
        D = P[1:] - P[0]
        _, s, vt = np.linalg.svd(D)
        if s[-1] <= eps:
            continue
        normal = vt[-1]
        offset = float(normal @ P[0])
        vals = Y @ normal - offset
        if np.all(vals >= -eps):
            pass
        elif np.all(vals <= eps):
            normal, offset, vals = -normal, -offset, -vals
        else:
            continue
        on = frozenset(np.flatnonzero(np.abs(vals) <= eps).tolist())
        if len(on) == K.n_vertices:
            continue
        facets.append(Facet(normal, offset, on))
    return facets


def contains(K, x, tol=None):
    """Membership of ambient point ``x`` in ``K``."""
    tol = K.tol if tol is None else tol
    x = K._check_points(x)
    eps = tol * max(1.0, float(np.max(np.abs(K.local), initial=0.0)))
    if K.affine_residual(x) > eps:
        return False
    if K.intrinsic_dim == 0:
        return True
    y = K.to_local(x)
    return all(f.slack(y) >= -eps for f in K.facets)


def interior_point(K):
    """Vertex centroid, which lies in the relative interior."""
    return K.vertices.mean(axis=0)


def is_simplex(K):
    return K.n_vertices == K.intrinsic_dim + 1


def facets_at_vertex(K, v):
    """Split the facets into those containing vertex ``v`` and the rest."""
    if K.intrinsic_dim == 0:
        raise DegeneratePolytope("a single point has no facets")
    if not 0 <= v < K.n_vertices:
        raise IndexError(f"vertex index {v} out of range")
    containing = [f for f in K.facets if v in f.vertex_indices]
    disjoint = [f for f in K.facets if v not in f.vertex_indices]
    return containing, disjoint


def barycentric_coordinates(K, x):
    """Weights of ``x`` with respect to the vertices of a simplex ``K``."""
    if not is_simplex(K):
        raise NotASimplex(f"{K.n_vertices} vertices in dimension "
                          f"{K.intrinsic_dim}")
    if not contains(K, x):
        raise OutsidePolytope(f"{np.asarray(x).tolist()} is not in K")
    y = K.to_local(x)
    M = np.vstack([K.local.T, np.ones(K.n_vertices)])
    rhs = np.append(y, 1.0)
    return np.linalg.solve(M, rhs)
