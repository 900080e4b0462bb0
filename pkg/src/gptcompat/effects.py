"""Affine functions on a polytope, effects, measurements and functionals.

An :class:`AffineFunction` is stored as ``(linear, offset)`` in the chart
coordinates of its polytope: ``f(x) = linear . chart(x) + offset``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (BiasOutOfRange, CannotExpose, DegenerateFacet,
                     DimensionMismatch, EffectInvalid, InconsistentVertexValues,
                     ParameterOutOfRange)
from .geometry import facets_at_vertex

VERTEX_VALUE_RESIDUAL = 1e-7


class AffineFunction:
    """Element of A(K), the affine functions on the polytope ``space``."""

    __slots__ = ("space", "linear", "offset")

    def __init__(self, space, linear, offset):
        linear = np.asarray(linear, dtype=float).reshape(-1)
        if len(linear) != space.intrinsic_dim:
            raise DimensionMismatch(
                f"linear part has length {len(linear)}, "
                f"expected {space.intrinsic_dim}")
        self.space = space
        self.linear = linear
        self.offset = float(offset)

    @classmethod
    def constant(cls, space, value):
        return cls(space, np.zeros(space.intrinsic_dim), value)

    @classmethod
    def from_ambient(cls, space, linear, offset):
        """Restrict ``x -> linear . x + offset`` (ambient coords) to K."""
        linear = np.asarray(linear, dtype=float).reshape(-1)
        if len(linear) != space.ambient_dim:
            raise DimensionMismatch(
                f"ambient linear part has length {len(linear)}, "
                f"expected {space.ambient_dim}")
        return cls(space, space.basis.T @ linear,
                   offset + float(linear @ space.origin))

    @classmethod
    def from_vertex_values(cls, space, values):
        """Affine function taking ``values`` at the vertices (in order).

        Fitted by least squares; raises if the values are not affine.
        """
        values = np.asarray(values, dtype=float).reshape(-1)
        if len(values) != space.n_vertices:
            raise DimensionMismatch(
                f"{len(values)} vertex values for {space.n_vertices} vertices")
        M = np.hstack([space.local, np.ones((space.n_vertices, 1))])
        coef, *_ = np.linalg.lstsq(M, values, rcond=None)
        residual = np.max(np.abs(M @ coef - values))
        if residual > VERTEX_VALUE_RESIDUAL:
            raise InconsistentVertexValues(
                f"vertex values are not affine (residual {residual:.3g})")
        return cls(space, coef[:-1], coef[-1])

    def to_ambient(self):
        """``(linear, offset)`` of an ambient-coordinate extension."""
        lin = self.space.basis @ self.linear
        return lin, self.offset - float(lin @ self.space.origin)

    def __call__(self, x):
        return evaluate(self, x)

    def at_local(self, y):
        return np.asarray(y) @ self.linear + self.offset

    def vertex_values(self):
        return self.space.local @ self.linear + self.offset

    def _coerce(self, other):
        if isinstance(other, AffineFunction):
            if other.space is not self.space:
                raise DimensionMismatch("functions live on different polytopes")
            return other
        return AffineFunction.constant(self.space, float(other))

    def __add__(self, other):
        other = self._coerce(other)
        return AffineFunction(self.space, self.linear + other.linear,
                              self.offset + other.offset)

    __radd__ = __add__

    def __neg__(self):
        return AffineFunction(self.space, -self.linear, -self.offset)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, scalar):
        scalar = float(scalar)
        return AffineFunction(self.space, scalar * self.linear,
                              scalar * self.offset)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / float(scalar))

    def allclose(self, other, atol=1e-9):
        other = self._coerce(other)
        return (np.allclose(self.linear, other.linear, rtol=0, atol=atol)
                and abs(self.offset - other.offset) <= atol)

    def __repr__(self):
        return (f"AffineFunction(linear={self.linear.tolist()}, "
                f"offset={self.offset!r})")


class Effect(AffineFunction):
    """Affine function with ``0 <= f <= 1`` on K (within ``tol``).

    Out-of-range input is rejected, never clamped.
    """

    __slots__ = ()

    def __init__(self, space, linear, offset, tol=None):
        super().__init__(space, linear, offset)
        tol = space.tol if tol is None else tol
        lo, hi = range_on(self, space)
        if lo < -tol or hi > 1 + tol:
            raise EffectInvalid(
                f"effect ranges over [{lo:.6g}, {hi:.6g}] on K, "
                f"outside [0, 1]")

    @classmethod
    def of(cls, f, tol=None):
        """Validate an :class:`AffineFunction` as an effect."""
        if isinstance(f, Effect) and tol is None:
            return f
        return cls(f.space, f.linear, f.offset, tol=tol)


@dataclass(frozen=True)
class TwoOutcomeMeasurement:
    """``effect`` gives the probability of the first outcome."""

    effect: Effect

    def __post_init__(self):
        if not isinstance(self.effect, Effect):
            object.__setattr__(self, "effect", Effect.of(self.effect))

    @property
    def space(self):
        return self.effect.space

    def complement(self):
        return Effect.of(1 - self.effect)

    def as_finite(self, outcomes=(1, 2)):
        return FiniteMeasurement(list(outcomes),
                                 [self.effect, self.complement()])


@dataclass(frozen=True)
class FiniteMeasurement:
    outcomes: list
    effects: list

    def __post_init__(self):
        if len(self.outcomes) != len(self.effects) or not self.effects:
            raise DimensionMismatch("need one effect per outcome")
        space = self.effects[0].space
        effects = [Effect.of(e) for e in self.effects]
        total = sum(effects[1:], effects[0])
        if not total.allclose(AffineFunction.constant(space, 1.0),
                              atol=max(space.tol, 1e-9)):
            raise EffectInvalid("effects do not sum to the unit function")
        object.__setattr__(self, "effects", effects)
        object.__setattr__(self, "outcomes", list(self.outcomes))

    @property
    def space(self):
        return self.effects[0].space

    def __getitem__(self, outcome):
        return self.effects[self.outcomes.index(outcome)]


def evaluate(f, x):
    """``f(x)`` for an ambient point (or stack of points) ``x``."""
    return f.at_local(f.space.to_local(x))


def range_on(f, K=None):
    """``(min, max)`` of ``f`` over K, attained at vertices."""
    K = f.space if K is None else K
    vals = K.local @ f.linear + f.offset
    return float(vals.min()), float(vals.max())


def sup_norm(f):
    lo, hi = range_on(f)
    return max(abs(lo), abs(hi))


def is_positive(f, K=None, tol=None):
    """Membership in the positive cone A(K)+."""
    K = f.space if K is None else K
    tol = K.tol if tol is None else tol
    return range_on(f, K)[0] >= -tol


def is_order_unit(f, K=None, tol=None):
    """Strict positivity on K, i.e. interior of A(K)+."""
    K = f.space if K is None else K
    tol = K.tol if tol is None else tol
    return range_on(f, K)[0] > tol


def facet_function(K, facet):
    """The nonnegative affine function ``normal . y - offset``."""
    return AffineFunction(K, facet.normal, -facet.offset)


def effect_vanishing_on_facet(K, facet):
    """Effect whose zero set on K is ``facet`` and whose maximum is 1."""
    g = facet_function(K, facet)
    top = range_on(g, K)[1]
    if top <= K.eps:
        raise DegenerateFacet("facet function vanishes on all of K")
    return Effect.of(g / top)


def effect_exposing_vertex(K, v):
    """Effect vanishing exactly at vertex ``v`` with maximum 1 on K.

    Sum of the facet functions of the facets through ``v``: a vertex is
    the intersection of the facets containing it, so every other vertex
    sits strictly off at least one of them.
    """
    if K.n_vertices < 2:
        raise CannotExpose("need at least two vertices")
    containing, _ = facets_at_vertex(K, v)
    g = sum((facet_function(K, F) for F in containing),
            AffineFunction.constant(K, 0.0))
    top = range_on(g, K)[1]
    if top <= K.eps:
        raise CannotExpose(f"vertex {v}: facet sum vanishes on K")
    f = g / top
    vals = f.vertex_values()
    others = np.delete(vals, v)
    if abs(vals[v]) > K.eps or np.any(others <= K.tol):
        raise CannotExpose(f"vertex {v} is not the unique zero")
    return Effect.of(f)


def coin_toss(K, bias):
    """Constant measurement returning the first outcome with prob. ``bias``."""
    if not 0.0 <= bias <= 1.0:
        raise BiasOutOfRange(f"bias {bias} outside [0, 1]")
    return TwoOutcomeMeasurement(Effect.of(AffineFunction.constant(K, bias)))


def mix_with_coin(m, lam, bias):
    """``lam * m + (1 - lam) * coin_toss(bias)``."""
    if not (0.0 <= lam <= 1.0 and 0.0 <= bias <= 1.0):
        raise ParameterOutOfRange(f"lambda={lam}, bias={bias}")
    return TwoOutcomeMeasurement(
        Effect.of(lam * m.effect + (1.0 - lam) * bias))


class Functional:
    """Finite combination ``sum_i w_i * phi_{x_i}`` of evaluation functionals.

    Weights may have any sign; see :class:`PositiveFunctional`.
    """

    def __init__(self, points, weights):
        self.points = np.atleast_2d(np.asarray(points, dtype=float))
        self.weights = np.asarray(weights, dtype=float).reshape(-1)
        if len(self.points) != len(self.weights):
            raise DimensionMismatch("one weight per point is required")

    @property
    def mass(self):
        """Value on the constant function 1."""
        return float(self.weights.sum())

    def __call__(self, f):
        return apply_functional(self, f)

    def __repr__(self):
        return (f"{type(self).__name__}(points={self.points.tolist()}, "
                f"weights={self.weights.tolist()})")


class PositiveFunctional(Functional):
    def __init__(self, points, weights):
        super().__init__(points, weights)
        if np.any(self.weights < 0):
            raise ParameterOutOfRange("weights must be nonnegative")

    @classmethod
    def at_vertices(cls, K, weights):
        """From a map vertex index -> weight."""
        idx = sorted(weights)
        return cls(K.vertices[idx], [weights[i] for i in idx])


def apply_functional(psi, f):
    return float(psi.weights @ evaluate(f, psi.points))


def functional_is_positive(psi, K, tol=None):
    """Whether ``psi`` is nonnegative on the cone A(K)+.

    Equivalent to: mass > 0 and barycenter ``sum w_i x_i / mass`` in K,
    or ``psi == 0``. Tested through the generators of A(K)+ (facet
    functions and the constant 1) so a tiny mass does not blow up the
    barycenter.
    """
    tol = K.tol if tol is None else tol
    scale = max(1.0, float(np.abs(psi.weights).sum()))
    if psi.mass < -tol * scale:
        return False
    local = K.to_local(psi.points)
    resid = K.affine_residual(psi.points)
    if np.any(resid > K.eps * 10):
        raise DimensionMismatch("functional support leaves aff(K)")
    if K.intrinsic_dim == 0:
        return True
    moment = psi.weights @ local
    extent = max(1.0, float(np.max(np.abs(K.local))))
    for F in K.facets:
        value = moment @ F.normal - psi.mass * F.offset
        if value < -tol * scale * extent:
            return False
    return True


def barycenter(psi):
    """``sum w_i x_i / sum w_i`` (requires nonzero mass)."""
    return psi.weights @ psi.points / psi.mass


__all__ = [
    "AffineFunction", "Effect", "TwoOutcomeMeasurement", "FiniteMeasurement",
    "Functional", "PositiveFunctional", "evaluate", "range_on", "sup_norm",
    "is_positive", "is_order_unit", "facet_function",
    "effect_vanishing_on_facet", "effect_exposing_vertex", "coin_toss",
    "mix_with_coin", "apply_functional", "functional_is_positive",
    "barycenter",
]
