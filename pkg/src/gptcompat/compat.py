"""Compatibility and degree of compatibility of two-outcome measurements.

Every inequality between affine functions on a polytope holds on K iff it
holds at the vertices, so the ordered-vector-space programs become finite
matrix LPs with one row per (vertex, constraint family). The interpolating
function ``p`` is parametrised by its affine coefficients in normalised
chart coordinates, split into nonnegative pairs for the solver.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .config import GAP_TOL, LAMBDA_TOL
from .effects import (AffineFunction, Effect, FiniteMeasurement, Functional,
                      TwoOutcomeMeasurement, effect_exposing_vertex,
                      effect_vanishing_on_facet, evaluate,
                      functional_is_positive, mix_with_coin)
from .errors import (DegenerateDual, DimensionMismatch, EffectInvalid,
                     InfeasibleP, InvalidCertificate, NotASimplex,
                     NotIncompatible, ParameterOutOfRange, SearchExhausted,
                     SimplexInput, SolverFailure)
from .geometry import contains, interior_point, is_simplex
from .lp import LinearProgram, Status, duality_gap, solve_lp

logger = logging.getLogger(__name__)

MU_CLAMP = 1e-9
# Row families of the uniform-coin degree LP, in row order.
FAMILIES = ("first", "second", "sum", "positive")


@dataclass(frozen=True)
class JointMeasurement:
    """Four effects indexed by outcome pairs (11, 12, 21, 22)."""

    g11: Effect
    g12: Effect
    g21: Effect
    g22: Effect

    def __post_init__(self):
        total = self.g11 + self.g12 + self.g21 + self.g22
        if not total.allclose(1.0, atol=1e-8):
            raise EffectInvalid("joint effects do not sum to 1")

    @property
    def effects(self):
        return (self.g11, self.g12, self.g21, self.g22)

    def as_finite(self):
        return FiniteMeasurement([(1, 1), (1, 2), (2, 1), (2, 2)],
                                 list(self.effects))


@dataclass(frozen=True)
class CompatibilityResult:
    compatible: bool
    p: AffineFunction = None
    joint: JointMeasurement = None


@dataclass(frozen=True)
class IncompatibilityCertificate:
    """Dual witness ``l = (a1 phi_z1, a2 phi_z2, a3 phi_z3)``."""

    a1: float
    a2: float
    a3: float
    z1: np.ndarray
    z2: np.ndarray
    z3: np.ndarray
    violation: float

    @property
    def a(self):
        return (self.a1, self.a2, self.a3)

    @property
    def z(self):
        return (self.z1, self.z2, self.z3)


@dataclass(frozen=True)
class DegreeResult:
    lam: float
    mu: float
    p: AffineFunction
    joint_at_lambda: JointMeasurement
    certificate: IncompatibilityCertificate = None
    biases: tuple = (0.5, 0.5)
    primal_objective: float = None
    dual_objective: float = None

    @property
    def gap(self):
        return abs(self.primal_objective - self.dual_objective)

    @property
    def compatible(self):
        return self.lam >= 1.0 - LAMBDA_TOL


def _same_space(m1, m2, K=None):
    K = m1.space if K is None else K
    if m1.space is not K or m2.space is not K:
        raise DimensionMismatch("measurements must live on the same polytope")
    return K


def _design(K):
    """Vertex design matrix ``[y, 1]`` in normalised chart coordinates.

    Returns the matrix and a map from coefficient vectors back to an
    :class:`AffineFunction`.
    """
    center = K.local.mean(axis=0)
    extent = max(float(np.max(np.abs(K.local - center), initial=0.0)), 1e-300)
    Y = (K.local - center) / extent
    Phi = np.hstack([Y, np.ones((K.n_vertices, 1))])

    def to_function(coef):
        lin = coef[:-1] / extent
        return AffineFunction(K, lin, coef[-1] - float(lin @ center))

    return Phi, to_function


def _values(m):
    return m.effect.vertex_values()


def joint_from_p(m1, m2, p, K=None, tol=None):
    """Joint measurement with ``g11 = p`` and the given marginals."""
    K = _same_space(m1, m2, K)
    tol = K.tol if tol is None else tol
    f1, f2 = m1.effect, m2.effect
    parts = {"g11": p, "g12": f1 - p, "g21": f2 - p, "g22": 1 - f1 - f2 + p}
    effects = {}
    for name, g in parts.items():
        try:
            effects[name] = Effect.of(g, tol=tol)
        except EffectInvalid as exc:
            raise InfeasibleP(f"{name} is not an effect: {exc}") from None
    return JointMeasurement(**effects)


def marginals(joint):
    """First marginal ``g11 + g12``, second ``g11 + g21``."""
    return (TwoOutcomeMeasurement(Effect.of(joint.g11 + joint.g12)),
            TwoOutcomeMeasurement(Effect.of(joint.g11 + joint.g21)))


def is_compatible(m1, m2, K=None):
    """Search for ``p`` with ``0 <= p <= f1, f2`` and ``1 + p >= f1 + f2``."""
    K = _same_space(m1, m2, K)
    Phi, to_function = _design(K)
    f1, f2 = _values(m1), _values(m2)
    A = np.vstack([np.hstack([Phi, -Phi]), np.hstack([-Phi, Phi]),
                   np.hstack([-Phi, Phi]), np.hstack([Phi, -Phi])])
    b = np.concatenate([np.zeros(K.n_vertices), -f1, -f2, f1 + f2 - 1])
    lp = LinearProgram(np.zeros(A.shape[1]), A, b)
    sol = solve_lp(lp)
    if sol.status is Status.INFEASIBLE:
        return CompatibilityResult(False)
    if not sol.optimal:
        raise SolverFailure(f"feasibility LP returned {sol.status.value}")
    k = Phi.shape[1]
    p = to_function(sol.x[:k] - sol.x[k:])
    joint = joint_from_p(m1, m2, p, K, tol=max(K.tol, 1e-8))
    return CompatibilityResult(True, p, joint)


def degree_lp(m1, m2, K=None):
    """The uniform-coin degree LP: minimise ``mu`` over ``(mu, p+, p-)``.

    Rows are grouped by family (see ``FAMILIES``), one row per vertex in
    vertex order within each family.
    """
    K = _same_space(m1, m2, K)
    Phi, to_function = _design(K)
    n = K.n_vertices
    f1, f2 = _values(m1), _values(m2)
    half = np.full((n, 1), 0.5)
    zero = np.zeros((n, 1))
    A = np.vstack([
        np.hstack([half, -Phi, Phi]),
        np.hstack([half, -Phi, Phi]),
        np.hstack([zero, Phi, -Phi]),
        np.hstack([zero, Phi, -Phi]),
    ])
    b = np.concatenate([-f1, -f2, f1 + f2 - 1, np.zeros(n)])
    c = np.zeros(A.shape[1])
    c[0] = 1.0
    return LinearProgram(c, A, b), to_function


def _lambda_from_mu(mu):
    if abs(mu) <= MU_CLAMP:
        mu = 0.0
    if mu < 0:
        raise SolverFailure(f"negative optimal mu {mu}")
    return 1.0 / (1.0 + mu), mu


def degree(m1, m2, K=None, certificate=True, gap_tol=GAP_TOL):
    """Degree of compatibility with the fair coin as noise."""
    K = _same_space(m1, m2, K)
    lp, to_function = degree_lp(m1, m2, K)
    sol = solve_lp(lp)
    if not sol.optimal:
        raise SolverFailure(f"degree LP returned {sol.status.value}")
    gap = duality_gap(sol, lp)
    if gap > gap_tol:
        raise SolverFailure(f"duality gap {gap:.3g} exceeds {gap_tol:.3g}")
    lam, mu = _lambda_from_mu(sol.objective)
    k = (lp.shape[1] - 1) // 2
    p = to_function(sol.x[1:1 + k] - sol.x[1 + k:])
    mixed1 = mix_with_coin(m1, lam, 0.5)
    mixed2 = mix_with_coin(m2, lam, 0.5)
    joint = joint_from_p(mixed1, mixed2, lam * p, K, tol=max(K.tol, 1e-8))
    cert = None
    if certificate and lam < 1.0 - LAMBDA_TOL:
        cert = extract_certificate(sol, K, m1, m2)
    return DegreeResult(lam, mu, p, joint, cert, (0.5, 0.5),
                        sol.objective, sol.dual_objective)


def _certificate_violation(m1, m2, a, z):
    f1, f2 = m1.effect, m2.effect
    return float(-a[0] * evaluate(f1, z[0]) - a[1] * evaluate(f2, z[1])
                 + a[2] * (evaluate(f1, z[2]) + evaluate(f2, z[2]) - 1.0))


def extract_certificate(sol, K, m1, m2, tol=None):
    """Aggregate the dual multipliers of the degree LP into ``(a_i, z_i)``.

    Rows of one family collapse to a single weighted evaluation at their
    barycenter; affine functions cannot tell the two apart.
    """
    tol = K.tol if tol is None else tol
    if not sol.optimal:
        raise DegenerateDual(f"dual unavailable: {sol.status.value}")
    lam, mu = _lambda_from_mu(sol.objective)
    if lam >= 1.0 - LAMBDA_TOL:
        raise NotIncompatible(f"mu = {mu:.3g}: measurements are compatible")
    n = K.n_vertices
    y = np.maximum(sol.y, 0.0)
    a, z = [], []
    for i in range(3):
        w = y[i * n:(i + 1) * n]
        mass = float(w.sum())
        a.append(mass)
        if mass <= tol:
            z.append(interior_point(K))
        else:
            z.append(w @ K.vertices / mass)
    violation = _certificate_violation(m1, m2, a, z)
    cert = IncompatibilityCertificate(a[0], a[1], a[2], z[0], z[1], z[2],
                                      violation)
    try:
        verify_certificate(cert, m1, m2, K, tol=max(tol, 1e-8))
    except InvalidCertificate as exc:
        raise DegenerateDual(f"aggregated dual fails: {exc}") from None
    if not violation > tol:
        raise DegenerateDual(f"violation {violation:.3g} is not positive")
    return cert


def verify_certificate(cert, m1, m2, K=None, tol=None):
    """Check every certificate condition and return its violation value.

    Independent of any LP. A returned value ``> tol`` proves that ``m1``
    and ``m2`` are incompatible.
    """
    K = _same_space(m1, m2, K)
    tol = K.tol if tol is None else tol
    a = np.array(cert.a, dtype=float)
    z = [np.asarray(p, dtype=float) for p in cert.z]
    if np.any(a < -tol):
        raise InvalidCertificate("nonnegativity", f"negative weight in {a}")
    if (a[0] + a[1]) / 2 > 1 + tol:
        raise InvalidCertificate(
            "normalisation", f"(a1 + a2)/2 = {(a[0] + a[1]) / 2:.12g} > 1")
    for i, point in enumerate(z, 1):
        if not contains(K, point, tol=max(tol, K.tol)):
            raise InvalidCertificate("membership", f"z{i} is not in K")
    psi = Functional(np.array(z), [a[0], a[1], -a[2]])
    if not functional_is_positive(psi, K, tol=tol):
        raise InvalidCertificate(
            "positivity", "a1 phi_z1 + a2 phi_z2 - a3 phi_z3 is not positive")
    return _certificate_violation(m1, m2, a, z)


def degree_free_coin(m1, m2, K=None, gap_tol=GAP_TOL):
    """Degree of compatibility with the coin biases optimised as well.

    Substituting ``s_i = mu * t_i`` keeps the program linear. The
    certificate (when incompatible) is the one from the fair-coin LP,
    which certifies the same fact.
    """
    K = _same_space(m1, m2, K)
    Phi, to_function = _design(K)
    n = K.n_vertices
    k = Phi.shape[1]
    f1, f2 = _values(m1), _values(m2)
    zero = np.zeros((n, 1))
    one = np.ones((n, 1))
    # columns: mu, s1, s2, p+, p-
    A = np.vstack([
        np.hstack([zero, one, zero, -Phi, Phi]),
        np.hstack([zero, zero, one, -Phi, Phi]),
        np.hstack([one, -one, -one, Phi, -Phi]),
        np.hstack([zero, zero, zero, Phi, -Phi]),
        np.hstack([[[1.0, -1.0, 0.0]], np.zeros((1, 2 * k))]),
        np.hstack([[[1.0, 0.0, -1.0]], np.zeros((1, 2 * k))]),
    ])
    b = np.concatenate([-f1, -f2, f1 + f2 - 1, np.zeros(n), [0.0, 0.0]])
    c = np.zeros(A.shape[1])
    c[0] = 1.0
    lp = LinearProgram(c, A, b)
    sol = solve_lp(lp)
    if not sol.optimal:
        raise SolverFailure(f"free-coin LP returned {sol.status.value}")
    gap = duality_gap(sol, lp)
    if gap > gap_tol:
        raise SolverFailure(f"duality gap {gap:.3g} exceeds {gap_tol:.3g}")
    lam, mu = _lambda_from_mu(sol.objective)
    s1, s2 = sol.x[1], sol.x[2]
    if mu <= MU_CLAMP:
        t1 = t2 = 0.5
    else:
        t1 = float(np.clip(s1 / mu, 0.0, 1.0))
        t2 = float(np.clip(s2 / mu, 0.0, 1.0))
    p = to_function(sol.x[3:3 + k] - sol.x[3 + k:])
    joint = joint_from_p(mix_with_coin(m1, lam, t1), mix_with_coin(m2, lam, t2),
                         lam * p, K, tol=max(K.tol, 1e-8))
    cert = None
    if lam < 1.0 - LAMBDA_TOL:
        cert = degree(m1, m2, K).certificate
    return DegreeResult(lam, mu, p, joint, cert, (t1, t2),
                        sol.objective, sol.dual_objective)


def _as_finite(m):
    if isinstance(m, TwoOutcomeMeasurement):
        return m.as_finite()
    return m


def simplex_product_joint(m1, m2, K=None):
    """Joint measurement on a simplex: product of the marginals at each
    vertex, extended affinely by the barycentric coordinates."""
    m1, m2 = _as_finite(m1), _as_finite(m2)
    K = m1.space if K is None else K
    if m2.space is not K or m1.space is not K:
        raise DimensionMismatch("measurements must live on the same polytope")
    if not is_simplex(K):
        raise NotASimplex("product joint requires a simplex")
    outcomes, effects = [], []
    for o1, e1 in zip(m1.outcomes, m1.effects):
        v1 = e1.vertex_values()
        for o2, e2 in zip(m2.outcomes, m2.effects):
            outcomes.append((o1, o2))
            effects.append(AffineFunction.from_vertex_values(
                K, v1 * e2.vertex_values()))
    return FiniteMeasurement(outcomes, effects)


def finite_marginal(m, axis):
    """Marginal of a measurement with tuple outcomes along ``axis``."""
    labels, sums = [], {}
    for outcome, effect in zip(m.outcomes, m.effects):
        key = outcome[axis]
        if key not in sums:
            labels.append(key)
            sums[key] = effect
        else:
            sums[key] = sums[key] + effect
    return FiniteMeasurement(labels, [sums[k] for k in labels])


def half_coin_joint(m1, m2, t1=0.5, t2=0.5):
    """Fair-coin choice between measuring ``m1`` and ``m2``, the other
    outcome drawn from a coin of bias ``t2`` resp. ``t1``."""
    if not (0.0 <= t1 <= 1.0 and 0.0 <= t2 <= 1.0):
        raise ParameterOutOfRange(f"biases ({t1}, {t2}) outside [0, 1]")
    _same_space(m1, m2)
    f1, f2 = m1.effect, m2.effect
    return JointMeasurement(
        Effect.of((t1 * f2 + t2 * f1) / 2),
        Effect.of((t1 * (1 - f2) + (1 - t2) * f1) / 2),
        Effect.of(((1 - t1) * f2 + t2 * (1 - f1)) / 2),
        Effect.of(((1 - t1) * (1 - f2) + (1 - t2) * (1 - f1)) / 2),
    )


def construct_incompatible_pair(K):
    """Facet effect and vertex-exposing effect with minimal degree.

    Tries every facet (enumeration order) against every vertex off it
    (index order) and keeps the first pair reaching the minimum.
    """
    if is_simplex(K):
        raise SimplexInput("every pair of measurements on a simplex is "
                           "compatible")
    exposing = {}
    best = None
    tried = 0
    for fi, F in enumerate(K.facets):
        mF = TwoOutcomeMeasurement(effect_vanishing_on_facet(K, F))
        for v in range(K.n_vertices):
            if v in F.vertex_indices:
                continue
            if v not in exposing:
                exposing[v] = TwoOutcomeMeasurement(effect_exposing_vertex(K, v))
            res = degree(mF, exposing[v], K, certificate=False)
            tried += 1
            if best is None or res.lam < best[2].lam - 1e-12:
                best = (mF, exposing[v], res)
    if best is None or best[2].lam >= 1.0 - LAMBDA_TOL:
        raise SearchExhausted(
            f"no incompatible pair among {tried} facet/vertex pairs on "
            f"{K!r}; check tolerances")
    m1, m2, _ = best
    logger.debug("searched %d pairs, best lambda %.9g", tried, best[2].lam)
    return m1, m2, degree(m1, m2, K)
