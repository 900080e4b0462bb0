import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gptcompat import (AffineFunction, Effect, TwoOutcomeMeasurement,
                       build_polytope)
from gptcompat.shapes import (crosspolytope_vertices, hypercube_vertices,
                              ngon_vertices, random_sphere_vertices,
                              simplex_vertices)


@pytest.fixture
def square():
    return build_polytope([(0, 0), (1, 0), (0, 1), (1, 1)])


@pytest.fixture
def triangle():
    return build_polytope([(0, 0), (1, 0), (0, 1)])


@pytest.fixture
def cube():
    return build_polytope(list(itertools.product((0, 1), repeat=3)))


@pytest.fixture
def segment():
    return build_polytope([(0.0,), (1.0,)])


def ambient(K, linear, offset=0.0):
    return AffineFunction.from_ambient(K, linear, offset)


def measurement(K, linear, offset=0.0):
    return TwoOutcomeMeasurement(Effect.of(ambient(K, linear, offset)))


def random_effect(K, rng):
    """Random affine function rescaled into a random subinterval of [0, 1]."""
    g = AffineFunction(K, rng.standard_normal(K.intrinsic_dim),
                       rng.standard_normal())
    vals = g.vertex_values()
    lo, hi = np.sort(rng.uniform(0, 1, 2))
    if rng.uniform() < 0.5:
        lo, hi = 0.0, 1.0
    span = vals.max() - vals.min()
    if span < 1e-12:
        return Effect.of(AffineFunction.constant(K, lo))
    scaled = lo + (g - vals.min()) * ((hi - lo) / span)
    return Effect.of(scaled)


def random_pair(K, rng):
    return (TwoOutcomeMeasurement(random_effect(K, rng)),
            TwoOutcomeMeasurement(random_effect(K, rng)))


def random_simplex(d, rng):
    while True:
        pts = rng.standard_normal((d + 1, d))
        if abs(np.linalg.det(pts[1:] - pts[0])) > 1e-2:
            return build_polytope(pts)


def corpus_polytopes():
    """Named polytopes used across property tests."""
    shapes = {
        "segment": [(0.0,), (1.0,)],
        "triangle": simplex_vertices(2),
        "tetrahedron": simplex_vertices(3),
        "square": hypercube_vertices(2),
        "cube": hypercube_vertices(3),
        "octahedron": crosspolytope_vertices(3),
        "pentagon": ngon_vertices(5),
        "hexagon": ngon_vertices(6),
        "flat_square_3d": [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)],
        "random_3d": random_sphere_vertices(3, 9, 7),
        "random_4d": random_sphere_vertices(4, 8, 3),
    }
    return {name: build_polytope(pts) for name, pts in shapes.items()}


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
