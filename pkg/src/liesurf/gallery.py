"""Bundled sample surfaces and reference transformation matrices.

The surfaces cover the classification test bed: the model maps of each
singularity class (with smooth unit normals derived by hand from
f_u x f_v = 0 solutions), umbilic graph surfaces for the cubic-form
pipeline, and regular surfaces used for steering demonstrations.

``swallowtail_steering_matrix`` and ``beaks_lips_family`` are the two
reference O(4,2) matrices acting on the parabolic cylinder: the first sends
(0,0) to a swallowtail, the second is a one-parameter family crossing from
cuspidal beaks to cuspidal lips at xi = 1/(2 sqrt 2).
"""

from __future__ import annotations

import math

import numpy as np

PARABOLIC_CYLINDER = """\
x = u
y = u^2
z = v
domain = -1 1 -1 1
"""

CUSPIDAL_EDGE = """\
x = u
y = v^2
z = v^3
nx = 0
ny = -3*v / sqrt(9*v^2 + 4)
nz = 2 / sqrt(9*v^2 + 4)
domain = -1 1 -1 1
"""

SWALLOWTAIL = """\
x = u
y = 4*v^3 + 2*u*v
z = 3*v^4 + u*v^2
nx = -v^2 / sqrt(1 + v^2 + v^4)
ny = v / sqrt(1 + v^2 + v^4)
nz = -1 / sqrt(1 + v^2 + v^4)
domain = -1 1 -1 1
"""

CUSPIDAL_BEAKS = """\
x = u
y = 2*v^3 - u^2*v
z = 3*v^4 - u^2*v^2
nx = -2*u*v^2 / sqrt(1 + 4*v^2 + 4*u^2*v^4)
ny = -2*v / sqrt(1 + 4*v^2 + 4*u^2*v^4)
nz = 1 / sqrt(1 + 4*v^2 + 4*u^2*v^4)
domain = -1 1 -1 1
"""

CUSPIDAL_LIPS = """\
x = u
y = 2*v^3 + u^2*v
z = 3*v^4 + u^2*v^2
nx = 2*u*v^2 / sqrt(1 + 4*v^2 + 4*u^2*v^4)
ny = -2*v / sqrt(1 + 4*v^2 + 4*u^2*v^4)
nz = 1 / sqrt(1 + 4*v^2 + 4*u^2*v^4)
domain = -1 1 -1 1
"""

CUSPIDAL_BUTTERFLY = """\
x = u
y = 5*v^4 + 2*u*v
z = 4*v^5 + u*v^2
nx = -v^2 / sqrt(1 + v^2 + v^4)
ny = v / sqrt(1 + v^2 + v^4)
nz = -1 / sqrt(1 + v^2 + v^4)
domain = -1 1 -1 1
"""

D4_PLUS = """\
x = 2*u*v
y = u^2 + 3*v^2
z = 2*u^2*v + 2*v^3
nx = -u / sqrt(1 + u^2 + v^2)
ny = -v / sqrt(1 + u^2 + v^2)
nz = 1 / sqrt(1 + u^2 + v^2)
domain = -1 1 -1 1
"""

D4_MINUS = """\
x = 2*u*v
y = -u^2 + 3*v^2
z = -2*u^2*v + 2*v^3
nx = u / sqrt(1 + u^2 + v^2)
ny = -v / sqrt(1 + u^2 + v^2)
nz = 1 / sqrt(1 + u^2 + v^2)
domain = -1 1 -1 1
"""

ELLIPTIC_UMBILIC_GRAPH = """\
x = u
y = v
z = (u^2 + v^2)/2 + (u^3 - 3*u*v^2)/6
domain = -0.5 0.5 -0.5 0.5
"""

HYPERBOLIC_UMBILIC_GRAPH = """\
x = u
y = v
z = (u^2 + v^2)/2 + (u^3 + u*v^2)/6
domain = -0.5 0.5 -0.5 0.5
"""

SPHERE_PATCH = """\
x = cos(u) * cos(v)
y = sin(u) * cos(v)
z = sin(v)
domain = -0.6 0.6 -0.6 0.6
"""

TORUS_PATCH = """\
const R = 2
x = (R + cos(u)) * cos(v)
y = (R + cos(u)) * sin(v)
z = sin(u)
domain = 0.4 2.0 -0.8 0.8
"""

# z-cylinder over a plane curve engineered so the curved principal curvature
# has k' = k'' = 0 but k''' != 0 at u = 0 (a type 3 point).
TYPE3_CYLINDER = """\
x = u
y = u^2/2 + u^4/8 + u^5
z = v
domain = -0.4 0.4 -1 1
"""

# graph with k1' != 0 along its own principal direction at (0,0): a type 1 point
TYPE1_GRAPH = """\
x = u
y = v
z = u^2/2 + v^2 + u^3/2 + u*v^2
domain = -0.5 0.5 -0.5 0.5
"""

SURFACES = {
    "parabolic-cylinder": PARABOLIC_CYLINDER,
    "cuspidal-edge": CUSPIDAL_EDGE,
    "swallowtail": SWALLOWTAIL,
    "cuspidal-beaks": CUSPIDAL_BEAKS,
    "cuspidal-lips": CUSPIDAL_LIPS,
    "cuspidal-butterfly": CUSPIDAL_BUTTERFLY,
    "d4-plus": D4_PLUS,
    "d4-minus": D4_MINUS,
    "elliptic-umbilic": ELLIPTIC_UMBILIC_GRAPH,
    "hyperbolic-umbilic": HYPERBOLIC_UMBILIC_GRAPH,
    "sphere-patch": SPHERE_PATCH,
    "torus-patch": TORUS_PATCH,
    "type3-cylinder": TYPE3_CYLINDER,
    "type1-graph": TYPE1_GRAPH,
}

NORMAL_FORM_CLASSES = {
    "cuspidal-edge": "CuspidalEdge",
    "swallowtail": "Swallowtail",
    "cuspidal-beaks": "CuspidalBeaks",
    "cuspidal-lips": "CuspidalLips",
    "cuspidal-butterfly": "CuspidalButterfly",
    "d4-plus": "D4Plus",
    "d4-minus": "D4Minus",
}


def swallowtail_steering_matrix() -> np.ndarray:
    """O(4,2) matrix sending the parabolic cylinder to a swallowtail at (0,0)."""
    return np.array([
        [-0.5, 0.0, 0.0, 0.0, -0.5, 1.0],
        [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        [0.5, 0.0, 0.0, 0.0, -1.5, 1.0],
        [1.0, 0.0, 0.0, 0.0, -1.0, 1.0],
    ])


def beaks_lips_family(xi: float) -> np.ndarray:
    """One-parameter O(4,2) family on the parabolic cylinder.

    Degenerate steering at (0,0): cuspidal beaks for xi < 1/(2 sqrt 2),
    cuspidal lips for xi > 1/(2 sqrt 2), and a type 2 degenerate
    singularity at the crossing.
    """
    s2 = math.sqrt(2.0)
    chi = math.sqrt(1.0 + 2.0 * xi * xi)
    return np.array([
        [-(1.0 / s2 + xi) / chi, 0.0, 0.0, 0.0, 0.0, (1.0 / s2 - xi) / chi],
        [xi * (-1.0 + s2 * xi) / chi, -chi / s2, 0.0, -chi / s2, 0.0,
         -xi * (1.0 + s2 * xi) / chi],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0 / s2, 0.0, -1.0 / s2, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [1.0 / s2 - xi, xi, 0.0, xi, 0.0, 1.0 / s2 + xi],
    ])


MATRIX_FAMILIES = {
    "swallowtail-steer": lambda xi=0.0: swallowtail_steering_matrix(),
    "beaks-lips-family": beaks_lips_family,
}


def get_surface_text(name: str) -> str:
    if name not in SURFACES:
        raise KeyError(f"unknown builtin surface {name!r}; have {sorted(SURFACES)}")
    return SURFACES[name]


def get_matrix(name: str, xi: float = 0.0) -> np.ndarray:
    if name not in MATRIX_FAMILIES:
        raise KeyError(f"unknown builtin matrix {name!r}; have {sorted(MATRIX_FAMILIES)}")
    return MATRIX_FAMILIES[name](xi)
