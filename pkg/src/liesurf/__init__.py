"""liesurf: Lie sphere transformations of parametric surfaces and
classification of the wavefront singularities they create.

Core layers:

* :mod:`liesurf.jets`        bivariate truncated Taylor arithmetic
* :mod:`liesurf.minkowski`   signature (4,2) linear algebra and the sphere
  interpretation of lightcone lines
* :mod:`liesurf.surface`     the parametric-surface expression language
* :mod:`liesurf.legendre`    lightcone lifts and Euclidean projections
* :mod:`liesurf.curvature`   shape operator, curvature sphere lifts, umbilic
  cubic form
* :mod:`liesurf.transform`   applying O(4,2) matrices; steering constructions
* :mod:`liesurf.classify`    the singularity criteria (direct and
  Lie-geometric)
* :mod:`liesurf.pipeline`    orchestration used by the service and the CLI
"""

from .classify import SingularityClass, SurfaceType, UmbilicType

__all__ = ["SingularityClass", "SurfaceType", "UmbilicType"]
__version__ = "0.1.0"
