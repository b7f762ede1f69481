"""Exception hierarchy for liesurf.

Every exception carries a stable ``code`` string so the HTTP service and the
CLI can map failures without string-matching messages.
"""

from __future__ import annotations


class LieSurfError(Exception):
    """Base class for all liesurf errors."""

    code = "error"

    def __init__(self, message: str = "", **context):
        super().__init__(message or self.__doc__)
        self.context = context


# --- pseudo-Euclidean linear algebra -----------------------------------------

class NotUnitTimelike(LieSurfError):
    """Vector is not unit timelike ((v,v) = -1 required)."""
    code = "not_unit_timelike"


class GramSchmidtBreakdown(LieSurfError):
    """All candidate vectors became numerically null during orthogonalization."""
    code = "gram_schmidt_breakdown"


class NotLightlike(LieSurfError):
    """Vector is not on the lightcone ((v,v) = 0 required)."""
    code = "not_lightlike"


class ZeroVector(LieSurfError):
    """Zero vector where a nonzero representative is required."""
    code = "zero_vector"


class ImproperPoint(LieSurfError):
    """Lightcone direction proportional to the spaceform vector; it represents
    no sphere, plane or finite point."""
    code = "improper_point"


class NotOrthogonal(LieSurfError):
    """Matrix does not preserve the signature (4,2) inner product."""
    code = "not_orthogonal"


class NoTimelikeVector(LieSurfError):
    """Requested subspace contains no timelike direction."""
    code = "no_timelike_vector"


# --- jets ---------------------------------------------------------------------

class DivisionByZeroConstantTerm(LieSurfError):
    """Jet division requires a nonzero constant term in the divisor."""
    code = "division_by_zero_constant_term"


class NegativeSqrtConstantTerm(LieSurfError):
    """Jet sqrt/real-power requires a positive constant term."""
    code = "negative_sqrt_constant_term"


class OrderExhausted(LieSurfError):
    """A derivative was requested beyond the truncation order of the jet."""
    code = "order_exhausted"


# --- surface DSL ---------------------------------------------------------------

class SurfaceSyntaxError(LieSurfError):
    """Malformed surface expression."""
    code = "syntax_error"

    def __init__(self, message: str, position: int, line: int = 1, column: int | None = None):
        super().__init__(message, position=position, line=line, column=column)
        self.position = position
        self.line = line
        self.column = column if column is not None else position + 1


class UnknownIdentifier(SurfaceSyntaxError):
    """Identifier is not u, v, a declared constant or a known function."""
    code = "unknown_identifier"


class NonSmoothFunction(SurfaceSyntaxError):
    """Function is not smooth and is excluded from the expression language."""
    code = "non_smooth_function"


class EvaluationDomainError(LieSurfError):
    """Expression is not defined/smooth at the evaluation point."""
    code = "evaluation_domain_error"


class SurfaceFileError(LieSurfError):
    """Malformed surface definition file."""
    code = "surface_file_error"


# --- lifts and projections -----------------------------------------------------

class NotUnitNormal(LieSurfError):
    """Supplied normal is not unit length at the base point."""
    code = "not_unit_normal"


class NotIsotropic(LieSurfError):
    """Supplied normal is not orthogonal to the surface derivatives."""
    code = "not_isotropic"


class RankDeficient(LieSurfError):
    """f_u x f_v vanishes at the base point; supply an explicit normal
    (nx/ny/nz) to classify frontal singularities here."""
    code = "rank_deficient"


class ProjectionSingular(LieSurfError):
    """The lifted plane has no Euclidean projection at this point
    (the 2x2 pairing matrix against p, q is singular)."""
    code = "projection_singular"


# --- curvature ------------------------------------------------------------------

class NotImmersed(LieSurfError):
    """Surface is not immersed at the base point."""
    code = "not_immersed"


class UmbilicDirectionUndefined(LieSurfError):
    """Principal directions are undefined at an umbilic point."""
    code = "umbilic_direction_undefined"


class UmbilicAmbiguity(LieSurfError):
    """Curvature sphere selection by index is meaningless at an umbilic."""
    code = "umbilic_ambiguity"


class NotUmbilic(LieSurfError):
    """Operation requires an umbilic base point."""
    code = "not_umbilic"


class Umbilic(LieSurfError):
    """Operation requires a non-umbilic base point."""
    code = "umbilic"


# --- classification --------------------------------------------------------------

class NotSingular(LieSurfError):
    """Area density does not vanish at the point."""
    code = "not_singular"


class NotSingularHere(LieSurfError):
    """(sigma_1(x), p) does not vanish, so the projection is regular at x."""
    code = "not_singular_here"


class NotRank1(LieSurfError):
    """Differential does not have rank 1 at the point."""
    code = "not_rank1"


class NotRank0(LieSurfError):
    """Differential does not have rank 0 at the point."""
    code = "not_rank0"


class NotFront(LieSurfError):
    """(f, t) is not an immersion at the point; front criteria do not apply."""
    code = "not_front"


# --- steering / CLI ---------------------------------------------------------------

class NoTransition(LieSurfError):
    """Classification is constant over the requested parameter range."""
    code = "no_transition"


class TypeIncompatible(LieSurfError):
    """Requested singularity class is impossible for the surface type at the
    chosen point."""
    code = "type_incompatible"


class ConfigError(LieSurfError):
    """Invalid run configuration."""
    code = "config_error"
