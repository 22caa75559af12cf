"""Exception types raised by the geometry routines."""


class GeometryError(ArithmeticError):
    """Base class for numerical-geometry failures."""


class NonFiniteValue(GeometryError):
    """A sampled function returned nan or inf."""


class NonFiniteEta(NonFiniteValue):
    """The profile phase function returned a non-finite value."""


class NullNormal(GeometryError):
    """The tangent plane is lightlike, so no unit normal exists."""


class SingularBasis(GeometryError):
    """{T, JT} does not span the tangent plane (T is null or zero)."""


class DegenerateMetric(GeometryError):
    """The induced metric is degenerate on the finite-difference stencil."""


class SingularLambda(GeometryError):
    """Closed-form lambda evaluated too close to a pole of tan."""


class InvalidSpec(ValueError):
    """A helix specification or config violates its invariants."""


class HopfCylinder(InvalidSpec):
    """Timelike angle theta = 0: the surface would be a Hopf cylinder."""
