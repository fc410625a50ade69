"""Exception types raised by orbitprox."""


class OrbitproxError(Exception):
    """Base class for all library errors."""


class CoplanarOrbits(OrbitproxError, ValueError):
    """The two orbital planes coincide, so the mutual node line is undefined."""


class DegenerateBranch(OrbitproxError, ValueError):
    """A derivative was requested on the branch where a nodal radius is infinite."""


class PointAtInfinity(OrbitproxError, ValueError):
    """The requested true anomaly does not correspond to a finite point of the conic."""


class NoRealRoot(OrbitproxError, ArithmeticError):
    pass


class NoPositiveRoot(OrbitproxError, ArithmeticError):
    pass


class NoAdmissibleRoot(OrbitproxError, ArithmeticError):
    pass


class EmptyCurve(OrbitproxError, ValueError):
    """No sign change of the traced function inside the requested window."""


class MalformedHeader(OrbitproxError, ValueError):
    pass
