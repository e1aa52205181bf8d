"""Exception hierarchy shared by every module of the package."""


class IlluminationError(Exception):
    """Base class for all errors raised by sphillum."""


class ZeroVector(IlluminationError):
    pass


class AntipodalPair(IlluminationError):
    pass


class CoincidentPair(IlluminationError):
    pass


class DegenerateBasis(IlluminationError):
    pass


class NotInOpenHemisphere(IlluminationError):
    pass


class DegenerateDimension(IlluminationError):
    pass


class UnsupportedDimension(IlluminationError):
    pass


class NotOnBoundary(IlluminationError):
    pass


class InvalidFace(IlluminationError):
    pass


class PointInsideBody(IlluminationError):
    pass


class NotInterior(IlluminationError):
    pass


class GreatsphereMeetsBody(IlluminationError):
    pass


class LightOffGreatsphere(IlluminationError):
    pass


class UncoveredVertex(IlluminationError):
    """No light (or direction) illuminates a vertex.

    ``vertex`` is the vertex index and ``best_margin`` the largest margin any
    of the candidates reached.
    """

    def __init__(self, vertex, best_margin, message=None):
        self.vertex = vertex
        self.best_margin = best_margin
        super().__init__(
            message or f"vertex {vertex} is not covered (best margin {best_margin:.3e})"
        )


class GridTooCoarse(IlluminationError):
    def __init__(self, message, greedy_size=None):
        self.greedy_size = greedy_size
        super().__init__(message)


class NotConvex(IlluminationError):
    pass


class ParallelogramError(IlluminationError):
    pass


class ParallelogramFace(ParallelogramError):
    pass


class ConstructionFailed(IlluminationError):
    def __init__(self, message, trace=None):
        self.trace = trace
        super().__init__(message)


class VertexOnOrBeyondEquator(IlluminationError):
    pass


class NotPolyhedralGraph(IlluminationError):
    pass


class SolverDiverged(IlluminationError):
    def __init__(self, message, defects=()):
        self.defects = list(defects)
        super().__init__(message)


class PointNotOnFacePlane(IlluminationError):
    pass


class PointNotInRelint(IlluminationError):
    pass


class VerificationFailed(IlluminationError):
    pass


class ParseError(IlluminationError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = f"{path}:" if path else ""
        where += f"{line}: " if line else (" " if path else "")
        super().__init__(f"{where}{message}")
