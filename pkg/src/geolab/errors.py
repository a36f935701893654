"""Exception types shared across geolab modules."""


class GeolabError(Exception):
    """Base class for all geolab errors."""


class PointOffSurface(GeolabError):
    """A point fails the on-surface tolerance |F(p)| <= tol."""


class ChartUnavailable(GeolabError):
    """No chart representation exists at the requested point."""


class LeftChartDomain(GeolabError):
    """Integration left the chart's parameter rectangle."""


class StepTooLarge(GeolabError):
    """Energy or constraint drift exceeded tolerance during integration."""


class NoConvergence(GeolabError):
    """Iterative solver did not converge within its iteration budget."""


class DegenerateJacobian(GeolabError):
    """The shooting differential is singular (signals a Jacobi field)."""


class NotAGeodesic(GeolabError):
    """Input curve fails the geodesic test max|kappa| <= tol."""


class GridTooCoarse(GeolabError):
    """Spectral classification is ambiguous at this discretization."""


class AmbiguousCluster(GeolabError):
    """Two vertex clusters are closer than twice the clustering radius."""


class HypothesisViolated(GeolabError):
    """A curvature hypothesis of a checker is violated by the surface."""


class OffsetTooLarge(GeolabError):
    """Detour offset would leave the working ball."""


class VertexNotOnStrand(GeolabError):
    """Requested strand does not pass through the vertex."""


class NotReducible(GeolabError):
    """Vertex order is below 3; nothing to split."""


class D0TooLarge(GeolabError):
    """Conformal-factor support annulus would touch another strand."""


class OriginMismatch(GeolabError):
    """Axis fields disagree at the crossing point."""


class NotGPlus(GeolabError):
    """Network has a vertex that is not a transverse order-2 crossing."""


class EtaTooLarge(GeolabError):
    """Crossing-ball radius exceeds half the minimum inter-vertex distance."""


class FlowLeftSurface(GeolabError):
    """Flowed points drifted off-surface beyond tolerance."""


class SeedBudgetExhausted(GeolabError):
    """A required geodesic was not found within the seed budget."""


class ConfigInvalid(GeolabError):
    """Run configuration failed schema validation."""
