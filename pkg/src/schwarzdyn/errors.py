"""Exception hierarchy with stable one-line codes for the CLI."""


class SchwarzDynError(Exception):
    """Base class; ``code`` is the stable machine-readable error id."""

    code = "ERROR"


class DomainError(SchwarzDynError):
    """Input outside the domain of definition of the requested map."""

    code = "DOMAIN_ERROR"


class SlitError(SchwarzDynError):
    """Parameter on the excluded ray (-inf, -1/12) of the family."""

    code = "SLIT_ERROR"


class TangencyAmbiguousError(SchwarzDynError):
    """Two global circumcircle tangencies tie beyond tolerance."""

    code = "TANGENCY_AMBIGUOUS"


class InDropletError(SchwarzDynError):
    """Point lies in the fundamental-tile interior where the map is undefined."""

    code = "IN_DROPLET"


class NearSingularError(SchwarzDynError):
    """Orbit passes too close to a singular boundary point for the computation."""

    code = "NEAR_SINGULAR"


class InadmissibleWordError(SchwarzDynError):
    """Symbol word violates the zero-diagonal transition matrix."""

    code = "INADMISSIBLE_WORD"


class AmbiguousEndpointError(SchwarzDynError):
    """Angle hits a Markov-partition endpoint and no side preference was given."""

    code = "AMBIGUOUS_ENDPOINT"


class BifurcatedRayError(SchwarzDynError):
    """A required inverse branch collides with the critical value."""

    code = "BIFURCATED_RAY"


class NotPreperiodicError(SchwarzDynError):
    """Ray angle is not eventually periodic under the boundary dynamics."""

    code = "NOT_PREPERIODIC"
