"""Exception hierarchy for the chhs package."""


class ChhsError(Exception):
    """Base class for all package-specific errors."""


class InputError(ChhsError, ValueError):
    """Invalid user-supplied data (bad graph, bad document, bad parameters)."""


class UnknownVertex(InputError):
    pass


class DuplicateVertex(InputError):
    pass


class LoopEdge(InputError):
    pass


class DuplicateEdge(InputError):
    pass


class NotASimplex(InputError):
    """The given vertices are not pairwise adjacent (or not all present)."""


class MaximalSimplex(InputError):
    """Operation requires a non-maximal simplex."""


class EmptySimplex(InputError):
    """Operation requires a nonempty simplex."""


class EmptyLink(InputError):
    pass


class MismatchedBase(InputError):
    """X-graph does not live over the given complex's maximal simplices."""


class BadLevel(InputError):
    """Cone level outside 0..colevel."""


class BadParameters(InputError):
    pass


class VertexNotInAmbient(InputError):
    pass


class EmptyTarget(InputError):
    pass


class Unreachable(ChhsError):
    """Source vertex lies in a component disjoint from the target set."""


class Disconnected(ChhsError):
    """Metric computation requires a connected graph."""


class NotMaximal(InputError):
    """A maximal simplex (W-vertex) was expected."""


class MaximalClass(InputError):
    """A non-maximal simplex class was expected."""


class OrthogonalPair(InputError):
    """Projection between orthogonal classes is undefined."""


class EqualClasses(InputError):
    """Projection between equal classes is undefined."""


class NotAlmostMaximal(InputError):
    """Class is not the class of a codimension-1 face of a maximal simplex."""


class EndpointOutsideLink(InputError):
    pass


class EdgeOutsideLink(InputError):
    pass


class NonMaximalJoin(InputError):
    """An assigned link edge joins to a non-maximal simplex for some
    representative, so the requested W-edge does not exist."""


class ActionNotSimplicial(InputError):
    pass


class NotAPermutation(InputError):
    pass


class InvalidEmbedding(InputError):
    pass


class OverlappingBlobs(InputError):
    pass


class NotMaximalSimplexKey(InputError):
    """A serialized w-edge endpoint is not a maximal simplex of the complex."""


class ParseError(InputError):
    pass


class CapExceeded(ChhsError):
    """A configured size/budget cap was exceeded."""


class InternalConsistencyError(ChhsError):
    """A statement that is a theorem for the computed objects failed; this
    signals an implementation bug, never bad input."""
