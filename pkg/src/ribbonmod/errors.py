"""Exception types raised by the ribbonmod validators and operations.

Every structural invariant that can fail has a named exception so that
diagnostics (and the CLI) can report the first violated invariant by name.
"""


class RibbonError(ValueError):
    """Base class for all ribbonmod errors."""

    @property
    def name(self):
        return type(self).__name__


# --- permutation model ------------------------------------------------------

class EmptyLabelSet(RibbonError):
    pass


class NotInvolution(RibbonError):
    pass


class FixedPointInPairing(RibbonError):
    pass


class NotAPermutation(RibbonError):
    pass


# --- pointings --------------------------------------------------------------

class NotInjective(RibbonError):
    pass


class BadPointingTarget(RibbonError):
    pass


class DistinguishedPointUncovered(RibbonError):
    pass


class NonNegativeEulerComponent(RibbonError):
    pass


class VertexPointed(RibbonError):
    pass


class NotBivalent(RibbonError):
    pass


# --- subsets and collapses --------------------------------------------------

class EmptySubset(RibbonError):
    pass


class FullSubset(RibbonError):
    pass


class NotNegligible(RibbonError):
    pass


class PointingCollision(RibbonError):
    pass


# --- stable graphs and sequences --------------------------------------------

class UnorderedComponent(RibbonError):
    pass


class BadFaceTarget(RibbonError):
    pass


class NotNested(RibbonError):
    pass


class SwallowsComponent(RibbonError):
    pass


class NotInStableCore(RibbonError):
    pass


# --- metrics ----------------------------------------------------------------

class Disconnected(RibbonError):
    pass


class DisconnectedSubgraph(RibbonError):
    pass


class ZeroOnSubgraph(RibbonError):
    pass


class NotUnital(RibbonError):
    pass


class NotPositive(RibbonError):
    pass


class InconsistentLimit(RibbonError):
    pass


# --- enumeration ------------------------------------------------------------

class UnstablePair(RibbonError):
    pass


class ValencyTooLow(RibbonError):
    pass
