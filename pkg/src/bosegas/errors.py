"""Exception types shared by all bosegas modules.

Every numerical failure mode surfaces as one of these named errors so that
callers (and the CLI) can report the failure by name instead of crashing.
"""


class BoseGasError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BoseGasError):
    """An argument lies outside the mathematical domain of the operation."""


# --- numerics ---------------------------------------------------------------

class StepSizeUnderflow(BoseGasError):
    """Adaptive ODE step control could not meet the tolerance."""


class NonFiniteRhs(BoseGasError):
    """The ODE right-hand side evaluated to NaN or infinity."""


class NoConvergence(BoseGasError):
    """Iterative refinement stalled before reaching the tolerance."""


class DivergentTail(BoseGasError):
    """Tail estimate of a semi-infinite integral does not shrink."""


class InvalidBracket(BoseGasError):
    """Root bracket endpoints have the same sign."""


# --- potentials / scattering -------------------------------------------------

class NonIntegrableTail(BoseGasError):
    """Potential tail decays too slowly for a finite scattering length."""


class NoLogAsymptote(BoseGasError):
    """2D scattering solution has no logarithmic asymptote (v identically 0)."""


class GridTooCoarse(BoseGasError):
    """Grid-refinement consistency check failed."""


class NotConverged(BoseGasError):
    """Operation requires a converged solution, but the input is not."""


class RadiusInsideRange(BoseGasError):
    """Requested radius lies inside the interaction range."""


class ZeroScatteringLength(BoseGasError):
    """Operation is undefined for a = 0."""


# --- homogeneous-gas machinery ------------------------------------------------

class GapViolation(BoseGasError):
    """Spectral-gap condition E1 > <H> required by the variational bound fails."""


class VarianceNegative(BoseGasError):
    """Second moment is smaller than the squared mean beyond tolerance."""


class AnsatzInfeasible(BoseGasError):
    """Cell-method parameter ansatz violates one of its validity conditions."""


# --- gp ----------------------------------------------------------------------

class NegativeCoupling(BoseGasError):
    """Interaction coupling must be nonnegative."""


# --- bogolubov -----------------------------------------------------------------

class TruncationNotConverged(BoseGasError):
    """Truncated-Fock eigenvalue still moving as the cutoff grows."""


# --- cli -----------------------------------------------------------------------

class ParseError(BoseGasError):
    """Configuration source could not be parsed."""


class UnknownKey(BoseGasError):
    """Configuration contains a key that no command accepts."""
