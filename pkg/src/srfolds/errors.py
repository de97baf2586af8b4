"""Exception types shared across the library.

Everything raised on purpose derives from SrfoldsError so callers can catch
one base class. Numerical failures carry enough context (values, tolerances)
to be actionable without a debugger.
"""


class SrfoldsError(Exception):
    """Base class for all library errors."""


class InvalidInput(SrfoldsError):
    """Arguments outside the documented domain (bad alpha, bad arity, |s| > 1, ...)."""


class StepFailure(SrfoldsError):
    """ODE integrator could not complete the requested time span."""


class NonConvergence(SrfoldsError):
    """Iterative routine (quadrature, root polish, Newton) missed its tolerance."""


class DegenerateMatrix(SrfoldsError):
    """Matrix argument is identically zero or otherwise unusable for rank queries."""


class DegenerateCovector(SrfoldsError):
    """Covector outside the admissible set for the requested operation (H = 0, r = 0, v0 = 0, ...)."""


class NotConjugate(SrfoldsError):
    """Kernel or witness requested at a covector that is not conjugate to tolerance."""


class WitnessNotFound(SrfoldsError):
    """Fold witness search exhausted its trial ladder without meeting the post-conditions."""
