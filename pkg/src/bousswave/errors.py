"""Exception hierarchy.

Every error carries enough structured data to be serialized by the CLI
(see :meth:`BousswaveError.to_dict`).
"""


class BousswaveError(Exception):
    """Base class for all package errors."""

    def to_dict(self):
        data = {"error": type(self).__name__, "message": str(self)}
        data.update({k: v for k, v in vars(self).items() if not k.startswith("_")})
        return data


class SymbolSingular(BousswaveError, ArithmeticError):
    def __init__(self, xi, detail="non-finite symbol value"):
        self.xi = float(xi)
        super().__init__(f"{detail} at xi={self.xi!r}")


class DerivativeUnstable(BousswaveError, ArithmeticError):
    pass


class ParseError(BousswaveError, ValueError):
    def __init__(self, position, expected, text=""):
        self.position = int(position)
        self.expected = expected
        super().__init__(f"parse error at position {position}: expected {expected}"
                         + (f" in {text!r}" if text else ""))


class UnknownIdentifier(BousswaveError, ValueError):
    def __init__(self, name, position=None):
        self.name = name
        self.position = position
        super().__init__(f"unknown identifier {name!r}")


class BadGrid(BousswaveError, ValueError):
    pass


class GammaZero(BousswaveError, ArithmeticError):
    pass


class AbcdConditionViolated(BousswaveError, ValueError):
    def __init__(self, which, detail=""):
        self.which = int(which)
        super().__init__(f"AbcdConditionViolated{{{which}}}" + (f": {detail}" if detail else ""))


class UnknownModel(BousswaveError, ValueError):
    pass


class ScanUnresolved(BousswaveError, ArithmeticError):
    pass


class SmoothingMismatch(BousswaveError, ArithmeticError):
    pass


class SpectrumCollision(BousswaveError, ArithmeticError):
    def __init__(self, eps, xi):
        self.eps = float(eps)
        self.xi = float(xi)
        super().__init__(f"linear symbol is not positive at xi={self.xi!r} for eps={self.eps!r}")


class GridUnderResolved(BousswaveError, ArithmeticError):
    def __init__(self, tail, tol):
        self.tail = float(tail)
        self.tol = float(tol)
        super().__init__(f"tail fraction {tail:.3e} exceeds {tol:.1e}")


class NewtonDiverged(BousswaveError, ArithmeticError):
    def __init__(self, iterations, last_norm, eps=None):
        self.iterations = int(iterations)
        self.last_norm = float(last_norm)
        self.eps = eps
        super().__init__(f"Newton failed after {iterations} iterations "
                         f"(last residual {last_norm:.3e})")


class JacobianSingular(BousswaveError, ArithmeticError):
    pass


class InsufficientData(BousswaveError, ValueError):
    pass


class SweepFailed(BousswaveError, ArithmeticError):
    """A continuation sweep stopped early; ``results`` holds what converged."""

    def __init__(self, eps, cause, results):
        self.eps = float(eps)
        self.cause = cause.to_dict() if isinstance(cause, BousswaveError) else repr(cause)
        self._results = list(results)
        super().__init__(f"sweep aborted at eps={eps!r}: {cause}")

    @property
    def results(self):
        return self._results


class ConfigError(BousswaveError, ValueError):
    pass


class AssumptionViolated(BousswaveError, ValueError):
    pass
