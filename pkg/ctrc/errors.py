class CtrcError(ValueError):
    """Base error of the workbench. `code` is a stable identifier used in reports."""

    code = "ERROR"


class ParseError(CtrcError):
    code = "PARSE"


class InvalidSystem(CtrcError):
    code = "INVALID_SYSTEM"

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"System violates {len(report.violations)} restriction(s): "
            + "; ".join(str(v) for v in report.violations[:3])
        )


class StrongRequired(CtrcError):
    code = "STRONG_REQUIRED"


class BudgetExceeded(CtrcError):
    code = "BUDGET_EXCEEDED"

    def __init__(self, message: str, best: int = 0):
        self.best = best
        super().__init__(message)


class DivergenceDetected(CtrcError):
    code = "DIVERGENT"


class NoGroundTerms(CtrcError):
    code = "NO_GROUND_TERMS"


class NotConstructor(CtrcError):
    code = "NOT_CONSTRUCTOR"


class NotLinear(CtrcError):
    code = "NOT_LINEAR"


class NotProper(CtrcError):
    code = "NOT_PROPER"


class UnboundReference(CtrcError):
    code = "UNBOUND_REFERENCE"


class MissingComponent(CtrcError):
    code = "MISSING_COMPONENT"


class UnverifiedPremise(CtrcError):
    code = "UNVERIFIED_PREMISE"


class UnsupportedMode(CtrcError):
    code = "UNSUPPORTED_MODE"
