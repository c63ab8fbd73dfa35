class ContractViolation(ValueError):
    """An argument broke a documented precondition."""


class BudgetExhausted(RuntimeError):
    """Raised when an objective call is requested with no evaluations left."""
