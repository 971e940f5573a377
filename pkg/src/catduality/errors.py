class CatDualityError(Exception):
    pass


class ValidationError(CatDualityError, ValueError):
    """Raised when data fails a structural law.

    ``counterexample`` is a JSON-ready dict naming the violated law and the
    witnessing elements, so the failure can be replayed.
    """

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample or {}


class BudgetExceeded(CatDualityError, RuntimeError):
    pass
