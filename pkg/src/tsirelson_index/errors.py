"""Exception types shared across the package."""


class BudgetError(RuntimeError):
    """A computation would exceed its configured size cap."""


class UnsupportedFamily(ValueError):
    """A family expression falls outside what the rule engine can decide."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""
