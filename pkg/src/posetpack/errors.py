"""Exception hierarchy. Every error carries enough detail to act on."""


class PosetpackError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class InputError(PosetpackError, ValueError):
    exit_code = 2


class CycleError(InputError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"relation contains a directed cycle through {self.cycle}")


class RangeError(InputError):
    pass


class GroundMismatch(InputError):
    def __init__(self, n1, n2):
        self.grounds = (n1, n2)
        super().__init__(f"families live on different ground sets: {n1} vs {n2}")


class ParseError(InputError):
    def __init__(self, msg, line=None, offset=None):
        self.line = line
        self.offset = offset
        where = f" (line {line}, offset {offset})" if line is not None else ""
        super().__init__(f"{msg}{where}")


class IterationError(InputError):
    pass


class TooSmallError(InputError):
    def __init__(self, n, n_min):
        self.n = n
        self.n_min = n_min
        super().__init__(f"ground size n={n} is too small for this plan; smallest feasible n is {n_min}")


class ResourceError(PosetpackError):
    """A configured cap or budget would be exceeded."""

    exit_code = 3


class CapError(ResourceError):
    def __init__(self, what, value, cap):
        self.value = value
        self.cap = cap
        super().__init__(f"{what}={value} exceeds cap {cap}")


class SizeError(ResourceError):
    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(f"family of {size} sets exceeds the inclusion-exclusion cap {cap}")


class BudgetError(ResourceError):
    def __init__(self, what, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(f"{what} needs {required}, budget is {budget}")


class InfeasibleError(PosetpackError):
    exit_code = 4
