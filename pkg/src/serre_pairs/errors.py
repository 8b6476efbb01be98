"""Exception hierarchy shared by every module in the package."""


class SerrePairError(Exception):
    """Base class; the CLI maps any of these to exit status 2."""


class IneligiblePrime(SerrePairError, ValueError):
    pass


class SingularModel(SerrePairError, ValueError):
    pass


class FactorizationBudgetExceeded(SerrePairError):
    def __init__(self, n: int, remaining: int):
        super().__init__(f"could not split {remaining} (cofactor of {n}) within the budget")
        self.n = n
        self.remaining = remaining


class BadReductionPrime(SerrePairError, ValueError):
    pass


class ClosureBudgetExceeded(SerrePairError):
    def __init__(self, budget: int, reached: int):
        super().__init__(f"closure exceeded budget {budget} (reached {reached} elements)")
        self.budget = budget
        self.reached = reached


class ProjectionNotSurjective(SerrePairError, ValueError):
    def __init__(self, side: int, image_size: int, group_size: int):
        super().__init__(
            f"projection onto factor {side} is not surjective "
            f"(image {image_size} of {group_size})"
        )
        self.side = side


class NotAHomomorphism(SerrePairError, ValueError):
    pass


class NotASubgroup(SerrePairError, ValueError):
    pass


class HypothesisViolation(SerrePairError, ValueError):
    pass


class NotCertifiedSerre(SerrePairError, ValueError):
    pass
