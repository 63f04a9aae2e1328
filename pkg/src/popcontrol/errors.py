class BudgetExceeded(RuntimeError):
    """An explicit exploration hit its node-count cap."""

    def __init__(self, what: str, budget: int):
        super().__init__(f"{what}: exploration exceeded the budget of {budget} nodes (raise --budget)")
        self.budget = budget
