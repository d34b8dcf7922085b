"""Exception types shared across the pipeline."""


class WristwaveError(Exception):
    """Base class for all pipeline errors."""


class MissingFile(WristwaveError):
    pass


class MalformedRow(WristwaveError):
    def __init__(self, row_index, reason):
        self.row_index = row_index
        self.reason = reason
        super().__init__(f"row {row_index}: {reason}")


class InvariantViolation(WristwaveError):
    def __init__(self, invariant, subject_id=None, value=None):
        self.invariant = invariant
        self.subject_id = subject_id
        self.value = value
        super().__init__(f"invariant '{invariant}' violated"
                         + (f" for subject {subject_id}" if subject_id else "")
                         + (f" (value={value!r})" if value is not None else ""))


class NonMonotonicTime(WristwaveError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"non-increasing timestamp at sample index {index}")


class ParseError(WristwaveError):
    pass


class NonFiniteInput(WristwaveError):
    pass


class EmptyRecording(WristwaveError):
    pass


class BadLength(WristwaveError):
    def __init__(self, length, divisor):
        self.length = length
        self.divisor = divisor
        super().__init__(f"signal length {length} is not a positive multiple of {divisor}")


class ShapeMismatch(WristwaveError):
    pass


class ConstantColumn(WristwaveError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"column '{name}' is constant")


class NonConvergence(WristwaveError):
    def __init__(self, max_iters, gap):
        self.max_iters = max_iters
        self.gap = gap
        super().__init__(f"no convergence after {max_iters} iterations (gap={gap:.3e})")


class RankDeficient(WristwaveError):
    pass


class DimensionMismatch(WristwaveError):
    pass


class NonPositiveDefinite(WristwaveError):
    pass


class OptimFailure(WristwaveError):
    pass


class InsufficientSubjects(WristwaveError):
    pass
