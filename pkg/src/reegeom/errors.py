"""Exceptions and warnings raised by the REE geometry toolkit."""


class ReeGeomError(Exception):
    pass


class InvalidStateError(ReeGeomError, ValueError):
    """Matrix violates one of the density-matrix invariants.

    `invariant` is one of 'shape', 'hermitian', 'trace', 'positive',
    `magnitude` is the size of the violation.
    """
    def __init__(self, invariant: str, magnitude: float):
        super().__init__(f'{invariant} invariant violated by {magnitude:.3e}')
        self.invariant = invariant
        self.magnitude = magnitude


class OutsideTetrahedronError(ReeGeomError, ValueError):
    def __init__(self, t, excess: float):
        super().__init__(
            f'correlation vector {tuple(t)} lies outside the tetrahedron '
            f'by {excess:.3e}')
        self.t = tuple(t)
        self.excess = excess


class NoCrossingError(ReeGeomError):
    pass


class AlreadySeparableError(ReeGeomError):
    """The input is already separable, `result` holds the trivial answer."""
    def __init__(self, result):
        super().__init__('state is already separable')
        self.result = result


class NotEdgeStateError(ReeGeomError, ValueError):
    def __init__(self, num_zeros: int, min_eigenvalue: float):
        super().__init__(
            f'partial transpose has {num_zeros} near-zero eigenvalues '
            f'(min eigenvalue {min_eigenvalue:.3e}), expected exactly one')
        self.num_zeros = num_zeros
        self.min_eigenvalue = min_eigenvalue


class RankDeficientError(ReeGeomError, ValueError):
    def __init__(self, min_eigenvalue: float):
        super().__init__(
            f'state is rank deficient (min eigenvalue {min_eigenvalue:.3e}), '
            f'regularize it first')
        self.min_eigenvalue = min_eigenvalue


class LeftPhysicalRangeError(ReeGeomError):
    def __init__(self, x: float, x_max: float, min_eigenvalue: float):
        super().__init__(
            f'family point x={x:g} is not positive (min eigenvalue '
            f'{min_eigenvalue:.3e}), max admissible x is {x_max:.12g}')
        self.x = x
        self.x_max = x_max
        self.min_eigenvalue = min_eigenvalue


class DegenerateZError(ReeGeomError, ValueError):
    pass


class ParallelLinesError(ReeGeomError):
    pass


class NotSolvableFamilyError(ReeGeomError):
    pass


class NotConvergedError(ReeGeomError):
    """Oracle restarts disagree, `report` holds the best attempt."""
    def __init__(self, report):
        super().__init__(
            f'oracle restarts disagree: values {report.restart_values}')
        self.report = report


class DegenerateFrameWarning(UserWarning):
    pass
