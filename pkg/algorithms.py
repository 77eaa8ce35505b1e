import logging
from typing import Callable

from scipy.optimize import brentq

from definitions.global_constants import BOUNDARY_RELATIVE_TOLERANCE, DEFAULT_ALPHA_CAP, DEFAULT_BISECTION_STEPS

log = logging.getLogger(__name__)


class Search:
    """
    Abstract base class for stepping searches.
    This class provides a common interface for the iterative searches of the
    package: a search is reset, advanced one step at a time and finally read.

    :param finished: A flag indicating whether the search has converged.
    :type finished: bool
    :param steps: The number of steps executed since the last reset.
    :type steps: int
    """
    finished: bool
    steps: int

    def __init__(self) -> None:
        """ Constructor for the Search class. """
        self.reset()

    def reset(self) -> None:
        """
        Resets the search state.
        Subclasses extend this method to restore their own brackets.
        """
        self.finished = False
        self.steps = 0

    def step(self) -> bool:
        """
        Executes a single step of the search.
        This method should be implemented by subclasses.

        :return: A boolean indicating whether the search can continue processing.
        :rtype: bool

        :raises NotImplementedError: If the method is not implemented in a subclass.
        """
        raise NotImplementedError

    def run(self, max_steps: int = DEFAULT_BISECTION_STEPS) -> "Search":
        """
        Steps the search until it finishes or the step budget is exhausted.

        :param max_steps: The maximum number of steps.
        :type max_steps: int

        :return: The search itself, for chaining.
        :rtype: Search
        """
        while self.steps < max_steps and self.step():
            pass
        return self


class AlphaBoundarySearch(Search):
    """
    Bisection for the positivity boundary of a metric family along a ray.
    The first phase doubles the trial parameter until positivity is lost (or the cap
    is reached); the second phase bisects the bracket [lo, hi] where the
    metric is positive definite at lo and not at hi.

    :param theta_at: Callable returning the metric at ray parameter t.
    :type theta_at: Callable
    :param is_positive: Callable classifying a metric as positive definite.
    :type is_positive: Callable
    :param cap: The largest ray parameter explored.
    :type cap: float
    :param relative_tolerance: Bisection stops once hi - lo <= relative_tolerance * hi.
    :type relative_tolerance: float
    """
    theta_at: Callable
    is_positive: Callable
    cap: float
    relative_tolerance: float
    lo: float
    hi: float
    expanding: bool
    capped: bool

    def __init__(self, theta_at: Callable, is_positive: Callable, cap: float = DEFAULT_ALPHA_CAP,
                 relative_tolerance: float = BOUNDARY_RELATIVE_TOLERANCE) -> None:
        """ Constructor for the AlphaBoundarySearch class. """
        self.theta_at = theta_at
        self.is_positive = is_positive
        self.cap = cap
        self.relative_tolerance = relative_tolerance
        super().__init__()

    def reset(self) -> None:
        super().reset()
        self.lo = 0.0
        self.hi = min(1.0, self.cap)
        self.expanding = True
        self.capped = False

    def step(self) -> bool:
        if self.finished:
            return False
        self.steps += 1
        # Doubling phase
        if self.expanding:
            if not self.is_positive(self.theta_at(self.hi)):
                self.expanding = False
                log.debug("bracket found: [%g, %g]", self.lo, self.hi)
                return True
            self.lo = self.hi
            if self.hi >= self.cap:
                # Positivity survives up to the cap
                self.capped = True
                self.finished = True
                return False
            self.hi = min(2.0 * self.hi, self.cap)
            return True
        # Bisection phase, lo stays positive and hi does not
        mid = 0.5 * (self.lo + self.hi)
        if self.is_positive(self.theta_at(mid)):
            self.lo = mid
        else:
            self.hi = mid
        if self.hi - self.lo <= self.relative_tolerance * self.hi:
            self.finished = True
            return False
        return True

    @property
    def boundary(self) -> float:
        """ The last parameter known to give a positive-definite metric. """
        return self.lo


class InterlacingRootSearch(Search):
    """
    Zeros of an orthogonal polynomial family found degree by degree.
    The zeros of degree m+1 are strictly interlaced by those of degree m, so
    each step brackets every new zero between consecutive old ones and
    refines it with Brent's method.

    :param evaluate: Callable (degree, z) -> polynomial value.
    :type evaluate: Callable
    :param degree: The target degree.
    :type degree: int
    :param lower: A point strictly left of all zeros.
    :type lower: float
    :param upper: A point strictly right of all zeros.
    :type upper: float
    """
    evaluate: Callable
    degree: int
    lower: float
    upper: float
    current_degree: int
    zeros: list

    def __init__(self, evaluate: Callable, degree: int, lower: float, upper: float) -> None:
        """ Constructor for the InterlacingRootSearch class. """
        self.evaluate = evaluate
        self.degree = degree
        self.lower = lower
        self.upper = upper
        super().__init__()

    def reset(self) -> None:
        super().reset()
        self.current_degree = 0
        self.zeros = []

    def step(self) -> bool:
        if self.finished or self.current_degree >= self.degree:
            self.finished = True
            return False
        self.steps += 1
        target = self.current_degree + 1
        # Each new zero lies between two neighbouring old ones
        points = [self.lower] + self.zeros + [self.upper]
        self.zeros = [
            brentq(lambda z: self.evaluate(target, z), left, right, xtol=1e-15, rtol=1e-15)
            for left, right in zip(points[:-1], points[1:])
        ]
        self.current_degree = target
        if self.current_degree == self.degree:
            self.finished = True
            return False
        return True
