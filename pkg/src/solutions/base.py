"""
Common interface of the exact-solution families and the damped Newton
iteration shared by the implicit (hodograph-type) representations.
"""

from abc import ABC, abstractmethod
from typing import Callable, Dict, Optional, Set, Tuple

import numpy as np

from src.config import FiniteDifference, Newton
from src.model.charts import UVWState
from src.model.residuals import JetPoint, UVWJet, fd_jet, to_riemann_jet
from src.telegraph.functions import IdentityFn, MonotoneFn
from src.util.errors import DegenerateFamilyError, NoSolutionError

Guess = Optional[Tuple[float, float]]


def newton_solve(fun: Callable[[np.ndarray], np.ndarray],
                 jac: Callable[[np.ndarray], np.ndarray],
                 guess, **kwargs) -> np.ndarray:
    """
    Newton iteration with backtracking on |F|. Raises DegenerateFamilyError
    when the Jacobian determinant drops below the degeneracy tolerance and
    NoSolutionError when the iteration does not converge.
    """
    tol = kwargs.get('tol', Newton.TOL)
    max_iter = kwargs.get('max_iter', Newton.MAX_ITER)
    degeneracy_tol = kwargs.get('degeneracy_tol', Newton.DEGENERACY_TOL)
    backtrack = kwargs.get('backtrack_steps', Newton.BACKTRACK_STEPS)

    z = np.array(guess, dtype=float)
    f = fun(z)
    norm = np.max(np.abs(f))
    for _ in range(max_iter):
        if norm <= tol:
            return z
        J = jac(z)
        if abs(np.linalg.det(J)) < degeneracy_tol:
            raise DegenerateFamilyError(
                f'hodograph Jacobian is degenerate at {z.tolist()}'
            )
        step = np.linalg.solve(J, -f)
        scale = 1.0
        for _ in range(backtrack):
            trial = z + scale * step
            f_trial = fun(trial)
            norm_trial = np.max(np.abs(f_trial))
            if np.isfinite(norm_trial) and norm_trial < norm:
                break
            scale *= 0.5
        else:
            raise NoSolutionError(
                f'line search stalled at {z.tolist()} (|F| = {norm:.3e})'
            )
        z, f, norm = trial, f_trial, norm_trial
    if norm <= tol:
        return z
    raise NoSolutionError(
        f'Newton did not converge in {max_iter} iterations (|F| = {norm:.3e})'
    )


class ExactSolution(ABC):
    """
    Evaluator of an explicit solution family. Subclasses implement evaluate
    and, where closed forms are available, an analytic jet.
    """

    FAMILY = 'abstract'
    ANALYTIC_JET = False

    def __init__(self, *args, **kwargs):
        self.W: MonotoneFn = kwargs.get('W', IdentityFn())
        self.newton = {
            'tol': kwargs.get('tol', Newton.TOL),
            'max_iter': kwargs.get('max_iter', Newton.MAX_ITER),
            'degeneracy_tol': kwargs.get('degeneracy_tol',
                                         Newton.DEGENERACY_TOL),
        }
        self.fd_step = kwargs.get('fd_step', FiniteDifference.STEP)
        self.guess: Guess = kwargs.get('guess')
        # (t, x) points where the inversion picked one of several roots
        self.multiple_roots: Set[Tuple[float, float]] = set()

    @abstractmethod
    def evaluate(self, t: float, x: float, guess: Guess = None) -> UVWState:
        pass

    def jet(self, t: float, x: float, guess: Guess = None) -> UVWJet:
        """Central-difference jet; families with closed forms override it."""
        if guess is None:
            return fd_jet(self.evaluate, t, x, self.fd_step)
        anchor = self.evaluate(t, x, guess)
        hint = self.guess_from(anchor)
        return fd_jet(lambda tt, xx: self.evaluate(tt, xx, hint), t, x,
                      self.fd_step)

    def fd_jet(self, t: float, x: float, guess: Guess = None) -> UVWJet:
        return ExactSolution.jet(self, t, x, guess)

    def riemann_jet(self, t: float, x: float, guess: Guess = None) -> JetPoint:
        return to_riemann_jet(self.jet(t, x, guess))

    def guess_from(self, state: UVWState) -> Guess:
        """Newton guess reproducing `state`, used for continuation."""
        return None

    def describe(self) -> Dict:
        return {'family': self.FAMILY, 'W': self.W.describe()}
