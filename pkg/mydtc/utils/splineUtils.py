import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.interpolate import CubicSpline

from mydtc import consts

logger = logging.getLogger(__name__)

# Naturlig kubisk smoothing spline på Reinsch form, og peak estimering på den.
#
# Splinen minimerer Σ_i (y_i - f(x_i))² + λ∫f''². Løsningen e den naturlige kubiske splinen
# gjennom de tilpassede verdiene g, der
#     (R + λQᵀQ)γ = Qᵀy,   g = y - λQγ
# og γ e andrederiverte i de indre knutene. Q og R e de vanlige tridiagonale båndmatrisene.


class SplineError(ArithmeticError):
    'Raises når splinen ikke kan tilpasses'


class SmoothingSpline:
    'En tilpasset spline som kan evalueres som en funksjon'

    def __init__(self, x, y, fitted, lam, gcv=None, edf=None):
        self.x = x
        self.y = y
        self.fitted = fitted
        self.lam = lam
        self.gcv = gcv
        self.edf = edf
        'Effektive frihetsgrader, tr(A) der A er hat matrisen'
        self.spline = CubicSpline(x, fitted, bc_type='natural')

    def __call__(self, x):
        return self.spline(x)

    def residuals(self):
        return self.y - self.fitted

    def __repr__(self):
        return f'SmoothingSpline(points={len(self.x)}, lam={self.lam:.3g})'


def _checkData(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise SplineError(f'x and y must be 1-d and of equal length, got {x.shape} and {y.shape}')
    if len(x) < consts.splineMinPoints:
        raise SplineError(f'A smoothing spline needs at least {consts.splineMinPoints} points, got {len(x)}')
    if not np.all(np.diff(x) > 0):
        raise SplineError('x must be strictly increasing')
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise SplineError('x and y must be finite')
    return x, y


def _bandMatrices(x):
    'Q (m x m-2) og R (m-2 x m-2) slik at ∫f\'\'² = γᵀRγ og Qᵀg = Rγ'
    h = np.diff(x)
    m = len(x)
    Q = np.zeros((m, m - 2))
    R = np.zeros((m - 2, m - 2))
    for j in range(1, m - 1):
        Q[j - 1, j - 1] = 1 / h[j - 1]
        Q[j, j - 1] = -1 / h[j - 1] - 1 / h[j]
        Q[j + 1, j - 1] = 1 / h[j]
        R[j - 1, j - 1] = (h[j - 1] + h[j]) / 3
        if j < m - 2:
            R[j - 1, j] = R[j, j - 1] = h[j] / 6
    return Q, R


def _fitFixed(x, y, Q, R, lam):
    'Returne (tilpassede verdier, effektive frihetsgrader, GCV score) for en gitt λ'
    m = len(x)
    QtQ = Q.T @ Q
    system = R + lam * QtQ
    try:
        gamma = linalg.solve(system, Q.T @ y, assume_a='pos')
        edf = m - lam * np.trace(linalg.solve(system, QtQ, assume_a='pos'))
    except (linalg.LinAlgError, ValueError) as exception:
        raise SplineError(f'Spline system is singular for lam={lam:.3g}') from exception

    fitted = y - lam * (Q @ gamma)
    rss = float(np.sum((y - fitted)**2))
    if m - edf <= 0:
        gcv = math.inf
    else:
        gcv = m * rss / (m - edf)**2
    return fitted, edf, gcv


def lambdaGrid(x):
    'Logaritmisk grid over [1e-8, 1e2] ganger (max x - min x)^3, som e enheten til λ'
    scale = (x[-1] - x[0])**3
    return np.logspace(math.log10(consts.gcvLambdaMin), math.log10(consts.gcvLambdaMax), consts.gcvLambdaPoints) * scale


def fitSmoothingSpline(x, y, lam='auto'):
    '''
    Tilpasse en naturlig kubisk smoothing spline. lam='auto' velger λ med generalized cross
    validation, GCV(λ) = m·RSS / (m - tr A)², over lambdaGrid. Ved lik score vinner den minste λ.
    '''
    x, y = _checkData(x, y)
    Q, R = _bandMatrices(x)

    if lam is None or lam == 'auto':
        best = None
        for candidate in lambdaGrid(x):
            fitted, edf, gcv = _fitFixed(x, y, Q, R, candidate)
            if best is None or gcv < best[3]:
                best = (candidate, fitted, edf, gcv)
        lam, fitted, edf, gcv = best
    else:
        if lam < 0 or not math.isfinite(lam):
            raise SplineError(f'lam must be a finite nonnegative number, got {lam}')
        fitted, edf, gcv = _fitFixed(x, y, Q, R, lam)

    return SmoothingSpline(x, y, fitted, lam, gcv=gcv, edf=edf)


@dataclass(frozen=True)
class PeakLocation:
    location: float
    height: float
    boundary: bool = False
    lam: float = None


def estimatePeak(x, y, lam='auto'):
    '''
    Tilpasse splinen, evaluere den på et tett grid og ta argmax. En indre argmax forfines med
    en parabel gjennom den og naboan. Havner argmax på randen flagges det heller enn å ekstrapolere.
    '''
    spline = fitSmoothingSpline(x, y, lam=lam)
    grid = np.linspace(spline.x[0], spline.x[-1], consts.peakGridPoints)
    values = spline(grid)
    i = int(np.argmax(values))

    if i == 0 or i == len(grid) - 1:
        logger.warning(f'Variance peak on the boundary of the grid at {grid[i]:.4g}')
        return PeakLocation(float(grid[i]), float(values[i]), boundary=True, lam=spline.lam)

    y0, y1, y2 = values[i - 1], values[i], values[i + 1]
    curvature = y0 - 2 * y1 + y2
    location = grid[i]
    if curvature < 0:
        location += 0.5 * (y0 - y2) / curvature * (grid[1] - grid[0])
    return PeakLocation(float(location), float(spline(location)), boundary=False, lam=spline.lam)
