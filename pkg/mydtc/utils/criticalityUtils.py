import logging
import math
from dataclasses import dataclass, field

import numpy as np

from mydtc import consts
from mydtc.utils.floquetUtils import FloquetParams, evolveExact, sampleDisorder, trajectoryAverage
from mydtc.utils.seedUtils import SeedDerivation
from mydtc.utils.spectralUtils import orderParameter
from mydtc.utils.splineUtils import estimatePeak
from mydtc.utils.stateUtils import checkCapacity
from mydtc.utils.threadUtils import mapTasks

logger = logging.getLogger(__name__)

# Statistikk over disorder ensemblet: Var[h] over ε, peak estimering med batches,
# størrelsesskann og (ε, p) heatmap. Alle sweeps bruker det samme ensemblet for
# alle gridpunkt (common random numbers), realisering r har alltid de samme koblingene.


@dataclass
class VarianceCurve:
    epsGrid: np.ndarray
    variances: np.ndarray
    sampleCounts: np.ndarray
    p: float = 0.0
    samples: np.ndarray = field(default=None, repr=False)
    'De rå h verdiene med shape (realiseringer, len(epsGrid)), beholdt for batching'


@dataclass
class PeakEstimate:
    location: float
    'Peaken til variansen over hele ensemblet'
    batchLocations: np.ndarray
    mean: float
    sigma: float
    height: float
    boundary: bool = False
    singleBatch: bool = False

    @property
    def oneSigmaBand(self):
        return (self.mean - self.sigma, self.mean + self.sigma)

    @property
    def twoSigmaBand(self):
        return (self.mean - 2 * self.sigma, self.mean + 2 * self.sigma)

    def toDict(self):
        return {
            'location': self.location,
            'height': self.height,
            'boundary': self.boundary,
            'mean': self.mean,
            'sigma': self.sigma,
            'oneSigmaBand': list(self.oneSigmaBand),
            'twoSigmaBand': list(self.twoSigmaBand),
            'singleBatch': self.singleBatch,
            'batchLocations': [float(b) for b in self.batchLocations],
        }


@dataclass
class HeatmapGrid:
    epsGrid: np.ndarray
    pGrid: np.ndarray
    variance: np.ndarray
    'Indeksert (p, ε)'
    curves: list = field(default_factory=list, repr=False)


@dataclass
class SizeScanRow:
    n: int
    p: float
    estimate: PeakEstimate


def checkGrid(grid, name):
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or len(grid) == 0:
        raise ValueError(f'{name} must be a non-empty 1-d grid')
    if not np.all(np.diff(grid) > 0):
        raise ValueError(f'{name} must be strictly increasing')
    return grid


def evolutionBackend(backend):
    'Hvilken tilstandsbackend en evolusjon bruker, for kapasitetssjekken'
    if backend == consts.Evolusjon.exact:
        return consts.Backend.density
    if backend == consts.Evolusjon.trajectory:
        return consts.Backend.pure
    raise ValueError(f'Unknown backend {backend!r}, expected one of {consts.alleEvolusjoner}')


def sampleOrderParameter(params, backend=consts.Evolusjon.exact, trajectories=consts.defaultTrajectories, stream=None):
    'h for en realisering ved ett parameterpunkt'
    if backend == consts.Evolusjon.exact:
        trace = evolveExact(params)
    else:
        trace = trajectoryAverage(params, trajectories, stream)
    return orderParameter(trace).h


def varianceCurve(n, epsGrid, p, disorder, steps, backend=consts.Evolusjon.exact, trajectories=consts.defaultTrajectories, workers=1, pIndex=0):
    '''
    Var[h] over disorder realiseringene for hver ε, med unbiased (count-1) estimator.
    Støyen håndteres av backenden: eksakt kanal (default), eller trajectory gjennomsnitt
    som i eksperimentet. De rå h verdiene ligger i curve.samples.
    '''
    epsGrid = checkGrid(epsGrid, 'eps grid')
    checkCapacity(n, evolutionBackend(backend))
    if disorder.count < 2:
        raise ValueError(f'Variance needs at least 2 disorder realizations, got {disorder.count}')

    couplings = [sampleDisorder(disorder, r, n) for r in range(disorder.count)]

    def task(indices):
        r, e = indices
        params = FloquetParams(n=n, eps=float(epsGrid[e]), couplings=couplings[r], p=p, steps=steps)
        stream = SeedDerivation(disorder.masterSeed, consts.Formål.noise, realization=r, epsIndex=e, pIndex=pIndex)
        return sampleOrderParameter(params, backend, trajectories, stream)

    tasks = [(r, e) for r in range(disorder.count) for e in range(len(epsGrid))]
    results = mapTasks(task, tasks, workers=workers, label=f'variance n={n} p={p:g}')

    samples = np.array(results).reshape(disorder.count, len(epsGrid))
    return VarianceCurve(
        epsGrid=epsGrid,
        variances=samples.var(axis=0, ddof=1),
        sampleCounts=np.full(len(epsGrid), disorder.count),
        p=p,
        samples=samples
    )


def batchSlices(count, batchCount):
    'Sammenhengende batches, resten fordeles en per batch forfra'
    base, extra = divmod(count, batchCount)
    slices, start = [], 0
    for b in range(batchCount):
        size = base + (1 if b < extra else 0)
        slices.append(slice(start, start + size))
        start += size
    return slices


def batchedPeakEstimate(samples, epsGrid, batchCount=consts.defaultBatches):
    '''
    Dele realiseringene i batchCount batches, regne ut variansen per ε og peaken per batch,
    og rapportere snitt og standardavvik av batch-peakene. Med en batch er σ udefinert og
    rapporteres som 0 med singleBatch flagget.
    '''
    samples = np.asarray(samples, dtype=np.float64)
    epsGrid = checkGrid(epsGrid, 'eps grid')
    if batchCount < 1:
        raise ValueError(f'batchCount must be at least 1, got {batchCount}')
    if samples.shape[0] < 2 * batchCount:
        raise ValueError(f'{batchCount} batches need at least {2 * batchCount} realizations, got {samples.shape[0]}')

    batchLocations = np.array([
        estimatePeak(epsGrid, samples[batch].var(axis=0, ddof=1)).location
        for batch in batchSlices(samples.shape[0], batchCount)
    ])

    full = estimatePeak(epsGrid, samples.var(axis=0, ddof=1))

    singleBatch = batchCount == 1
    if singleBatch:
        logger.warning('Single batch, peak sigma reported as 0')

    return PeakEstimate(
        location=full.location,
        batchLocations=batchLocations,
        mean=float(batchLocations.mean()),
        sigma=0.0 if singleBatch else float(batchLocations.std(ddof=1)),
        height=full.height,
        boundary=full.boundary,
        singleBatch=singleBatch
    )


def shiftSignificance(reference, other):
    'Forskjellen i batch-snitt, og hvor mange poolede σ den utgjør'
    shift = other.mean - reference.mean
    pooled = math.sqrt((reference.sigma**2 + other.sigma**2) / 2)
    return {
        'shift': shift,
        'pooledSigma': pooled,
        'separation': abs(shift) / pooled if pooled > 0 else math.inf if shift else 0.0,
    }


def sizeScan(nList, epsGrid, pList, disorder, steps, backend=consts.Evolusjon.exact, trajectories=consts.defaultTrajectories, batchCount=consts.defaultBatches, workers=1):
    'batchedPeakEstimate per kjedelengde og p. Kortere kjeder bruker et prefiks av de samme koblingene.'
    for n in nList:
        checkCapacity(n, evolutionBackend(backend))

    rows = []
    for n in nList:
        for pIndex, p in enumerate(pList):
            curve = varianceCurve(n, epsGrid, p, disorder, steps, backend=backend, trajectories=trajectories, workers=workers, pIndex=pIndex)
            rows.append(SizeScanRow(n=n, p=p, estimate=batchedPeakEstimate(curve.samples, curve.epsGrid, batchCount)))
    return rows


def heatmapSweep(epsGrid, pGrid, disorder, n, steps, workers=1):
    '''
    Hele (p, ε) variansmatrisen med eksakt backend. Hver rad bruker det samme ensemblet,
    så p=0 raden er bit for bit lik varianceCurve med samme seed.
    '''
    checkCapacity(n, consts.Backend.density)
    pGrid = checkGrid(pGrid, 'p grid')

    curves = [
        varianceCurve(n, epsGrid, float(p), disorder, steps, backend=consts.Evolusjon.exact, workers=workers, pIndex=i)
        for i, p in enumerate(pGrid)
    ]
    return HeatmapGrid(
        epsGrid=curves[0].epsGrid,
        pGrid=pGrid,
        variance=np.array([curve.variances for curve in curves]),
        curves=curves
    )


def ridgeEstimates(grid, batchCount=consts.defaultBatches):
    'PeakEstimate for hver p rad i heatmapet'
    return [batchedPeakEstimate(curve.samples, curve.epsGrid, batchCount) for curve in grid.curves]
