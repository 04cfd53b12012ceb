import math
from dataclasses import dataclass, field

import numpy as np

from mydtc import consts
from mydtc.utils.seedUtils import SeedDerivation
from mydtc.utils.stateUtils import (
    applyDiagonal, applyKick, applyZ, checkCapacity, checkProbability,
    couplingPhases, dephasingFactors, expectationZMean, newZeroState
)

# Floquet modellen: U(T) = Π_q exp(iJ_q Z_q Z_{q+1}) Π_q exp[i(π/2)(1-ε)X_q] på en åpen kjede.
# Perioden T er implisitt, alt indekseres med stegnummer k.


@dataclass(frozen=True)
class FloquetParams:
    n: int
    eps: float
    couplings: tuple
    p: float = 0.0
    steps: int = consts.defaultSteps

    def __post_init__(self):
        object.__setattr__(self, 'couplings', tuple(float(J) for J in self.couplings))
        if self.n < 1:
            raise ValueError(f'n must be at least 1, got {self.n}')
        if len(self.couplings) != self.n - 1:
            raise ValueError(f'Open chain of {self.n} qubits needs {self.n - 1} couplings, got {len(self.couplings)}')
        checkProbability(self.eps, 'eps')
        checkProbability(self.p, 'p')
        if self.steps < 1:
            raise ValueError(f'steps must be at least 1, got {self.steps}')

    def withChanges(self, **changes):
        values = {'n': self.n, 'eps': self.eps, 'couplings': self.couplings, 'p': self.p, 'steps': self.steps}
        values.update(changes)
        return FloquetParams(**values)


@dataclass(frozen=True)
class DisorderSpec:
    'Uniform sampling av koblingene fra [low, high), en stream per realisering'
    count: int
    low: float = consts.defaultJMin
    high: float = consts.defaultJMax
    masterSeed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f'Disorder count must be at least 1, got {self.count}')
        if not self.low < self.high:
            raise ValueError(f'Disorder interval needs low < high, got [{self.low}, {self.high})')


@dataclass(frozen=True, eq=False)
class NoiseConfiguration:
    'θ_q per qubit per periode, hver lik 0 eller π'
    angles: np.ndarray

    def __post_init__(self):
        if not np.all((self.angles == 0) | (self.angles == math.pi)):
            raise ValueError('Noise angles must be 0 or π')

    @classmethod
    def zeros(cls, steps, n):
        return cls(np.zeros((steps, n)))

    def flipped(self, k):
        'Qubitene som får en Z gate etter periode k (0-indeksert)'
        return np.flatnonzero(self.angles[k] == math.pi)


@dataclass
class MagnetizationTrace:
    'm_k for k = 1..K. t=0 er ikke med.'
    values: np.ndarray
    stderr: np.ndarray = field(default=None)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if np.any(np.abs(self.values) > 1 + consts.magnetizationTolerance):
            raise ValueError('Magnetization outside [-1, 1]')

    @property
    def steps(self):
        return len(self.values)

    def __len__(self):
        return len(self.values)


def sampleDisorder(spec, realizationIndex, n):
    '''
    n-1 uavhengige uniforme koblinger fra [low, high). Streamen avhenger bare av
    (master seed, realisering), så samme realisering gir samme koblinger uansett
    worker, rekkefølge og systemstørrelse (en kortere kjede får et prefiks).
    '''
    rng = SeedDerivation(spec.masterSeed, consts.Formål.disorder, realization=realizationIndex).generator()
    return tuple(rng.uniform(spec.low, spec.high, size=n - 1))


def sampleNoise(params, stream):
    'En uavhengig Bernoulli(p) per qubit per periode'
    rng = stream.generator()
    flips = rng.random((params.steps, params.n)) < params.p
    return NoiseConfiguration(np.where(flips, math.pi, 0.0))


def kickLayer(state, eps):
    for q in range(state.n):
        applyKick(state, q, eps)
    return state


def floquetStep(state, params, phases=None):
    '''
    Kick laget på alle qubits, så koblingslaget på alle bindinger q = 0..n-2.
    Koblingslaget e diagonalt og anvendes som en samlet fase, som e det samme som
    applyZZ på hver binding. phases kan gis for å slippe å regne den ut hvert steg.
    '''
    if state.n != params.n:
        raise ValueError(f'State has {state.n} qubits, params expect {params.n}')

    kickLayer(state, params.eps)
    if params.n > 1:
        applyDiagonal(state, couplingPhases(params.n, params.couplings) if phases is None else phases)
    return state


def evolveExact(params):
    '''
    Tetthetsmatrise evolusjon med dephasing kanalen eksakt, ingen sampling.
    Uten dephasing forblir ρ = |ψ⟩⟨ψ| ren, og tilstandsvektoren gir samme trace for 2^n i stedet for 4^n.

    Koblingslaget og dephasing laget e begge elementvise på ρ, så de slås sammen til en
    matrise som ganges på etter kick laget. Det e floquetStep fulgt av applyDephasingLayer.
    '''
    checkCapacity(params.n, consts.Backend.density)
    if params.p == 0:
        return evolvePure(params)

    rho = newZeroState(params.n, consts.Backend.density)
    layer = dephasingFactors(params.n, params.p)
    if params.n > 1:
        phases = couplingPhases(params.n, params.couplings)
        layer = layer * np.outer(phases, phases.conj())

    values = np.empty(params.steps)
    for k in range(params.steps):
        kickLayer(rho, params.eps)
        rho.entries *= layer
        values[k] = expectationZMean(rho)
    return MagnetizationTrace(values)


def evolvePure(params):
    'Lukket system, samme som en trajectory uten Z gates'
    return evolveTrajectory(params, NoiseConfiguration.zeros(params.steps, params.n))


def evolveTrajectory(params, noise):
    'En trajectory: Z gates etter hvert Floquet steg der θ er π, som en enkelt krets på maskinen'
    checkCapacity(params.n, consts.Backend.pure)
    if noise.angles.shape != (params.steps, params.n):
        raise ValueError(f'Noise configuration has shape {noise.angles.shape}, expected {(params.steps, params.n)}')

    psi = newZeroState(params.n, consts.Backend.pure)
    phases = couplingPhases(params.n, params.couplings) if params.n > 1 else None

    values = np.empty(params.steps)
    for k in range(params.steps):
        floquetStep(psi, params, phases=phases)
        for q in noise.flipped(k):
            applyZ(psi, q)
        values[k] = expectationZMean(psi)
    return MagnetizationTrace(values)


def trajectoryAverage(params, trajectoryCount, stream):
    '''
    Gjennomsnitt over trajectoryCount samplede Z-gate konfigurasjoner, med standard error per steg.
    Trajectory t bruker stream.withTrajectory(t), så resultatet e deterministisk gitt seed og indekser.
    '''
    if trajectoryCount < 1:
        raise ValueError(f'trajectoryCount must be at least 1, got {trajectoryCount}')

    traces = np.empty((trajectoryCount, params.steps))
    for t in range(trajectoryCount):
        noise = sampleNoise(params, stream.withTrajectory(t))
        traces[t] = evolveTrajectory(params, noise).values

    if trajectoryCount == 1:
        stderr = np.zeros(params.steps)
    else:
        stderr = traces.std(axis=0, ddof=1) / math.sqrt(trajectoryCount)
    return MagnetizationTrace(traces.mean(axis=0), stderr=stderr)
