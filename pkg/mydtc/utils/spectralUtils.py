from dataclasses import dataclass

import numpy as np

# Fourier analyse av magnetiseringen. Tracen starter på k=1, og normaliseringen 1/K
# gjør at en perfekt DTC gir h=1 uansett K.


@dataclass
class Spectrum:
    'Frekvensene lagres som j/K, altså i enheter av drivfrekvensen ω₀'
    frequencies: np.ndarray
    amplitudes: np.ndarray


@dataclass(frozen=True)
class OrderParameter:
    h: float

    def __float__(self):
        return self.h


def _traceValues(trace):
    return np.asarray(getattr(trace, 'values', trace), dtype=np.float64)


def _subharmonicAmplitude(values):
    '|(1/K) Σ_k (-1)^k m_k|, som er j=K/2 binnen siden e^{-iπk} = (-1)^k'
    signs = np.where(np.arange(1, len(values) + 1) % 2 == 0, 1.0, -1.0)
    return abs(float(np.dot(signs, values))) / len(values)


def dftSpectrum(trace):
    '''
    Amplituden i bin j er |(1/K) Σ_{k=1..K} m_k e^{-2πijk/K}| for j = 0..K/2, ved direkte summasjon.
    For like K regnes j=K/2 med nøyaktig samme aritmetikk som orderParameter.
    '''
    values = _traceValues(trace)
    K = len(values)
    if K < 2:
        raise ValueError(f'A spectrum needs at least 2 steps, got K={K}')

    j = np.arange(K // 2 + 1)
    k = np.arange(1, K + 1)
    # jk mod K holder argumentan små, så fasene blir like presise for alle bins
    phases = np.exp(-2j * np.pi * (np.outer(j, k) % K) / K)
    amplitudes = np.abs(phases @ values) / K

    if K % 2 == 0:
        amplitudes[K // 2] = _subharmonicAmplitude(values)
    return Spectrum(frequencies=j / K, amplitudes=amplitudes)


def orderParameter(trace):
    'Amplituden ved ω = ω₀/2. Krever like K så ω₀/2 ligger på DFT griddet.'
    values = _traceValues(trace)
    K = len(values)
    if K < 2 or K % 2:
        raise ValueError(f'The order parameter needs an even number of steps K >= 2 so that ω₀/2 lies on the DFT grid, got K={K}')
    return OrderParameter(_subharmonicAmplitude(values))
