import math
from functools import lru_cache

import numpy as np

from mydtc import consts

# Tilstander og kernels som alt annet bygge på.
#
# Bit q i basisindeksen e verdien til qubit q, altså |q_{n-1} ... q_1 q_0⟩ har indeks
# Σ q_j 2^j. Alle kernels jobbe på views der bit q e en egen akse av lengde 2, så vi
# slepp å iterere over bit-par i python.


class CapacityError(ValueError):
    'Raises når antall qubits er utenfor det backenden har plass til.'


class PureState:
    '''
    Tilstandsvektor med 2^n complex amplituder (trajectory backenden).
    Kernels muterer amplitudes in place, så en tilstand skal bare eies av en worker om gangen.
    '''
    backend = consts.Backend.pure

    def __init__(self, n, amplitudes):
        self.n = n
        self.amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (2**n,):
            raise ValueError(f'PureState with n={n} needs {2**n} amplitudes, got shape {self.amplitudes.shape}')

    @property
    def dimension(self):
        return 2**self.n

    def probabilities(self):
        return np.abs(self.amplitudes)**2

    def norm(self):
        return float(np.sum(self.probabilities()))

    def __repr__(self):
        return f'PureState(n={self.n})'


class DensityMatrix:
    '''
    Tetthetsmatrise med 2^n x 2^n complex entries, row-major med samme bit-konvensjon som PureState.
    Trace, hermitisitet og positivitet sjekkes bare i testan, ikke per steg.
    '''
    backend = consts.Backend.density

    def __init__(self, n, entries):
        self.n = n
        self.entries = np.ascontiguousarray(entries, dtype=np.complex128)
        if self.entries.shape != (2**n, 2**n):
            raise ValueError(f'DensityMatrix with n={n} needs shape {(2**n, 2**n)}, got {self.entries.shape}')

    @property
    def dimension(self):
        return 2**self.n

    def probabilities(self):
        return self.entries.diagonal().real

    def trace(self):
        return complex(np.trace(self.entries))

    def __repr__(self):
        return f'DensityMatrix(n={self.n})'


def checkCapacity(n, backend):
    cap = consts.backendCap[backend]
    if not 1 <= n <= cap:
        raise CapacityError(f'The {backend} backend supports 1 to {cap} qubits, got n={n}')


def newZeroState(n, backend=consts.Backend.pure):
    'Lage |0⟩^⊗n i ønsket backend'
    if backend not in consts.backendCap:
        raise ValueError(f'Unknown backend {backend!r}')
    checkCapacity(n, backend)

    if backend == consts.Backend.pure:
        amplitudes = np.zeros(2**n, dtype=np.complex128)
        amplitudes[0] = 1
        return PureState(n, amplitudes)

    entries = np.zeros((2**n, 2**n), dtype=np.complex128)
    entries[0, 0] = 1
    return DensityMatrix(n, entries)


def checkQubit(state, q, bond=False):
    'Bond=True betyr at q indekserer bindingen (q, q+1), med åpen rand'
    limit = state.n - 1 if bond else state.n
    if not 0 <= q < limit:
        raise IndexError(f'{"Bond" if bond else "Qubit"} index {q} out of range for n={state.n}')


def checkProbability(p, name='p'):
    if not 0 <= p <= 1:
        raise ValueError(f'{name} must lie in [0, 1], got {p}')


def checkAngle(value, name='angle'):
    if not math.isfinite(value):
        raise ValueError(f'{name} must be finite, got {value}')


def bitView(array, shape):
    '''
    Returne et view av array med ny shape. I motsetning til reshape raiser denne heller enn å kopiere,
    så in place oppdateringer aldri forsvinn i en kopi.
    '''
    view = array.view()
    view.shape = shape
    return view


def _applyToAxis(view, matrix):
    '''
    view har shape (A, 2, B), matrix (2x2) virker på den midterste aksen, in place.
    tensordot gir (2, A, B) i en BLAS kall, og skrives tilbake i en enkelt pass.
    '''
    view[...] = np.moveaxis(np.tensordot(matrix, view, axes=([1], [1])), 0, 1)


def applySingleQubit(state, q, matrix):
    '''
    Anvende en 2x2 unitær på qubit q. Density backenden konjugere begge sider, altså ρ -> UρU†.
    '''
    checkQubit(state, q)
    matrix = np.asarray(matrix, dtype=np.complex128)
    n, dim = state.n, state.dimension
    outer, inner = 2**(n - 1 - q), 2**q

    if state.backend == consts.Backend.pure:
        _applyToAxis(bitView(state.amplitudes, (outer, 2, inner)), matrix)
    else:
        # Radene: U ρ
        _applyToAxis(bitView(state.entries, (outer, 2, inner * dim)), matrix)
        # Kolonnene: ρ U†, der (ρU†)[r, c] = Σ ρ[r, c'] conj(U[c, c'])
        _applyToAxis(bitView(state.entries, (dim * outer, 2, inner)), matrix.conj())
    return state


def kickMatrix(eps):
    'exp(iφX) med φ = (π/2)(1-ε), altså [[cos φ, i sin φ], [i sin φ, cos φ]]'
    checkAngle(eps, 'eps')
    phi = math.pi / 2 * (1 - eps)
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=np.complex128)


def applyKick(state, q, eps):
    return applySingleQubit(state, q, kickMatrix(eps))


def applyZZ(state, q, J):
    '''
    exp(iJ Z_q Z_{q+1}) anvendt direkte som en diagonal fase, e^{iJ} der bitan er like og e^{-iJ} der de er ulike.
    Density backenden ganger med fasen på radene og den konjugerte fasen på kolonnene.
    '''
    checkQubit(state, q, bond=True)
    checkAngle(J, 'J')
    n, dim = state.n, state.dimension
    outer, inner = 2**(n - 2 - q), 2**q
    like, ulike = complex(math.cos(J), math.sin(J)), complex(math.cos(J), -math.sin(J))

    def multiply(view, like, ulike):
        # Aksene e (resten, bit q+1, bit q, resten)
        view[:, 0, 0, :] *= like
        view[:, 1, 1, :] *= like
        view[:, 0, 1, :] *= ulike
        view[:, 1, 0, :] *= ulike

    if state.backend == consts.Backend.pure:
        multiply(bitView(state.amplitudes, (outer, 2, 2, inner)), like, ulike)
    else:
        multiply(bitView(state.entries, (outer, 2, 2, inner * dim)), like, ulike)
        multiply(bitView(state.entries, (dim * outer, 2, 2, inner)), ulike, like)
    return state


def applyZ(state, q):
    'Negere amplitudene der bit q er satt. For density backenden blir det ZρZ.'
    checkQubit(state, q)
    n, dim = state.n, state.dimension
    outer, inner = 2**(n - 1 - q), 2**q

    if state.backend == consts.Backend.pure:
        bitView(state.amplitudes, (outer, 2, inner))[:, 1, :] *= -1
    else:
        bitView(state.entries, (outer, 2, inner * dim))[:, 1, :] *= -1
        bitView(state.entries, (dim * outer, 2, inner))[:, 1, :] *= -1
    return state


def applyDephasingExact(rho, q, p):
    '''
    Kanalen E_q(ρ) = (1-p)ρ + pZ_qρZ_q. Algebraisk det samme som å gange alle entries der
    bit q er ulik i rad og kolonne med (1-2p), og la resten vær. Diagonalen røres aldri.
    '''
    if rho.backend != consts.Backend.density:
        raise TypeError('Exact dephasing needs the density backend')
    checkQubit(rho, q)
    checkProbability(p)
    outer, inner = 2**(rho.n - 1 - q), 2**q

    view = bitView(rho.entries, (outer, 2, inner, outer, 2, inner))
    view[:, 0, :, :, 1, :] *= 1 - 2 * p
    view[:, 1, :, :, 0, :] *= 1 - 2 * p
    return rho


def expectationZ(state, q):
    'Σ ±P(basis), + når bit q er 0. Deterministisk, ingen sampling.'
    checkQubit(state, q)
    probabilities = bitView(np.ascontiguousarray(state.probabilities()), (2**(state.n - 1 - q), 2, 2**q))
    return float(np.sum(probabilities[:, 0, :]) - np.sum(probabilities[:, 1, :]))


def expectationZMean(state):
    'Gjennomsnittet av ⟨Z_q⟩ over alle qubits'
    return float(np.dot(state.probabilities(), magnetizationProfile(state.n)))


# Cachede tabeller. Disse e read-only og deles mellom workers.

@lru_cache(maxsize=None)
def bitCount(n):
    'popcount for alle indekser 0..2^n-1, bygd ved å doble tabellen en bit om gangen'
    counts = np.zeros(1, dtype=np.int8)
    for _ in range(n):
        counts = np.concatenate([counts, counts + 1])
    counts.setflags(write=False)
    return counts


@lru_cache(maxsize=None)
def magnetizationProfile(n):
    'Σ_q z_q(x) / n for hver basisindeks x'
    profile = (n - 2 * bitCount(n).astype(np.float64)) / n
    profile.setflags(write=False)
    return profile


@lru_cache(maxsize=2)
def hammingDistances(n):
    'popcount(r XOR c) for alle par, brukt av dephasing laget'
    indices = np.arange(2**n)
    distances = bitCount(n)[np.bitwise_xor.outer(indices, indices)]
    distances.setflags(write=False)
    return distances


def couplingPhases(n, couplings):
    'e^{iE(x)} med E(x) = Σ_q J_q z_q z_{q+1}, altså hele koblingslaget som en diagonal'
    if len(couplings) != n - 1:
        raise ValueError(f'Expected {n - 1} couplings for n={n}, got {len(couplings)}')
    indices = np.arange(2**n)
    energy = np.zeros(2**n)
    for q, J in enumerate(couplings):
        checkAngle(J, 'J')
        ulike = ((indices >> q) ^ (indices >> (q + 1))) & 1
        energy += J * (1 - 2 * ulike)
    return np.exp(1j * energy)


def applyDiagonal(state, phases):
    'Gange med en diagonal unitær, density backenden på begge sider'
    if state.backend == consts.Backend.pure:
        state.amplitudes *= phases
    else:
        state.entries *= phases[:, np.newaxis]
        state.entries *= phases.conj()[np.newaxis, :]
    return state


def dephasingFactors(n, p):
    '(1-2p)^popcount(r XOR c), altså E_q for alle q på en gang'
    checkProbability(p)
    return (1 - 2 * p) ** hammingDistances(n)


def applyDephasingLayer(rho, p, factors=None):
    '''
    Dephasing på alle qubits. Tilsvare applyDephasingExact på hver qubit etter tur,
    men i en enkelt pass. factors kan gis for å slippe å regne dem ut hvert steg.
    '''
    if rho.backend != consts.Backend.density:
        raise TypeError('Exact dephasing needs the density backend')
    if p == 0:
        return rho
    rho.entries *= dephasingFactors(rho.n, p) if factors is None else factors
    return rho
