from dataclasses import dataclass

import numpy as np

from mydtc import consts

# For å derivere deterministiske random streams per task

def mix64(value):
    '''
    SplitMix64 sin finalizer. Gitt de samme 64 bitan inn gir denne de samme 64 bitan ut på
    alle plattformer, og en endra inputbit flipper i snitt halvparten av outputbitan.
    '''
    z = (value + consts.mixGamma) & consts.mask64
    z = ((z ^ (z >> 30)) * consts.mixMultiplier1) & consts.mask64
    z = ((z ^ (z >> 27)) * consts.mixMultiplier2) & consts.mask64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SeedDerivation:
    '''
    En seed som er en ren funksjon av master seeden og indekstuppelen
    (formål, realisering, eps indeks, p indeks, trajectory indeks).

    Ordan mixes inn etter tur: h = mix64(master), så h = mix64(h XOR ord) for hvert ord.
    Seeden brukes så til en numpy PCG64 generator, som gir de samme tallan på alle plattformer.
    '''
    masterSeed: int
    purpose: int
    realization: int = 0
    epsIndex: int = 0
    pIndex: int = 0
    trajectory: int = 0

    @property
    def words(self):
        return (self.purpose, self.realization, self.epsIndex, self.pIndex, self.trajectory)

    @property
    def seed(self):
        h = mix64(self.masterSeed & consts.mask64)
        for word in self.words:
            h = mix64(h ^ (word & consts.mask64))
        return h

    def generator(self):
        return np.random.Generator(np.random.PCG64(self.seed))

    def withTrajectory(self, trajectory):
        return SeedDerivation(self.masterSeed, self.purpose, self.realization, self.epsIndex, self.pIndex, trajectory)
