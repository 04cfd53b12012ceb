# Fil for å definere konstanter som går igjen over hele prosjektet

import math

class Backend:
    pure = 'pure'
    density = 'density'

class Kommando:
    trace = 'trace'
    spectrum = 'spectrum'
    critical = 'critical'
    sizeScan = 'size-scan'
    heatmap = 'heatmap'

alleKommandoer = [Kommando.trace, Kommando.spectrum, Kommando.critical, Kommando.sizeScan, Kommando.heatmap]

class Evolusjon:
    'Backend navnene slik de skrives på kommandolinja'
    exact = 'exact'
    trajectory = 'trajectory'

alleEvolusjoner = [Evolusjon.exact, Evolusjon.trajectory]

# Kapasitet per backend. 2^24 complex ≈ 256 MB, 4^12 complex ≈ 268 MB
backendCap = {
    Backend.pure: 24,
    Backend.density: 12,
}

# Floquet protokollen
defaultJMin = math.pi / 4
defaultJMax = 3 * math.pi / 4
defaultSteps = 50
defaultRealizations = 200
defaultEpsMin, defaultEpsMax, defaultEpsPoints = 0.0, 0.5, 26
defaultPMin, defaultPMax, defaultPPoints = 0.0, 0.1, 6
defaultBatches = 20
defaultTrajectories = 99
'Antall Z-gate konfigurasjoner per realisering, samme som i eksperimentet'
defaultNList = (6, 8, 10)
'Kjedelengdene til size-scan når --n-list ikke er oppgitt'

# Smoothing spline og peak
splineMinPoints = 4
gcvLambdaMin, gcvLambdaMax, gcvLambdaPoints = 1e-8, 1e2, 25
'λ griddet er logaritmisk, og skaleres med (max x - min x)^3'
peakGridPoints = 1000

# Toleranser
normTolerance = 1e-10
magnetizationTolerance = 1e-9

# Seed derivation, SplitMix64 sin finalizer. Disse konstantene må aldri endres,
# ellers reproduseres ingen gamle kjøringer.
mask64 = 2**64 - 1
mixGamma = 0x9E3779B97F4A7C15
mixMultiplier1 = 0xBF58476D1CE4E5B9
mixMultiplier2 = 0x94D049BB133111EB

class Formål:
    'Purpose tags, første ord i indekstuppelen til SeedDerivation'
    disorder = 1
    noise = 2

# Output
floatFormat = '.12g'
