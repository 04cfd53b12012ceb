import logging

import django
import numpy as np
import scipy
from django import forms
from django.core.management.base import BaseCommand, CommandError

import mydtc
from mydtc import consts
from mydtc.forms import feltTilFlag, parseConfig
from mydtc.utils.criticalityUtils import (
    batchedPeakEstimate, heatmapSweep, ridgeEstimates, shiftSignificance, sizeScan, varianceCurve
)
from mydtc.utils.downloadUtils import OutputFiles
from mydtc.utils.floquetUtils import FloquetParams, evolveExact, sampleDisorder, trajectoryAverage
from mydtc.utils.seedUtils import SeedDerivation
from mydtc.utils.spectralUtils import dftSpectrum, orderParameter
from mydtc.utils.splineUtils import SplineError
from mydtc.utils.stateUtils import CapacityError

logger = logging.getLogger(__name__)

# Til info: returncode 2 e en feil i konfigurasjonen, 3 e for mange qubits for backenden,
# og 4 e en numerisk feil. Filer som er skrevet når kjøringen feiler slettes.

class Command(BaseCommand):
    help = 'Simulere DTC Floquet kretsen med dephasing, og analysere variansen til ordensparameteren'

    def add_arguments(self, parser):
        parser.add_argument(
            'command',
            nargs='?',
            help='What to run',
            choices=consts.alleKommandoer
        )

        parser.add_argument('--config', help='Flat key=value file, keys spelled like the flags. Flags override it.')

        parser.add_argument('--n', dest='n', help='Number of qubits in the open chain')
        parser.add_argument('--eps', dest='eps', help='Kick perturbation ε for trace and spectrum')
        parser.add_argument('--eps-min', dest='epsMin')
        parser.add_argument('--eps-max', dest='epsMax')
        parser.add_argument('--eps-points', dest='epsPoints', help='Points in the ε grid, endpoints included')
        parser.add_argument('--p', dest='p', help='Dephasing probability, comma separated for critical and size-scan')
        parser.add_argument('--p-min', dest='pMin')
        parser.add_argument('--p-max', dest='pMax')
        parser.add_argument('--p-points', dest='pPoints', help='Points in the p grid of heatmap')
        parser.add_argument('--K', dest='K', help='Number of Floquet steps, must be even')
        parser.add_argument('--realizations', dest='realizations', help='Number of disorder realizations')
        parser.add_argument('--j-min', dest='jMin')
        parser.add_argument('--j-max', dest='jMax')
        parser.add_argument('--seed', dest='seed', help='Master seed, 0 to 2^64-1')
        parser.add_argument('--backend', dest='backend', choices=consts.alleEvolusjoner)
        parser.add_argument('--trajectories', dest='trajectories', help='Z-gate configurations per realization with the trajectory backend')
        parser.add_argument('--batches', dest='batches', help='Batches for the peak σ')
        parser.add_argument('--workers', dest='workers')
        parser.add_argument('--out', dest='out', help='Prefix of the output files')
        parser.add_argument('--n-list', dest='nList', help='Chain lengths for size-scan, comma separated')

    def handle(self, *args, **options):
        if options['verbosity'] >= 2:
            logging.getLogger('mydtc').setLevel(logging.INFO)

        flags = {felt: options.get(felt) for felt in feltTilFlag}
        try:
            config = parseConfig(flags, options.get('config'))
        except forms.ValidationError as exception:
            raise CommandError(f'config: {formatValidationError(exception)}', returncode=2) from exception
        except OSError as exception:
            raise CommandError(f'config: {exception}', returncode=2) from exception

        logger.info(f'Running {config.command} with {config.workers} workers, output prefix {config.out}')

        outputs = OutputFiles(config.out)
        try:
            with np.errstate(divide='raise', invalid='raise'):
                summaryLine = run(self, config, outputs)
        except CapacityError as exception:
            outputs.removeAll()
            raise CommandError(f'capacity: {exception}', returncode=3) from exception
        except (SplineError, FloatingPointError, np.linalg.LinAlgError) as exception:
            outputs.removeAll()
            raise CommandError(f'numeric: {exception}', returncode=4) from exception
        except ValueError as exception:
            outputs.removeAll()
            raise CommandError(f'config: {exception}', returncode=2) from exception
        except BaseException:
            outputs.removeAll()
            raise

        self.stdout.write(summaryLine)


def formatValidationError(exception):
    if hasattr(exception, 'error_dict'):
        return '; '.join(f'{key}: {" ".join(messages)}' for key, messages in exception.message_dict.items())
    return ' '.join(exception.messages)


def versions():
    return {
        'mydtc': mydtc.__version__,
        'django': django.get_version(),
        'numpy': np.__version__,
        'scipy': scipy.__version__,
    }


def summaryBase(config):
    return {
        'command': config.command,
        'config': config.toDict(),
        'overridden': config.overridden,
        'seed': config.seed,
        'backend': config.backend,
        'versions': versions(),
    }


def simulateTrace(config):
    'Tracen til disorder realisering 0'
    couplings = sampleDisorder(config.disorder, 0, config.n)
    params = FloquetParams(n=config.n, eps=config.eps, couplings=couplings, p=config.p[0], steps=config.K)
    if config.backend == consts.Evolusjon.exact:
        return evolveExact(params)
    return trajectoryAverage(params, config.trajectories, SeedDerivation(config.seed, consts.Formål.noise))


def writeTrace(outputs, trace):
    k = range(1, trace.steps + 1)
    if trace.stderr is None:
        return outputs.writeCsv('trace.csv', ['k', 'm_k'], zip(k, trace.values))
    return outputs.writeCsv('trace.csv', ['k', 'm_k', 'stderr'], zip(k, trace.values, trace.stderr))


def trace(self, config, outputs):
    magnetization = simulateTrace(config)
    path = writeTrace(outputs, magnetization)
    h = orderParameter(magnetization).h

    summary = summaryBase(config)
    summary['results'] = {'h': h}
    outputs.writeJson('summary.json', summary)
    return f'h={h:.3f} trace={path}'


def spectrum(self, config, outputs):
    magnetization = simulateTrace(config)
    writeTrace(outputs, magnetization)
    result = dftSpectrum(magnetization)
    path = outputs.writeCsv('spectrum.csv', ['freq_over_omega0', 'amplitude'], zip(result.frequencies, result.amplitudes))
    h = orderParameter(magnetization).h

    summary = summaryBase(config)
    summary['results'] = {'h': h, 'peakFrequency': result.frequencies[int(np.argmax(result.amplitudes[1:])) + 1]}
    outputs.writeJson('summary.json', summary)
    return f'h={h:.3f} spectrum={path}'


def formatPeak(estimate):
    text = f'{estimate.mean:.3f} ± {estimate.sigma:.3f}'
    if estimate.boundary:
        text += ' (boundary)'
    return text


def critical(self, config, outputs):
    epsGrid = config.epsGrid
    rows, results, estimates = [], [], []
    for pIndex, p in enumerate(config.p):
        curve = varianceCurve(
            config.n, epsGrid, p, config.disorder, config.K, backend=config.backend,
            trajectories=config.trajectories, workers=config.workers, pIndex=pIndex
        )
        estimate = batchedPeakEstimate(curve.samples, curve.epsGrid, config.batches)
        estimates.append(estimate)

        rows.extend(zip([p] * len(epsGrid), curve.epsGrid, curve.variances, curve.sampleCounts))
        result = {'p': p, **estimate.toDict()}
        if pIndex > 0:
            result['shift'] = shiftSignificance(estimates[0], estimate)
        results.append(result)

    outputs.writeCsv('variance.csv', ['p', 'eps', 'variance', 'count'], rows)

    summary = summaryBase(config)
    summary['grids'] = {'eps': epsGrid, 'p': config.p}
    summary['results'] = results
    outputs.writeJson('summary.json', summary)
    return '; '.join(f'p={p:g}: peak {formatPeak(e)}' for p, e in zip(config.p, estimates))


def sizeScanCommand(self, config, outputs):
    rows = sizeScan(
        config.nList, config.epsGrid, config.p, config.disorder, config.K, backend=config.backend,
        trajectories=config.trajectories, batchCount=config.batches, workers=config.workers
    )
    outputs.writeCsv('sizescan.csv', ['n', 'p', 'peak_mean', 'peak_sigma'], [
        (row.n, row.p, row.estimate.mean, row.estimate.sigma) for row in rows
    ])

    summary = summaryBase(config)
    summary['grids'] = {'eps': config.epsGrid, 'p': config.p, 'n': config.nList}
    summary['results'] = [{'n': row.n, 'p': row.p, **row.estimate.toDict()} for row in rows]
    outputs.writeJson('summary.json', summary)
    return '; '.join(f'n={row.n} p={row.p:g}: peak {formatPeak(row.estimate)}' for row in rows)


def heatmap(self, config, outputs):
    grid = heatmapSweep(config.epsGrid, config.pGrid, config.disorder, config.n, config.K, workers=config.workers)
    outputs.writeCsv('heatmap.csv', ['p', 'eps', 'variance'], [
        (p, eps, grid.variance[i, j])
        for i, p in enumerate(grid.pGrid)
        for j, eps in enumerate(grid.epsGrid)
    ])

    ridge = ridgeEstimates(grid, config.batches)
    outputs.writeCsv('ridge.csv', ['p', 'peak', 'peak_mean', 'peak_sigma', 'height', 'boundary'], [
        (p, e.location, e.mean, e.sigma, e.height, e.boundary) for p, e in zip(grid.pGrid, ridge)
    ])

    summary = summaryBase(config)
    summary['grids'] = {'eps': grid.epsGrid, 'p': grid.pGrid}
    summary['results'] = [{'p': p, **e.toDict()} for p, e in zip(grid.pGrid, ridge)]
    outputs.writeJson('summary.json', summary)
    return 'ridge ' + '; '.join(f'p={p:g}: peak {formatPeak(e)}' for p, e in zip(grid.pGrid, ridge))


kommandoFunksjoner = {
    consts.Kommando.trace: trace,
    consts.Kommando.spectrum: spectrum,
    consts.Kommando.critical: critical,
    consts.Kommando.sizeScan: sizeScanCommand,
    consts.Kommando.heatmap: heatmap,
}


def run(self, config, outputs):
    'Kjøre kommandoen i config, skrive filene og returne oppsummeringslinja'
    return kommandoFunksjoner[config.command](self, config, outputs)
