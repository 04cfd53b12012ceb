import math
import time
import unittest

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase

from mydtc import consts
from mydtc.utils.criticalityUtils import (
    PeakEstimate, batchSlices, batchedPeakEstimate, heatmapSweep, ridgeEstimates, shiftSignificance,
    sizeScan, varianceCurve
)
from mydtc.utils.floquetUtils import DisorderSpec
from mydtc.utils.stateUtils import CapacityError
from mydtc.utils.threadUtils import mapTasks


def syntheticSamples(epsGrid, realizations, center=0.3, width=0.06):
    '''
    h verdier der hver kolonne e ±a(ε) annenhver gang. Alle batches av like størrelse får
    da nøyaktig samme varianskurve, med toppen i center.
    '''
    amplitude = np.exp(-(epsGrid - center)**2 / (4 * width**2))
    signs = np.where(np.arange(realizations) % 2 == 0, 1.0, -1.0)
    return signs[:, np.newaxis] * amplitude[np.newaxis, :]


class MapTasksTestCase(SimpleTestCase):
    def testResultatIRekkefølge(self):
        self.assertEqual(mapTasks(lambda x: x * x, range(20), workers=4), [x * x for x in range(20)])
        self.assertEqual(mapTasks(lambda x: x * x, range(20), workers=1), [x * x for x in range(20)])
        self.assertEqual(mapTasks(lambda x: x, [], workers=4), [])

    def testFeilLoggesOgRaises(self):
        def task(x):
            if x == 3:
                raise ValueError('task 3')
            return x

        for workers in [1, 3]:
            with self.assertLogs('mydtc', level='ERROR') as logs, self.assertRaises(ValueError):
                mapTasks(task, range(6), workers=workers)
            self.assertIn('Task 3', logs.output[0])

    def testErrstateGjelderIWorkers(self):
        def task(x):
            return float(np.divide(1.0, np.zeros(1))[0])

        for workers in [1, 3]:
            with np.errstate(divide='raise'), self.assertLogs('mydtc', level='ERROR'), self.assertRaises(FloatingPointError):
                mapTasks(task, range(4), workers=workers)

        with np.errstate(divide='ignore'):
            self.assertEqual(mapTasks(task, range(4), workers=3), [math.inf] * 4)

    def testKjørendeTasksBlirFerdigeFørFeilenRaises(self):
        started, finished = set(), set()

        def task(x):
            started.add(x)
            if x == 0:
                raise ValueError('task 0')
            time.sleep(0.2)
            finished.add(x)
            return x

        with self.assertLogs('mydtc', level='ERROR'), self.assertRaises(ValueError):
            mapTasks(task, range(20), workers=3)
        # Ingen task regner videre etter at mapTasks har raist, og resten ble kansellert
        self.assertEqual(started - {0}, finished)
        self.assertLess(len(started), 20)


class BatchTestCase(SimpleTestCase):
    def setUp(self):
        self.epsGrid = np.linspace(0, 0.5, 26)

    def testBatchSlicesFordelerResten(self):
        slices = batchSlices(23, 5)
        self.assertEqual([s.stop - s.start for s in slices], [5, 5, 5, 4, 4])
        self.assertEqual(slices[0].start, 0)
        self.assertEqual(slices[-1].stop, 23)
        for a, b in zip(slices, slices[1:]):
            self.assertEqual(a.stop, b.start)

    def testLikeBatchesGirNullSigma(self):
        estimate = batchedPeakEstimate(syntheticSamples(self.epsGrid, 200), self.epsGrid, 20)
        self.assertEqual(len(estimate.batchLocations), 20)
        self.assertAlmostEqual(estimate.sigma, 0.0, delta=1e-12)
        self.assertAlmostEqual(estimate.mean, estimate.location, delta=1e-12)
        self.assertAlmostEqual(estimate.location, 0.3, delta=0.02)
        self.assertFalse(estimate.boundary)
        self.assertFalse(estimate.singleBatch)

    def testBand(self):
        estimate = PeakEstimate(location=0.3, batchLocations=np.array([0.29, 0.31]), mean=0.3, sigma=0.01, height=1.0)
        np.testing.assert_allclose(estimate.oneSigmaBand, (0.29, 0.31))
        np.testing.assert_allclose(estimate.twoSigmaBand, (0.28, 0.32))
        self.assertEqual(estimate.toDict()['batchLocations'], [0.29, 0.31])

    def testEnBatchFlagges(self):
        with self.assertLogs('mydtc', level='WARNING'):
            estimate = batchedPeakEstimate(syntheticSamples(self.epsGrid, 10), self.epsGrid, 1)
        self.assertTrue(estimate.singleBatch)
        self.assertEqual(estimate.sigma, 0.0)

    def testStøyeteBatchesHarPositivSigma(self):
        rng = np.random.default_rng(50)
        samples = syntheticSamples(self.epsGrid, 200) * rng.uniform(0.5, 1.5, size=(200, 26))
        estimate = batchedPeakEstimate(samples, self.epsGrid, 10)
        self.assertGreater(estimate.sigma, 0)
        self.assertTrue(0 <= estimate.mean <= 0.5)

    def testForFåRealiseringerRaiser(self):
        self.assertRaises(ValueError, batchedPeakEstimate, syntheticSamples(self.epsGrid, 39), self.epsGrid, 20)
        self.assertRaises(ValueError, batchedPeakEstimate, syntheticSamples(self.epsGrid, 40), self.epsGrid, 0)

    def testMonotonVariansGirRandtopp(self):
        samples = syntheticSamples(self.epsGrid, 40, center=0.8, width=0.3)
        with self.assertLogs('mydtc', level='WARNING'):
            estimate = batchedPeakEstimate(samples, self.epsGrid, 2)
        self.assertTrue(estimate.boundary)
        self.assertEqual(estimate.location, 0.5)

    def testShiftSignificance(self):
        reference = PeakEstimate(location=0.3, batchLocations=np.array([]), mean=0.3, sigma=0.03, height=1.0)
        other = PeakEstimate(location=0.24, batchLocations=np.array([]), mean=0.24, sigma=0.04, height=0.8)
        result = shiftSignificance(reference, other)
        self.assertAlmostEqual(result['shift'], -0.06)
        self.assertAlmostEqual(result['pooledSigma'], math.sqrt((0.03**2 + 0.04**2) / 2))
        self.assertAlmostEqual(result['separation'], 0.06 / result['pooledSigma'])

        same = shiftSignificance(reference, PeakEstimate(location=0.3, batchLocations=np.array([]), mean=0.3, sigma=0.0, height=1.0))
        self.assertGreater(same['pooledSigma'], 0)
        self.assertEqual(same['shift'], 0)


class VarianceCurveTestCase(SimpleTestCase):
    def setUp(self):
        self.epsGrid = np.linspace(0, 0.4, 5)
        self.disorder = DisorderSpec(count=6, masterSeed=9)

    def testKurveHarRiktigForm(self):
        curve = varianceCurve(4, self.epsGrid, 0.0, self.disorder, steps=10)
        self.assertEqual(curve.samples.shape, (6, 5))
        np.testing.assert_array_equal(curve.sampleCounts, [6] * 5)
        self.assertTrue(np.all(curve.variances >= 0))
        self.assertTrue(np.all((curve.samples >= 0) & (curve.samples <= 1 + 1e-12)))
        # Perfekte flipp gir h=1 for alle realiseringer
        self.assertLess(curve.variances[0], 1e-20)

    def testUavhengigAvAntallWorkers(self):
        a = varianceCurve(4, self.epsGrid, 0.05, self.disorder, steps=10, workers=1)
        b = varianceCurve(4, self.epsGrid, 0.05, self.disorder, steps=10, workers=3)
        np.testing.assert_array_equal(a.samples, b.samples)
        np.testing.assert_array_equal(a.variances, b.variances)

    def testTrajectoryBackend(self):
        kwargs = dict(steps=6, backend=consts.Evolusjon.trajectory, trajectories=5)
        a = varianceCurve(3, self.epsGrid, 0.1, self.disorder, workers=1, **kwargs)
        b = varianceCurve(3, self.epsGrid, 0.1, self.disorder, workers=2, **kwargs)
        np.testing.assert_array_equal(a.samples, b.samples)
        self.assertTrue(np.all(a.variances >= 0))

    def testForFåRealiseringerRaiser(self):
        self.assertRaises(ValueError, varianceCurve, 4, self.epsGrid, 0.0, DisorderSpec(count=1), steps=10)

    def testUgyldigGridRaiser(self):
        self.assertRaises(ValueError, varianceCurve, 4, [0.1, 0.1, 0.2], 0.0, self.disorder, steps=10)
        self.assertRaises(ValueError, varianceCurve, 4, [], 0.0, self.disorder, steps=10)

    def testKapasitetSjekkesFørst(self):
        self.assertRaises(CapacityError, varianceCurve, 13, self.epsGrid, 0.0, self.disorder, steps=10)


class SweepTestCase(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.epsGrid = np.linspace(0, 0.5, 6)
        cls.disorder = DisorderSpec(count=8, masterSeed=13)
        cls.grid = heatmapSweep(cls.epsGrid, [0.0, 0.05, 0.1], cls.disorder, n=4, steps=10)

    def testHeatmapForm(self):
        self.assertEqual(self.grid.variance.shape, (3, 6))
        self.assertEqual(len(self.grid.curves), 3)
        self.assertTrue(np.all(self.grid.variance >= 0))

    def testNullRadenErVarianskurven(self):
        curve = varianceCurve(4, self.epsGrid, 0.0, self.disorder, steps=10)
        np.testing.assert_array_equal(self.grid.variance[0], curve.variances)

    def testRidge(self):
        ridge = ridgeEstimates(self.grid, batchCount=2)
        self.assertEqual(len(ridge), 3)
        for estimate in ridge:
            self.assertTrue(0 <= estimate.location <= 0.5)
            self.assertEqual(len(estimate.batchLocations), 2)

    def testHeatmapKreverEksakt(self):
        self.assertRaises(CapacityError, heatmapSweep, self.epsGrid, [0.0], self.disorder, n=13, steps=10)

    def testSizeScan(self):
        rows = sizeScan([3, 4], self.epsGrid, [0.0, 0.1], self.disorder, steps=10, batchCount=2)
        self.assertEqual([(row.n, row.p) for row in rows], [(3, 0.0), (3, 0.1), (4, 0.0), (4, 0.1)])
        # n=4, p=0 bruker samme ensemble og indekser som heatmapet
        np.testing.assert_array_equal(
            rows[2].estimate.batchLocations,
            batchedPeakEstimate(self.grid.curves[0].samples, self.epsGrid, 2).batchLocations
        )

    def testSizeScanSjekkerKapasitetFørst(self):
        self.assertRaises(CapacityError, sizeScan, [4, 13], self.epsGrid, [0.0], self.disorder, steps=10)


@unittest.skipUnless(settings.MYDTC_SLOW_TESTS, 'MYDTC_SLOW_TESTS er ikke satt')
class DeskScaleTestCase(SimpleTestCase):
    '''
    Akseptansekjøringer med n=10, sett MYDTC_SLOW_TESTS og MYDTC_WORKERS for å kjøre dem.
    Et density steg ved n=10 tar rundt 0.3 s på en kjerne, altså ca 15 s per evolusjon med K=50.
    Ridge testen (26 000 støyete evolusjoner) trenger da rundt 100 kjernetimer og shift testen
    (10 400) rundt 45. p=0 går via tilstandsvektoren, så størrelsesskannet tar minutter.
    '''
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.epsGrid = np.linspace(0, 0.5, 26)
        cls.workers = settings.MYDTC_WORKERS

    def testRidgeBøyerMotMindreEps(self):
        pGrid = np.linspace(0, 0.1, 6)
        grid = heatmapSweep(self.epsGrid, pGrid, DisorderSpec(count=200, masterSeed=1), n=10, steps=50, workers=self.workers)
        ridge = ridgeEstimates(grid, batchCount=20)

        self.assertTrue(0.25 <= ridge[0].location <= 0.45)
        for a, b in zip(ridge, ridge[1:]):
            self.assertLessEqual(b.location, a.location + a.sigma)
        self.assertGreater(ridge[0].location - ridge[-1].location, 0.03)

    def testSkiftetErSignifikant(self):
        disorder = DisorderSpec(count=400, masterSeed=2)
        estimates = [
            batchedPeakEstimate(varianceCurve(10, self.epsGrid, p, disorder, 50, workers=self.workers, pIndex=i).samples, self.epsGrid, 20)
            for i, p in enumerate([0.0, 0.06])
        ]
        result = shiftSignificance(*estimates)
        self.assertLess(estimates[1].mean, estimates[0].mean)
        self.assertGreater(result['separation'], 1)

    def testToppenErUavhengigAvStørrelse(self):
        rows = sizeScan([6, 8, 10], self.epsGrid, [0.0], DisorderSpec(count=200, masterSeed=3), 50, batchCount=20, workers=self.workers)
        for a in rows:
            for b in rows:
                self.assertLessEqual(abs(a.estimate.mean - b.estimate.mean), 2 * max(a.estimate.sigma, b.estimate.sigma))
