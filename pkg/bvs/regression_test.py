# Copyright 2015 Google Inc. All Rights Reserved.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Test class for regression."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import itertools

from absl.testing import absltest
import numpy
from numpy import testing

from bvs import bvs_testing
from bvs import errors
from bvs import regression

ModelSubset = regression.ModelSubset

TRUTH = regression.TrueModel(ModelSubset((1, 2)), [0.5, 1.0, -2.0], 1.0)


class ModelSubsetTest(absltest.TestCase):

  def testMaskRoundTrip(self):
    s = ModelSubset.from_mask(0b101)
    self.assertEqual((1, 3), s.indices)
    self.assertEqual(0b101, s.mask)
    self.assertEqual(2, s.j)
    self.assertEqual('{1,3}', str(s))

  def testNullModel(self):
    self.assertEqual(0, regression.NULL_MODEL.j)
    self.assertEqual(0, regression.NULL_MODEL.mask)
    self.assertEqual('{}', str(regression.NULL_MODEL))

  def testRejectsUnorderedIndices(self):
    with self.assertRaises(errors.DomainError):
      ModelSubset((2, 1))
    with self.assertRaises(errors.DomainError):
      ModelSubset((1, 1))
    with self.assertRaises(errors.DomainError):
      ModelSubset((0, 2))

  def testContains(self):
    self.assertTrue(ModelSubset((1, 2, 4)).contains(ModelSubset((2, 4))))
    self.assertTrue(ModelSubset((1,)).contains(regression.NULL_MODEL))
    self.assertFalse(ModelSubset((1, 2)).contains(ModelSubset((3,))))


class LoadDatasetTest(bvs_testing.BvsTestCase):

  def testMinimalFile(self):
    path = self.WriteCsv('y,x1\n1,0.5\n2,1.5\n4,2.0\n')
    dataset = regression.load_dataset(path)
    self.assertEqual(3, dataset.n)
    self.assertEqual(1, dataset.k)
    self.assertEqual(('x1',), dataset.names)
    testing.assert_array_equal([1.0, 2.0, 4.0], dataset.y)

  def testResponseAnywhereAndOrderPreserved(self):
    path = self.WriteCsv('b,y,a\n1,2,7\n3,4,5\n2,9,1\n')
    dataset = regression.load_dataset(path)
    self.assertEqual(('b', 'a'), dataset.names)
    testing.assert_array_equal([[1, 7], [3, 5], [2, 1]], dataset.X)
    testing.assert_array_equal([2, 4, 9], dataset.y)

  def testConstantRegressor(self):
    path = self.WriteCsv('y,x1,x2\n1,1,5.0\n2,3,5.0\n3,2,5.0\n')
    with self.assertRaises(errors.ConstantRegressor) as cm:
      regression.load_dataset(path)
    self.assertEqual('x2', cm.exception.name)

  def testNanCell(self):
    path = self.WriteCsv('y,x1\n1,2\n2,NaN\n3,1\n')
    with self.assertRaises(errors.NonFiniteValue) as cm:
      regression.load_dataset(path)
    self.assertEqual(2, cm.exception.row)
    self.assertEqual('x1', cm.exception.col)

  def testUnparsableCell(self):
    path = self.WriteCsv('y,x1\n1,2\n2,1;5\n3,1\n')
    with self.assertRaises(errors.NonFiniteValue):
      regression.load_dataset(path)

  def testMissingResponse(self):
    path = self.WriteCsv('z,x1\n1,2\n2,3\n')
    with self.assertRaises(errors.MissingResponseColumn):
      regression.load_dataset(path)

  def testEmpty(self):
    with self.assertRaises(errors.EmptyDataset):
      regression.load_dataset(self.WriteCsv('y,x1\n'))
    with self.assertRaises(errors.EmptyDataset):
      regression.load_dataset(self.WriteCsv(''))

  def testRaggedRow(self):
    path = self.WriteCsv('y,x1\n1,2\n2\n')
    with self.assertRaises(errors.MalformedCsv):
      regression.load_dataset(path)

  def testByteOrderMark(self):
    path = self.WriteCsv('\ufeffy,x1\n1,0.5\n2,1.5\n4,2.0\n')
    dataset = regression.load_dataset(path)
    self.assertEqual(('x1',), dataset.names)
    testing.assert_array_equal([1.0, 2.0, 4.0], dataset.y)

  def testTooFewRows(self):
    path = self.WriteCsv('y,x1\n1,0.5\n2,1.5\n')
    with self.assertRaises(errors.InsufficientDegreesOfFreedom):
      regression.load_dataset(path)

  def testTooFewObservations(self):
    for n in (1, 2):
      with self.assertRaises(errors.InsufficientDegreesOfFreedom):
        regression.make_dataset(numpy.arange(n, dtype=float),
                                numpy.arange(n, dtype=float)[:, None])
    self.assertEqual(3, regression.make_dataset([1.0, 2.0, 4.0],
                                                [[0.0], [1.0], [3.0]]).n)

  def testDataErrorsAreValueErrors(self):
    path = self.WriteCsv('z,x1\n1,2\n')
    with self.assertRaises(ValueError):
      regression.load_dataset(path)


class ResidualSumTest(bvs_testing.BvsTestCase):

  def testInterceptOnly(self):
    dataset = regression.make_dataset([1.0, 2.0, 3.0], [[0.0], [1.0], [5.0]])
    self.assertAlmostEqual(
        2.0, regression.residual_sum(dataset, regression.NULL_MODEL))
    self.assertAlmostEqual(2.0, regression.centered_sum(dataset))

  def testPerfectFit(self):
    x = self.rng.standard_normal(20)
    dataset = regression.make_dataset(3.0 - 2.0 * x, x[:, None])
    sse0 = regression.centered_sum(dataset)
    self.assertLess(regression.residual_sum(dataset, ModelSubset((1,))),
                    1e-12 * sse0)
    fit = regression.compute_bj0(dataset, ModelSubset((1,)))
    self.assertGreaterEqual(fit.b_j0, regression.MIN_BJ0)
    self.assertLess(fit.b_j0, 1e-12)

  def testMatchesNormalEquations(self):
    for _ in range(100):
      dataset = self.MakeDataset(50, 5, true_indices=(1, 2))
      j = int(self.rng.integers(0, 6))
      indices = sorted(self.rng.choice(5, size=j, replace=False) + 1)
      expected = self.NormalEquationsSse(dataset, indices)
      actual = regression.residual_sum(dataset, ModelSubset(indices))
      testing.assert_allclose(actual, expected, rtol=1e-10)

  def testBatchedMatchesSingle(self):
    dataset = self.MakeDataset(40, 6, true_indices=(2, 5))
    subsets = [ModelSubset(c) for c in itertools.combinations(range(1, 7), 3)]
    batched = regression.residual_sums(dataset, subsets)
    single = [regression.residual_sum(dataset, s) for s in subsets]
    testing.assert_allclose(batched, single, rtol=1e-12)

  def testBatchedRejectsMixedSizes(self):
    dataset = self.MakeDataset(20, 3)
    with self.assertRaises(ValueError):
      regression.residual_sums(dataset, [ModelSubset((1,)),
                                         ModelSubset((1, 2))])

  def testRankDeficient(self):
    x = self.rng.standard_normal(10)
    X = numpy.column_stack([x, 2.0 * x, self.rng.standard_normal(10)])
    dataset = regression.make_dataset(self.rng.standard_normal(10), X)
    with self.assertRaises(errors.RankDeficient):
      regression.residual_sum(dataset, ModelSubset((1, 2)))
    with self.assertRaises(errors.RankDeficient):
      regression.bj0_values(dataset, [ModelSubset((1, 2)),
                                      ModelSubset((1, 3))])
    # Other submodels of the same dataset are still usable.
    self.assertGreater(regression.residual_sum(dataset, ModelSubset((1, 3))),
                       0.0)

  def testInsufficientDegreesOfFreedom(self):
    dataset = self.MakeDataset(3, 2)
    with self.assertRaises(errors.InsufficientDegreesOfFreedom):
      regression.residual_sum(dataset, ModelSubset((1, 2)))

  def testSubsetBeyondK(self):
    dataset = self.MakeDataset(10, 2)
    with self.assertRaises(errors.DimensionMismatch):
      regression.residual_sum(dataset, ModelSubset((3,)))


class ComputeBj0Test(bvs_testing.BvsTestCase):

  def testEmptySubsetIsOne(self):
    dataset = self.MakeDataset(30, 3)
    fit = regression.compute_bj0(dataset, regression.NULL_MODEL)
    self.assertEqual(1.0, fit.b_j0)
    self.assertEqual(fit.sse, fit.sse0)

  def testNestingMonotone(self):
    dataset = self.MakeDataset(40, 6, true_indices=(1, 3))
    b = regression.bj0_values
    values = {}
    for j in range(7):
      subsets = [ModelSubset(c) for c in itertools.combinations(range(1, 7), j)]
      for s, v in zip(subsets, b(dataset, subsets)):
        values[s.mask] = v
    for a in range(64):
      self.assertGreater(values[a], 0.0)
      self.assertLessEqual(values[a], 1.0)
      for c in range(64):
        if a & c == a:
          self.assertLessEqual(values[c], values[a] * (1 + 1e-12))

  def testTrueSubsetBeatsItsSubsets(self):
    dataset = self.MakeDataset(100, 5, true_indices=(1, 2, 3))
    true_b = regression.compute_bj0(dataset, ModelSubset((1, 2, 3))).b_j0
    for j in range(3):
      for c in itertools.combinations((1, 2, 3), j):
        self.assertLess(true_b,
                        regression.compute_bj0(dataset, ModelSubset(c)).b_j0)

  def testConstantResponse(self):
    dataset = regression.make_dataset(numpy.full(5, 2.0),
                                      self.rng.standard_normal((5, 2)))
    with self.assertRaises(errors.ConstantResponse):
      regression.compute_bj0(dataset, ModelSubset((1,)))

  def testDatasetIsReadOnly(self):
    dataset = self.MakeDataset(10, 2)
    with self.assertRaises(ValueError):
      dataset.X[0, 0] = 1.0


class PseudoDistanceTest(bvs_testing.BvsTestCase):

  def testSelfIsExactlyZero(self):
    dataset = self.MakeDataset(30, 4)
    truth = TRUTH
    self.assertEqual(
        0.0, regression.pseudo_distance(dataset, truth, ModelSubset((1, 2))))

  def testSupersetIsZero(self):
    dataset = self.MakeDataset(30, 4)
    truth = TRUTH
    self.assertLess(
        regression.pseudo_distance(dataset, truth, ModelSubset((1, 2, 4))),
        1e-10)

  def testOrthonormalDesign(self):
    x1 = numpy.array([1.0, -1.0, 1.0, -1.0])
    dataset = regression.make_dataset([0.3, 1.0, -0.2, 0.4], x1[:, None])
    truth = regression.TrueModel(ModelSubset((1,)), [0.0, 1.0], 1.0)
    self.assertAlmostEqual(
        0.5, regression.pseudo_distance(dataset, truth, regression.NULL_MODEL))

  def testPositiveIffNotNested(self):
    dataset = self.MakeDataset(60, 4)
    truth = TRUTH
    for mask in range(16):
      other = ModelSubset.from_mask(mask)
      delta = regression.pseudo_distance(dataset, truth, other)
      self.assertGreaterEqual(delta, 0.0)
      if other.contains(truth.subset):
        self.assertLess(delta, 1e-10)
      else:
        self.assertGreater(delta, 1e-3)

  def testCovarianceFormAgrees(self):
    dataset = self.MakeDataset(80, 5)
    truth = TRUTH
    covariance = regression.regressor_covariance(dataset)
    for other in [regression.NULL_MODEL, ModelSubset((1,)),
                  ModelSubset((2, 3)), ModelSubset((3, 4, 5))]:
      testing.assert_allclose(
          regression.pseudo_distance_from_covariance(covariance, truth, other),
          regression.pseudo_distance(dataset, truth, other),
          rtol=1e-9, atol=1e-12)

  def testBetaMismatch(self):
    dataset = self.MakeDataset(30, 4)
    truth = regression.TrueModel(ModelSubset((1, 2)), [0.0, 1.0], 1.0)
    with self.assertRaises(errors.DimensionMismatch):
      regression.pseudo_distance(dataset, truth, regression.NULL_MODEL)
    with self.assertRaises(errors.DimensionMismatch):
      regression.pseudo_distance_from_covariance(
          numpy.eye(4), truth, regression.NULL_MODEL)


if __name__ == '__main__':
  absltest.main()
