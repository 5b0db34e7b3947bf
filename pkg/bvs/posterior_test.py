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
"""Test class for posterior."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import itertools
import json
import os
from unittest import mock

from absl.testing import absltest
from absl.testing import parameterized
import numpy
from numpy import testing
from scipy import special

from bvs import bayes_factors
from bvs import bvs_testing
from bvs import errors
from bvs import model_priors
from bvs import parallel
from bvs import posterior
from bvs import regression

Method = bayes_factors.Method
ModelPrior = model_priors.ModelPrior
ModelSubset = regression.ModelSubset

PRIORS = [ModelPrior.bernoulli(0.3), ModelPrior.hierarchical_uniform(),
          ModelPrior.uniform()]


class EnumerationTest(bvs_testing.BvsTestCase, parameterized.TestCase):

  def testResponseOnly(self):
    dataset = regression.make_dataset(self.rng.standard_normal(12),
                                      numpy.zeros((12, 0)))
    table = posterior.enumerate_posterior(dataset, Method.IP,
                                          ModelPrior.hierarchical_uniform())
    self.assertLen(table.entries, 1)
    self.assertEqual(regression.NULL_MODEL, table.entries[0].subset)
    self.assertAlmostEqual(1.0, table.entries[0].posterior)

  @parameterized.parameters(*itertools.product(list(Method),
                                               range(len(PRIORS))))
  def testNormalizedAndComplete(self, method, prior_index):
    dataset = self.MakeDataset(30, 6, true_indices=(1, 4))
    table = posterior.enumerate_posterior(dataset, method, PRIORS[prior_index])
    self.assertLen(table.entries, 64)
    self.assertEqual(list(range(64)), [e.subset.mask for e in table.entries])
    self.assertAlmostEqual(1.0, table.posteriors().sum(), delta=1e-10)
    self.assertEqual(0.0, table.entries[0].log_bf)
    order_p = numpy.argsort(-table.posteriors(), kind='stable')
    order_u = numpy.argsort(-numpy.array(
        [e.log_unnormalized for e in table.entries]), kind='stable')
    testing.assert_array_equal(order_p, order_u)

  def testUniformRanksByBayesFactor(self):
    dataset = self.MakeDataset(40, 2, true_indices=(2,))
    table = posterior.enumerate_posterior(dataset, Method.MIX,
                                          ModelPrior.uniform())
    by_posterior = [s for s, _ in posterior.top_models(table, 4)]
    by_bf = sorted(table.entries, key=lambda e: -e.log_bf)
    self.assertEqual([e.subset for e in by_bf], by_posterior)
    testing.assert_allclose(
        table.log_bayes_factors() -
        numpy.array([e.log_unnormalized for e in table.entries]),
        numpy.full(4, 2 * numpy.log(2.0)))

  def testPriorDependsOnlyOnDimension(self):
    dataset = self.MakeDataset(25, 5)
    table = posterior.enumerate_posterior(dataset, Method.GN,
                                          ModelPrior.hierarchical_uniform())
    offsets = collections.defaultdict(set)
    for e in table.entries:
      offsets[e.subset.j].add(round(e.log_unnormalized - e.log_bf, 12))
    for values in offsets.values():
      self.assertLen(values, 1)

  def testMatchesDirectArithmetic(self):
    for k in range(1, 5):
      dataset = self.MakeDataset(30, k, true_indices=(1,))
      prior = ModelPrior.bernoulli(0.4)
      table = posterior.enumerate_posterior(dataset, Method.GN, prior)
      n = dataset.n
      sse0 = self.NormalEquationsSse(dataset, [])
      weights = []
      for mask in range(1 << k):
        s = ModelSubset.from_mask(mask)
        b = self.NormalEquationsSse(dataset, s.indices) / sse0
        bf = ((1.0 + n) ** ((n - s.j - 1) / 2.0) *
              (1.0 + n * b) ** (-(n - 1) / 2.0))
        weights.append(bf * 0.4 ** s.j * 0.6 ** (k - s.j))
      expected = numpy.array(weights) / sum(weights)
      testing.assert_allclose(table.posteriors(), expected, rtol=1e-8,
                              atol=1e-12)

  def testCap(self):
    dataset = self.MakeDataset(20, 4)
    with self.assertRaises(errors.EnumerationCapExceeded) as cm:
      posterior.enumerate_posterior(dataset, Method.GN,
                                    ModelPrior.uniform(), cap=3)
    self.assertEqual((4, 3), (cm.exception.k, cm.exception.cap))
    self.assertIn('3', str(cm.exception))

  def testIndependentOfThreads(self):
    dataset = self.MakeDataset(35, 7, true_indices=(1, 2))
    prior = ModelPrior.hierarchical_uniform()
    with mock.patch.dict(os.environ, {parallel.THREADS_ENV: '1'}):
      serial = posterior.enumerate_posterior(dataset, Method.IP, prior)
    with mock.patch.dict(os.environ, {parallel.THREADS_ENV: '4'}):
      threaded = posterior.enumerate_posterior(dataset, Method.IP, prior)
    self.assertEqual(serial, threaded)

  def testRegimeSelectsApproximation(self):
    dataset = self.MakeDataset(60, 3)
    table = posterior.enumerate_posterior(
        dataset, Method.IP, ModelPrior.uniform(),
        regime=bayes_factors.Regime.B_LT_1)
    e = table.entries[0b101]
    b = regression.compute_bj0(dataset, e.subset).b_j0
    self.assertAlmostEqual(
        bayes_factors.log_bf_approx(Method.IP, bayes_factors.Regime.B_LT_1,
                                    60, 2, b).log_value, e.log_bf, places=9)


class SeededRecoveryTest(bvs_testing.BvsTestCase):

  def _table(self, seed):
    self.rng = numpy.random.default_rng(seed)
    dataset = self.MakeDataset(100, 6, true_indices=(1, 2),
                               beta=[1.0, 1.5, 1.5])
    return posterior.enumerate_posterior(dataset, Method.IP,
                                         ModelPrior.hierarchical_uniform())

  def testModalModelAcrossSeeds(self):
    truth = ModelSubset((1, 2))
    modal = collections.Counter()
    for seed in range(100):
      table = self._table(seed)
      best = posterior.modal_model(table)
      self.assertTrue(best.contains(truth))
      modal[best] += 1
    self.assertEqual(truth, modal.most_common(1)[0][0])

  def testInclusion(self):
    table = self._table(7)
    inclusion = posterior.inclusion_probabilities(table)
    self.assertEqual((6,), inclusion.shape)
    self.assertGreater(inclusion[0], 0.9)
    self.assertGreater(inclusion[1], 0.9)
    self.assertTrue(numpy.all((inclusion >= 0) & (inclusion <= 1)))


class RankingTest(parameterized.TestCase):

  def _table(self, log_bfs, prior=ModelPrior.uniform()):
    k = int(numpy.log2(len(log_bfs)))
    return posterior.posterior_from_log_bfs(posterior.all_subsets(k), log_bfs,
                                            Method.GN, prior, 50, k)

  def testTieBreak(self):
    table = self._table([0.0, 2.0, 2.0, 1.0])
    ranked = posterior.top_models(table, 4)
    self.assertEqual([(1,), (2,), (1, 2), ()],
                     [s.indices for s, _ in ranked])
    self.assertAlmostEqual(ranked[0][1], ranked[1][1])
    self.assertEqual(ModelSubset((1,)), posterior.modal_model(table))

  def testFullTableSorted(self):
    table = self._table(numpy.linspace(-3.0, 3.0, 16)[::-1])
    ranked = posterior.top_models(table, 16)
    self.assertLen(ranked, 16)
    values = [p for _, p in ranked]
    self.assertEqual(sorted(values, reverse=True), values)
    for position, (subset, _) in enumerate(ranked):
      self.assertEqual(position + 1, posterior.rank_of(table, subset))

  def testTieBreakPrefersFewerRegressors(self):
    table = self._table([0.0, 0.0, 0.0, 5.0, 0.0, 5.0, 0.0, 5.0])
    ranked = [s.indices for s, _ in posterior.top_models(table, 3)]
    self.assertEqual([(1, 2), (1, 3), (1, 2, 3)], ranked)

  @parameterized.parameters(0, 5)
  def testBadM(self, m):
    with self.assertRaises(errors.DomainError):
      posterior.top_models(self._table([0.0, 1.0, 2.0, 3.0]), m)

  def testUniformInclusion(self):
    table = self._table(numpy.zeros(8))
    testing.assert_allclose(posterior.inclusion_probabilities(table),
                            [0.5, 0.5, 0.5])

  def testSingleRegressorInclusion(self):
    table = self._table([0.0, 1.3], ModelPrior.bernoulli(0.2))
    self.assertAlmostEqual(table.entries[1].posterior,
                           posterior.inclusion_probabilities(table)[0])

  def testJsonRoundTrip(self):
    table = self._table([0.0, 1.5, -0.25, 3.0],
                        ModelPrior.hierarchical_uniform())
    document = json.loads(json.dumps(table.to_dict()))
    self.assertEqual(['method', 'prior', 'n', 'k', 'models', 'inclusion'],
                     list(document))
    self.assertEqual('gn', document['method'])
    self.assertEqual('hu', document['prior'])
    self.assertEqual([[], [1], [2], [1, 2]],
                     [m['indices'] for m in document['models']])
    u = numpy.array([m['log_unnormalized'] for m in document['models']])
    testing.assert_allclose(numpy.exp(u - special.logsumexp(u)),
                            table.posteriors(), rtol=0, atol=1e-12)


if __name__ == '__main__':
  absltest.main()
