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
"""Posterior probabilities over every model of a dataset.

Each model is compared with the null model M_0, which is nested in all of
them, so

  Pr(M_j | y) = B_j0 pi(M_j) / sum_i B_i0 pi(M_i),   with B_00 = 1.

Models are listed in ascending bitmask order: regressor i sets bit i - 1.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import itertools

from absl import logging
import numpy
from scipy import special

from bvs import bayes_factors
from bvs import errors
from bvs import model_priors
from bvs import parallel
from bvs import quadrature
from bvs import regression

DEFAULT_ENUMERATION_CAP = 25
# Enumerations at or above this k are logged as expensive.
LARGE_K = 20

# Subsets per parallel work unit.
_CHUNK = 4096


class PosteriorEntry(
    collections.namedtuple('PosteriorEntry',
                           ['subset', 'log_bf', 'log_unnormalized',
                            'posterior'])):
  __slots__ = ()


class PosteriorTable(
    collections.namedtuple('PosteriorTable',
                           ['entries', 'method', 'prior', 'n', 'k'])):
  """Normalized posterior probabilities of all 2^k models."""
  __slots__ = ()

  def posteriors(self):
    return numpy.array([e.posterior for e in self.entries])

  def log_bayes_factors(self):
    return numpy.array([e.log_bf for e in self.entries])

  def to_dict(self):
    """The table as plain JSON-ready values, keys in output order."""
    return {
        'method': self.method.value,
        'prior': model_priors.format_prior(self.prior),
        'n': self.n,
        'k': self.k,
        'models': [{'indices': list(e.subset.indices),
                    'log_unnormalized': e.log_unnormalized,
                    'posterior': e.posterior} for e in self.entries],
        'inclusion': [float(p) for p in inclusion_probabilities(self)],
    }


def all_subsets(k):
  """Every ModelSubset of k regressors in ascending bitmask order."""
  return [regression.ModelSubset.from_mask(m) for m in range(1 << k)]


def _subsets_by_dimension(k):
  """Subsets grouped by dimension, each group in lexicographic order."""
  return [[regression.ModelSubset(c)
           for c in itertools.combinations(range(1, k + 1), j)]
          for j in range(k + 1)]


def posterior_from_log_bfs(subsets, log_bfs, method, prior, n, k):
  """Combines per-model log Bayes factors with a model prior.

  Separated from the enumeration so one pass of Bayes factors can serve
  several priors.

  Args:
    subsets: The ModelSubsets, in the order the table should list them.
    log_bfs: Their log Bayes factors against M_0.
    method: The bayes_factors.Method that produced log_bfs.
    prior: A ModelPrior.
    n: The sample size.
    k: The number of candidate regressors.
  Returns:
    A PosteriorTable.
  """
  log_bfs = numpy.asarray(log_bfs, dtype=numpy.float64)
  dims = numpy.array([s.j for s in subsets], dtype=numpy.intp)
  log_unnormalized = (log_bfs +
                      model_priors.log_prior_by_dimension(prior, k)[dims])
  log_posterior = log_unnormalized - special.logsumexp(log_unnormalized)
  posterior = numpy.exp(log_posterior)
  entries = tuple(
      PosteriorEntry(s, float(b), float(u), float(p))
      for s, b, u, p in zip(subsets, log_bfs, log_unnormalized, posterior))
  return PosteriorTable(entries, bayes_factors.Method(method), prior, n, k)


def _work_units(groups):
  for group in groups:
    for start in range(0, len(group), _CHUNK):
      yield group[start:start + _CHUNK]


def enumerated_log_bfs(dataset, method, quad=quadrature.DEFAULT_SPEC,
                       cap=DEFAULT_ENUMERATION_CAP, regime=None):
  """Log Bayes factors of every model against M_0.

  Args:
    dataset: A regression.Dataset.
    method: A bayes_factors.Method.
    quad: A QuadratureSpec.
    cap: The largest k that may be enumerated.
    regime: Optional Regime selecting the large-n approximations.
  Returns:
    (subsets, log_bfs) in ascending bitmask order.
  Raises:
    EnumerationCapExceeded: If k > cap.
  """
  k = dataset.k
  if k > cap:
    raise errors.EnumerationCapExceeded(k, cap)
  method = bayes_factors.Method(method)
  groups = _subsets_by_dimension(k)
  if k >= LARGE_K:
    logging.warning('Enumerating all 2^%d models; this is slow.', k)
  logging.vlog(1, 'Enumerating %d models with %s.', 1 << k, method.value)

  def evaluate(chunk):
    j = chunk[0].j
    if j == 0:
      return numpy.zeros(len(chunk))
    b = regression.bj0_values(dataset, chunk)
    return bayes_factors.log_bf_values(method, dataset.n, j, b, quad, regime)

  units = list(_work_units(groups))
  values = parallel.ordered_map(evaluate, units)
  by_mask = numpy.empty(1 << k)
  for chunk, chunk_values in zip(units, values):
    by_mask[[s.mask for s in chunk]] = chunk_values
  return all_subsets(k), by_mask


def enumerate_posterior(dataset, method, prior, quad=quadrature.DEFAULT_SPEC,
                        cap=DEFAULT_ENUMERATION_CAP, regime=None):
  """Posterior probabilities of all 2^k models of a dataset.

  Args:
    dataset: A regression.Dataset.
    method: A bayes_factors.Method.
    prior: A ModelPrior.
    quad: A QuadratureSpec.
    cap: The largest k that may be enumerated.
    regime: Optional Regime selecting the large-n approximations.
  Returns:
    A PosteriorTable in ascending bitmask order.
  Raises:
    EnumerationCapExceeded: If k > cap.
    DataError: If a submodel cannot be fitted.
    QuadratureNonConvergence: If a Bayes factor integral fails.
  """
  subsets, log_bfs = enumerated_log_bfs(dataset, method, quad, cap, regime)
  return posterior_from_log_bfs(subsets, log_bfs, method, prior, dataset.n,
                                dataset.k)


def _rank_key(entry):
  return (-entry.posterior, entry.subset.j, entry.subset.indices)


def top_models(table, m):
  """The m most probable models as (subset, posterior) pairs.

  Ties are broken by fewer regressors first, then lexicographic indices.
  """
  if not 1 <= m <= len(table.entries):
    raise errors.DomainError('m must lie in [1, %d]: %s' %
                             (len(table.entries), m))
  ranked = sorted(table.entries, key=_rank_key)[:m]
  return [(e.subset, e.posterior) for e in ranked]


def modal_model(table):
  return top_models(table, 1)[0][0]


def rank_of(table, subset):
  """1-based position of subset in the top_models ordering."""
  key = _rank_key(table.entries[subset.mask])
  return 1 + sum(1 for e in table.entries if _rank_key(e) < key)


def inclusion_probabilities(table):
  """Posterior probability that each regressor is in the model."""
  out = numpy.zeros(table.k)
  for e in table.entries:
    for i in e.subset.indices:
      out[i - 1] += e.posterior
  return numpy.minimum(out, 1.0)
