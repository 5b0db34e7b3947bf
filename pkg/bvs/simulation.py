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
"""Seeded Monte Carlo experiments.

Covariates are standard normal with a common pairwise correlation, built
from one shared factor.  The true regressors always occupy the lowest
indices and the remaining columns are noise.

Every (n, replicate) work unit draws from its own stream, derived from the
master seed, so results do not depend on how units are scheduled.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import math

from absl import logging
import numpy

from bvs import bayes_factors
from bvs import error_analysis
from bvs import errors
from bvs import model_priors
from bvs import parallel
from bvs import posterior
from bvs import quadrature
from bvs import regression

_SEED_MASK = (1 << 64) - 1
_MC_BATCH = 10000


class ExperimentConfig(
    collections.namedtuple('ExperimentConfig', [
        'b', 'n_grid', 'true_indices', 'beta', 'sigma', 'covariate_corr',
        'replications', 'seed', 'method', 'prior', 'enumeration_cap',
        'k_scale'
    ])):
  """A posterior consistency study with k = floor(k_scale * n^b).

  beta holds the intercept followed by one coefficient per true regressor;
  None means intercept 0 and every slope 1.
  """
  __slots__ = ()

  def __new__(cls,
              b,
              n_grid,
              true_indices,
              beta=None,
              sigma=1.0,
              covariate_corr=0.0,
              replications=50,
              seed=0,
              method=bayes_factors.Method.IP,
              prior=model_priors.ModelPrior.hierarchical_uniform(),
              enumeration_cap=posterior.DEFAULT_ENUMERATION_CAP,
              k_scale=1.0):
    true_indices = tuple(regression.ModelSubset(true_indices).indices)
    if beta is None:
      beta = (0.0,) + (1.0,) * len(true_indices)
    beta = tuple(float(x) for x in beta)
    if len(beta) != len(true_indices) + 1:
      raise errors.DimensionMismatch(
          'beta needs an intercept and %d slopes, got %d values' %
          (len(true_indices), len(beta)))
    if not 0.0 <= b <= 1.0:
      raise errors.DomainError('b must lie in [0, 1]: %s' % b)
    if not k_scale > 0:
      raise errors.DomainError('k_scale must be positive: %s' % k_scale)
    if int(replications) < 1:
      raise errors.DomainError('replications must be >= 1: %s' % replications)
    n_grid = tuple(int(n) for n in n_grid)
    if not n_grid:
      raise errors.DomainError('n_grid is empty.')
    config = super(ExperimentConfig, cls).__new__(
        cls, float(b), n_grid, true_indices, beta, float(sigma),
        float(covariate_corr), int(replications), int(seed),
        bayes_factors.Method(method), prior, int(enumeration_cap),
        float(k_scale))
    t_max = true_indices[-1] if true_indices else 0
    for n in n_grid:
      k = config.regressors(n)
      if k < t_max:
        raise errors.DomainError(
            'k=%d at n=%d cannot hold the true regressors %s' %
            (k, n, true_indices))
      if k > config.enumeration_cap:
        raise errors.EnumerationCapExceeded(k, config.enumeration_cap)
    return config

  def regressors(self, n):
    """Number of candidate regressors at sample size n."""
    return int(math.floor(self.k_scale * n ** self.b + 1e-9))


class ReplicateRecord(
    collections.namedtuple('ReplicateRecord', [
        'n', 'k', 'replicate', 'true_posterior', 'true_rank', 'modal_indices',
        'modal_is_true'
    ])):
  __slots__ = ()


class SampleSizeSummary(
    collections.namedtuple('SampleSizeSummary', [
        'n', 'k', 'mean_posterior', 'median_posterior', 'hit_rate'
    ])):
  __slots__ = ()


class ExperimentResult(
    collections.namedtuple('ExperimentResult',
                           ['config', 'records', 'summaries'])):
  """Replicate records in (n, replicate) order and per-n aggregates."""
  __slots__ = ()

  def mean_posteriors(self):
    return numpy.array([s.mean_posterior for s in self.summaries])


class MonteCarloEstimate(
    collections.namedtuple('MonteCarloEstimate',
                           ['estimate', 'mc_se', 'b_star'])):
  __slots__ = ()


def derive_seed(seed, *keys):
  """A SeedSequence for the work unit identified by keys under seed."""
  return numpy.random.SeedSequence([int(seed) & _SEED_MASK] +
                                   [int(key) for key in keys])


def _covariates(rng, n, k, covariate_corr):
  if not 0.0 <= covariate_corr < 1.0:
    raise errors.DomainError(
        'covariate_corr must lie in [0, 1): %s' % covariate_corr)
  factor = rng.standard_normal((n, 1))
  noise = rng.standard_normal((n, k))
  return (math.sqrt(covariate_corr) * factor +
          math.sqrt(1.0 - covariate_corr) * noise)


def generate_synthetic(n, k, true_indices, beta, sigma, covariate_corr, seed):
  """Draws a dataset from the linear model on the true regressors.

  Args:
    n: Sample size.
    k: Number of candidate regressors.
    true_indices: 1-based indices of the regressors in the true model.
    beta: Intercept followed by one slope per true regressor.
    sigma: Noise standard deviation, >= 0.
    covariate_corr: Pairwise correlation of the covariates, in [0, 1).
    seed: An integer or numpy SeedSequence.
  Returns:
    A regression.Dataset.
  Raises:
    DomainError: On invalid arguments.
  """
  true_subset = regression.ModelSubset(true_indices)
  beta = numpy.asarray(beta, dtype=numpy.float64).reshape(-1)
  if beta.shape[0] != true_subset.j + 1:
    raise errors.DomainError(
        'beta needs an intercept and %d slopes, got %d values' %
        (true_subset.j, beta.shape[0]))
  if true_subset.indices and true_subset.indices[-1] > k:
    raise errors.DomainError('True regressors %s exceed k=%d' %
                             (true_subset, k))
  if not sigma >= 0:
    raise errors.DomainError('sigma must be >= 0: %s' % sigma)
  if not n >= 1:
    raise errors.DomainError('n must be positive: %s' % n)
  rng = numpy.random.default_rng(seed)
  X = _covariates(rng, n, k, covariate_corr)
  columns = numpy.array(true_subset.indices, dtype=numpy.intp) - 1
  y = beta[0] + X[:, columns].dot(beta[1:]) + sigma * rng.standard_normal(n)
  return regression.make_dataset(y, X)


def coefficients_for_delta(dataset, subset, delta, sigma=1.0, direction=None):
  """Slopes on subset scaled so that δ_n(M_subset, M_0) equals delta.

  Args:
    dataset: The design the distance is measured on.
    subset: The regressors carrying the signal.
    delta: The target pseudo-distance, >= 0.
    sigma: The noise standard deviation of the true model.
    direction: Relative slopes, all ones by default.
  Returns:
    The coefficient vector, intercept (zero) first.
  """
  if not delta >= 0:
    raise errors.DomainError('delta must be >= 0: %s' % delta)
  if direction is None:
    direction = numpy.ones(subset.j)
  beta = numpy.concatenate([[0.0], numpy.asarray(direction, numpy.float64)])
  unit = regression.pseudo_distance(
      dataset, regression.TrueModel(subset, beta, sigma),
      regression.NULL_MODEL)
  if unit <= 0:
    raise errors.DomainError('The direction carries no signal.')
  return beta * math.sqrt(delta / unit)


def _replicate(config, priors, quad, unit):
  n, replicate = unit
  k = config.regressors(n)
  data = generate_synthetic(n, k, config.true_indices, config.beta,
                            config.sigma, config.covariate_corr,
                            derive_seed(config.seed, n, replicate))
  subsets, log_bfs = posterior.enumerated_log_bfs(
      data, config.method, quad, config.enumeration_cap)
  true_subset = regression.ModelSubset(config.true_indices)
  records = []
  for prior in priors:
    table = posterior.posterior_from_log_bfs(subsets, log_bfs, config.method,
                                             prior, n, k)
    truth = table.entries[true_subset.mask]
    rank = posterior.rank_of(table, true_subset)
    modal = posterior.modal_model(table)
    records.append(
        ReplicateRecord(n, k, replicate, truth.posterior, rank, modal.indices,
                        modal == true_subset))
  return records


def _summarize(records):
  summaries = []
  for n in sorted(set(r.n for r in records)):
    rows = [r for r in records if r.n == n]
    values = numpy.array([r.true_posterior for r in rows])
    summaries.append(
        SampleSizeSummary(n, rows[0].k, float(values.mean()),
                          float(numpy.median(values)),
                          float(numpy.mean([r.modal_is_true for r in rows]))))
  return tuple(summaries)


def run_prior_comparison(config, priors, quad=quadrature.DEFAULT_SPEC):
  """One simulated data stream evaluated under several model priors.

  Each replicate's Bayes factors are computed once and combined with every
  prior, so differences between the results come from the priors alone.

  Args:
    config: An ExperimentConfig; its prior field is ignored.
    priors: A sequence of ModelPriors.
    quad: A QuadratureSpec.
  Returns:
    A list with one ExperimentResult per prior, in the order of priors.
  """
  priors = list(priors)
  units = [(n, r) for n in config.n_grid for r in range(config.replications)]
  logging.info('Running %d replicates over n=%s with k=%s.', len(units),
               list(config.n_grid),
               [config.regressors(n) for n in config.n_grid])
  per_unit = parallel.ordered_map(
      lambda unit: _replicate(config, priors, quad, unit), units)
  results = []
  for i, prior in enumerate(priors):
    records = tuple(unit_records[i] for unit_records in per_unit)
    results.append(
        ExperimentResult(config._replace(prior=prior), records,
                         _summarize(records)))
  return results


def run_consistency_experiment(config, quad=quadrature.DEFAULT_SPEC):
  """Posterior of the true model as n and k = floor(k_scale n^b) grow.

  Args:
    config: An ExperimentConfig.
    quad: A QuadratureSpec.
  Returns:
    An ExperimentResult.
  Raises:
    EnumerationCapExceeded: If some k exceeds the configured cap.
  """
  return run_prior_comparison(config, [config.prior], quad)[0]


def run_error_mc(method, n, j_subset, beta, sigma, reps, seed, delta=None,
                 covariate_corr=0.0, quad=quadrature.DEFAULT_SPEC):
  """Empirical rejection rate of the b_j0 <= b_star rule for M_j vs M_0.

  A design with len(beta) - 1 covariates is drawn once from the seed and the
  responses are redrawn in every replication.

  Args:
    method: A bayes_factors.Method.
    n: Sample size.
    j_subset: The alternative model M_j; its regressors must exist in the
      design.
    beta: Intercept followed by one slope per design column; all slopes zero
      estimates the Type I error.
    sigma: Noise standard deviation, > 0.
    reps: Number of replications, at least 1000.
    seed: The master seed.
    delta: If given, the slopes are rescaled so that the true model's
      pseudo-distance from M_0 equals delta on the drawn design.
    covariate_corr: Pairwise covariate correlation.
    quad: A QuadratureSpec.
  Returns:
    A MonteCarloEstimate with the rejection frequency and its binomial
    standard error.
  """
  if int(reps) < 1000:
    raise errors.DomainError('reps must be at least 1000: %s' % reps)
  if not sigma > 0:
    raise errors.DomainError('sigma must be positive: %s' % sigma)
  beta = numpy.asarray(beta, dtype=numpy.float64).reshape(-1)
  k = beta.shape[0] - 1
  if not j_subset.indices or j_subset.indices[-1] > k:
    raise errors.DimensionMismatch(
        'The alternative %s must be a non-empty subset of the %d design '
        'columns.' % (j_subset, k))
  rng = numpy.random.default_rng(derive_seed(seed, n))
  design = regression.make_dataset(numpy.arange(n, dtype=numpy.float64),
                                   _covariates(rng, n, k, covariate_corr))
  if delta is not None:
    slopes = beta[1:]
    signal = regression.ModelSubset(numpy.nonzero(slopes)[0] + 1)
    beta = numpy.concatenate([[beta[0]], numpy.zeros(k)])
    if delta > 0:
      if not signal.indices:
        raise errors.DomainError('delta > 0 needs at least one nonzero slope.')
      columns = numpy.array(signal.indices, dtype=numpy.intp)
      beta[columns] = coefficients_for_delta(
          design, signal, delta, sigma, direction=slopes[columns - 1])[1:]
  region = error_analysis.critical_threshold(method, n, j_subset.j, quad)

  mean = beta[0] + design.X.dot(beta[1:])
  columns = numpy.array(j_subset.indices, dtype=numpy.intp) - 1
  q, _ = numpy.linalg.qr(numpy.column_stack([numpy.ones(n),
                                             design.X[:, columns]]))
  rejections = 0
  done = 0
  while done < reps:
    batch = min(_MC_BATCH, reps - done)
    y = mean + sigma * rng.standard_normal((batch, n))
    centered = y - y.mean(axis=1, keepdims=True)
    resid = y - y.dot(q).dot(q.T)
    b = numpy.einsum('rn,rn->r', resid, resid) / numpy.einsum(
        'rn,rn->r', centered, centered)
    if not region.empty:
      rejections += int(numpy.count_nonzero(b <= region.b_star))
    done += batch
  p = rejections / reps
  return MonteCarloEstimate(p, math.sqrt(max(p * (1.0 - p), 0.0) / reps),
                            region.b_star)
