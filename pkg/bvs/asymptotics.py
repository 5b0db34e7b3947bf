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
"""Large-sample behaviour when k = floor(n^b) regressors grow with n.

When data come from a true model M_t, each Bayes factor B_j0 is approximated
by a function of n, j and the limiting pseudo-distances δ*_tj and δ*_t0.
Posterior consistency holds iff

  sum over M_j != M_t of (B_j0 / B_t0) (pi(M_j) / pi(M_t))  ->  0,

which this module evaluates at finite n.  Models of one dimension that all
contain M_t share δ*_tj = 0, so the sum runs over dimension classes with
multiplicities C(k - t, j - t).  Models that do not contain M_t have
δ*_tj > 0 and vanish exponentially; they are dropped unless `strict` is set,
in which case the caller supplies their δ* through delta_fn.

The pseudo-distances are always supplied by the caller.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import enum
import math

from absl import logging
import numpy
from scipy import special

from bvs import bayes_factors
from bvs import errors
from bvs import model_priors
from bvs import parallel
from bvs import regression

Method = bayes_factors.Method
Regime = bayes_factors.Regime

# Partial sums whose log exceeds this are reported as infinite.
LOG_OVERFLOW = 700.0

# Pseudo-distances below this count as zero when classifying a pair.
ZERO_TOLERANCE = 1e-8


class AsymptoticScenario(
    collections.namedtuple('AsymptoticScenario',
                           ['n', 't', 'j', 'delta_tj', 'delta_t0',
                            'regime'])):
  """Sample size, true and candidate dimensions and limiting distances."""
  __slots__ = ()

  def __new__(cls, n, t, j, delta_tj, delta_t0, regime=Regime.B_LT_1):
    for name, value in (('delta_tj', delta_tj), ('delta_t0', delta_t0)):
      if not (math.isfinite(value) and value >= 0):
        raise errors.DomainError('%s must be finite and >= 0: %s' %
                                 (name, value))
    return super(AsymptoticScenario, cls).__new__(
        cls, n, t, j, float(delta_tj), float(delta_t0), Regime(regime))


class Verdict(enum.Enum):
  DECREASING_TO_ZERO = 'decreasing_to_zero'
  NOT_DECREASING = 'not_decreasing'


class PairClass(enum.Enum):
  ZERO = 'zero'
  POSITIVE = 'positive'


class ConsistencyReport(
    collections.namedtuple('ConsistencyReport',
                           ['b', 'n_grid', 'partial_sums', 'verdict_trend'])):
  __slots__ = ()


def _lemma2(method, regime, n, j, delta_tj, delta_t0):
  """Vectorized over j and delta_tj; see lemma2_log_bf."""
  j = numpy.asarray(j, dtype=numpy.float64)
  delta_tj = numpy.asarray(delta_tj, dtype=numpy.float64)
  log_t0 = math.log1p(delta_t0)
  if regime is Regime.B_EQ_1 and method is not Method.IP:
    shifted = 1.0 + delta_tj - j / n
    log_ratio = numpy.log(shifted) - log_t0
  else:
    shifted = 1.0 + delta_tj
    log_ratio = numpy.log1p(delta_tj) - log_t0
  if method is Method.GN:
    drift = delta_tj - delta_t0
    if regime is Regime.B_EQ_1:
      drift = drift - j / n
    return (-0.5 * j * math.log(n) - 0.5 * n * log_ratio +
            drift / (2.0 * shifted))
  if method is Method.MIX:
    return (-0.5 * j * numpy.log(n * math.e / (j + 1)) -
            0.5 * (n - j - 2) * log_ratio)
  if method is Method.IP:
    if regime is Regime.B_LT_1:
      return -0.5 * j * numpy.log(n / (j + 2)) - 0.5 * (n - j) * log_ratio
    return (0.5 * (n - j - 1) * numpy.log1p(n / j) - 0.5 * (n - 1) *
            (numpy.log((n / j) * (1.0 + delta_tj) + delta_t0) - log_t0))
  raise errors.DomainError('No asymptotic form for %s' % method)


def lemma2_log_bf(method, scenario):
  """Log of B_j0 when sampling from M_t, for large n.

  Args:
    method: Method.GN, Method.MIX or Method.IP.
    scenario: An AsymptoticScenario.
  Returns:
    The approximate log Bayes factor.
  Raises:
    DomainError: If n <= j + 2, or for IP with b = 1 and j = 0.
  """
  method = Method(method)
  s = scenario
  if not s.n > s.j + 2:
    raise errors.DomainError('Need n > j + 2, got n=%s and j=%s' % (s.n, s.j))
  if method is Method.IP and s.regime is Regime.B_EQ_1 and s.j == 0:
    raise errors.DomainError('The b = 1 intrinsic form divides by j; j=0.')
  return float(_lemma2(method, s.regime, s.n, s.j, s.delta_tj, s.delta_t0))


def classify_pair(true_model, other, population):
  """Whether δ*(M_t, M_j) is zero, from a covariance or a large dataset.

  Args:
    true_model: A regression.TrueModel with nonzero coefficients.
    other: The ModelSubset of M_j.
    population: Either a k x k regressor covariance (for the population
      limit) or a regression.Dataset whose empirical distance is used.
  Returns:
    PairClass.ZERO or PairClass.POSITIVE.
  Raises:
    DimensionMismatch: If the inputs are not conformable.
  """
  if isinstance(population, regression.Dataset):
    delta = regression.pseudo_distance(population, true_model, other)
  else:
    delta = regression.pseudo_distance_from_covariance(population, true_model,
                                                       other)
  return PairClass.ZERO if delta < ZERO_TOLERANCE else PairClass.POSITIVE


def regressors_for(n, b):
  """k = floor(n^b)."""
  return int(math.floor(n ** b + 1e-9))


def default_regime(b):
  return Regime.B_EQ_1 if b >= 1 else Regime.B_LT_1


def _log_bf_class(method, regime, n, j, delta_tj, delta_t0):
  """Limiting log Bayes factors with the null class pinned to B_00 = 1."""
  j = numpy.asarray(j, dtype=numpy.float64)
  out = numpy.zeros(j.shape)
  nonnull = j > 0
  if numpy.any(nonnull):
    out[nonnull] = _lemma2(method, regime, n, j[nonnull],
                           numpy.broadcast_to(delta_tj, j.shape)[nonnull],
                           delta_t0)
  return out


def condition_A_sum(method, prior, b, n, t, delta_fn, strict=False,
                    regime=None):
  """Finite-n value of the consistency sum under a true model of dimension t.

  Only dimensions j <= n - 3 enter the sum; when k = floor(n^b) is larger,
  as it is near b = 1, the classes above n - 3 are left out.

  Args:
    method: Method.GN, Method.MIX or Method.IP.
    prior: A ModelPrior.
    b: Growth exponent; k = floor(n^b).
    n: Sample size.
    t: Dimension of the true model.
    delta_fn: Called as delta_fn(t, j, nested) and returns δ* between M_t
      and a model of dimension j; nested tells whether that model contains
      M_t.  delta_fn(t, 0, False) must give δ*_t0.
    strict: Also include the models that do not contain M_t.
    regime: The Regime of the approximations, from b by default.
  Returns:
    The partial sum, or math.inf when its log exceeds LOG_OVERFLOW.
  Raises:
    DomainError: If k < t or the preconditions of the approximations fail.
  """
  method = Method(method)
  regime = default_regime(b) if regime is None else Regime(regime)
  k = regressors_for(n, b)
  if k < t:
    raise errors.DomainError('k=floor(%s^%s)=%d is below t=%d' % (n, b, k, t))
  if not n > t + 2:
    raise errors.DomainError('Need n > t + 2, got n=%s and t=%s' % (n, t))
  delta_t0 = 0.0 if t == 0 else float(delta_fn(t, 0, False))
  log_bt0 = float(_log_bf_class(method, regime, n, t, 0.0, delta_t0))

  top = min(k, n - 3)
  if top < k:
    logging.vlog(1, 'Dimensions %d to %d exceed n - 3; left out at n=%d.',
                 top + 1, k, n)
  dims = []
  deltas = []
  log_counts = []
  for j in range(t + 1, top + 1):
    dims.append(j)
    deltas.append(0.0 if t == 0 else float(delta_fn(t, j, True)))
    log_counts.append(model_priors.log_binomial(k - t, j - t))
  if strict and t > 0:
    for j in range(0, top + 1):
      nested = special.comb(k - t, j - t, exact=True) if j >= t else 0
      count = special.comb(k, j, exact=True) - nested
      if count > 0:
        dims.append(j)
        deltas.append(float(delta_fn(t, j, False)))
        log_counts.append(math.log(count))
  if not strict and t > 0:
    logging.vlog(1, 'Models without M_t are left out of the sum at n=%d.', n)
  if not dims:
    return 0.0

  dims = numpy.array(dims, dtype=numpy.float64)
  log_bfs = _log_bf_class(method, regime, n, dims, numpy.array(deltas),
                          delta_t0)
  log_ratios = numpy.array(
      [model_priors.log_prior_ratio(prior, int(j), t, k) for j in dims])
  log_sum = special.logsumexp(numpy.array(log_counts) + log_bfs - log_bt0 +
                              log_ratios)
  if log_sum > LOG_OVERFLOW:
    logging.warning('Consistency sum overflows at n=%d (log sum %.1f).', n,
                    log_sum)
    return math.inf
  return float(math.exp(log_sum))


def condition_b_sum(method, prior, b, n, regime=None):
  """The consistency sum under the null model, where every δ* vanishes."""
  return condition_A_sum(method, prior, b, n, 0, lambda t, j, nested: 0.0,
                         regime=regime)


def _verdict(sums):
  tail = sums[-max(2, int(math.ceil(len(sums) / 4.0))):]
  decreasing = all(a > c for a, c in zip(tail, tail[1:]))
  if decreasing and math.isfinite(sums[-1]) and sums[-1] < 1e-3 * sums[0]:
    return Verdict.DECREASING_TO_ZERO
  return Verdict.NOT_DECREASING


def consistency_report(method, prior, b, n_grid, t, delta_fn, strict=False,
                       regime=None):
  """Evaluates condition_A_sum along n_grid and judges its trend.

  The trend is DECREASING_TO_ZERO when the last quarter of the grid is
  strictly decreasing and the final sum is below 1e-3 of the first.

  Args:
    method: Method.GN, Method.MIX or Method.IP.
    prior: A ModelPrior.
    b: Growth exponent.
    n_grid: At least two increasing sample sizes.
    t: Dimension of the true model.
    delta_fn: As for condition_A_sum.
    strict: As for condition_A_sum.
    regime: As for condition_A_sum.
  Returns:
    A ConsistencyReport.
  """
  n_grid = tuple(int(n) for n in n_grid)
  if len(n_grid) < 2:
    raise errors.DomainError('n_grid needs at least two sample sizes.')
  sums = parallel.ordered_map(
      lambda n: condition_A_sum(method, prior, b, n, t, delta_fn, strict,
                                regime), n_grid)
  return ConsistencyReport(b, n_grid, tuple(sums), _verdict(sums))


def threshold_delta_mix(r):
  """(1 - 1/r)(e r)^(1/(r-1)) - 1, for r > 1.

  A true model of dimension t = n / r is not recovered by the mixture
  Bayes factor when δ*_t0 lies below this value.
  """
  if not r > 1:
    raise errors.DomainError('r must exceed 1: %s' % r)
  return math.exp(math.log1p(-1.0 / r) + (1.0 + math.log(r)) / (r - 1.0)) - 1.0


def threshold_delta_ip(r):
  """(r - 1) / (r + 1)^((r-1)/r) - 1 for r > 1 and 1/log 2 - 1 at r = 1."""
  if not r >= 1:
    raise errors.DomainError('r must be at least 1: %s' % r)
  if r == 1:
    return 1.0 / math.log(2.0) - 1.0
  return (r - 1.0) / (r + 1.0) ** ((r - 1.0) / r) - 1.0
