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
"""Frequentist error rates of the rule "choose M_j iff Pr(M_j | y) >= 1/2".

With equal prior mass on M_0 and M_j the rule accepts M_j iff the Bayes
factor is at least one.  Every Bayes factor is strictly decreasing in b_j0,
so the rule is b_j0 <= b_star for a critical value b_star.

b_j0 = A / (A + B) with A = sse_j / sigma^2 ~ chi2(n - j - 1) and
B = (sse_0 - sse_j) / sigma^2 ~ chi2(j, lambda), lambda = 2 n δ_n(M_j, M_0).
So b_j0 is Beta((n - j - 1)/2, j/2) under M_0 and a beta with noncentral
second shape under M_j.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import math

from absl import logging
import numpy
from scipy import optimize
from scipy import special
from scipy import stats

from bvs import bayes_factors
from bvs import errors
from bvs import parallel
from bvs import quadrature

# Search interval for the critical value.
B_FLOOR = 1e-12
# Bisection runs on log(b); this bounds the relative error of b_star.
LOG_B_TOL = 1e-13

POISSON_TAIL = 1e-12
MAX_SERIES_TERMS = 100000


class CriticalRegion(
    collections.namedtuple('CriticalRegion',
                           ['method', 'n', 'j', 'b_star', 'empty'])):
  """Reject M_0 iff b_j0 <= b_star; empty when the rule never rejects."""
  __slots__ = ()


class ErrorCurvePoint(
    collections.namedtuple('ErrorCurvePoint',
                           ['n', 'j', 'method', 'b_star', 'type1', 'power',
                            'delta'])):
  __slots__ = ()


def critical_threshold(method, n, j, quad=quadrature.DEFAULT_SPEC):
  """Solves log BF(n, j, b) = 0 for b in [1e-12, 1].

  Args:
    method: A bayes_factors.Method.
    n: Sample size, n > j + 2.
    j: Dimension of the alternative model.
    quad: A QuadratureSpec for the integral Bayes factors.
  Returns:
    A CriticalRegion.  b_star is 1 when even b_j0 = 1 favours M_j, and the
    region is flagged empty with b_star = 0 when no b in range does.
  Raises:
    DomainError: If n <= j + 2.
  """
  method = bayes_factors.Method(method)
  if not n > j + 2:
    raise errors.DomainError('Need n > j + 2, got n=%s and j=%s' % (n, j))

  def log_bf(log_b):
    return bayes_factors.log_bf(method, n, j, math.exp(log_b), quad).log_value

  if log_bf(0.0) >= 0:
    return CriticalRegion(method, n, j, 1.0, False)
  lower = math.log(B_FLOOR)
  if log_bf(lower) < 0:
    logging.warning('The %s rule never rejects M_0 at n=%d, j=%d.',
                    method.value, n, j)
    return CriticalRegion(method, n, j, 0.0, True)
  root = optimize.bisect(log_bf, lower, 0.0, xtol=LOG_B_TOL, maxiter=200)
  return CriticalRegion(method, n, j, math.exp(root), False)


def _check_shapes(x, a, b):
  x = numpy.asarray(x, dtype=numpy.float64)
  if not numpy.all((x >= 0) & (x <= 1)):
    raise errors.DomainError('x must lie in [0, 1]: %s' % (x,))
  if not (a > 0 and b > 0):
    raise errors.DomainError('Shapes must be positive: a=%s, b=%s' % (a, b))
  return x


def incomplete_beta_cdf(x, a, b):
  """The regularized incomplete beta function I_x(a, b)."""
  x = _check_shapes(x, a, b)
  out = special.betainc(a, b, x)
  return float(out) if out.ndim == 0 else out


def noncentral_beta_cdf(x, a, b, lam):
  """CDF of a beta whose second shape carries noncentrality lam.

  Sums Poisson(m; lam/2) I_x(a, b + m) until the Poisson tail is below
  1e-12.

  Args:
    x: A value or array in [0, 1].
    a: First shape, > 0.
    b: Second shape, > 0.
    lam: Noncentrality, >= 0.
  Returns:
    The CDF at x.
  Raises:
    DomainError: On invalid arguments.
    SeriesNonConvergence: If more than 100000 terms would be needed.
  """
  x = _check_shapes(x, a, b)
  if not lam >= 0:
    raise errors.DomainError('lambda must be >= 0: %s' % lam)
  if lam == 0:
    return incomplete_beta_cdf(x, a, b)
  mean = 0.5 * lam
  last = int(stats.poisson.isf(POISSON_TAIL, mean)) + 1
  if last > MAX_SERIES_TERMS:
    raise errors.SeriesNonConvergence(
        'lambda=%g needs %d series terms, more than %d.' %
        (lam, last, MAX_SERIES_TERMS))
  m = numpy.arange(last + 1)
  weights = stats.poisson.pmf(m, mean)
  terms = special.betainc(a, b + m, x[..., None])
  out = numpy.clip(numpy.sum(weights * terms, axis=-1), 0.0, 1.0)
  return float(out) if out.ndim == 0 else out


def j_ratio_rule(ratio):
  """j = ceil(n / ratio)."""
  return lambda n: int(math.ceil(n / ratio))


def j_fixed_rule(j):
  return lambda n: j


def error_point(method, n, j, delta, quad=quadrature.DEFAULT_SPEC):
  """Type I error and power of one rule at pseudo-distance delta."""
  if j < 1:
    raise errors.DomainError('The alternative needs j >= 1, got %s' % j)
  region = critical_threshold(method, n, j, quad)
  a = 0.5 * (n - j - 1)
  b = 0.5 * j
  if region.empty:
    type1 = power = 0.0
  else:
    type1 = incomplete_beta_cdf(region.b_star, a, b)
    power = noncentral_beta_cdf(region.b_star, a, b, 2.0 * n * delta)
  return ErrorCurvePoint(n, j, region.method, region.b_star, type1, power,
                         delta)


def error_curves(method, n_grid, j_rule, delta, quad=quadrature.DEFAULT_SPEC):
  """Type I error and power along a grid of sample sizes.

  Args:
    method: A bayes_factors.Method.
    n_grid: Sample sizes.
    j_rule: Maps n to the alternative dimension j, with 1 <= j < n - 2.
    delta: The pseudo-distance δ_n(M_j, M_0) under the alternative.
    quad: A QuadratureSpec.
  Returns:
    A list of ErrorCurvePoint in grid order.
  """
  method = bayes_factors.Method(method)
  if not delta >= 0:
    raise errors.DomainError('delta must be >= 0: %s' % delta)
  return parallel.ordered_map(
      lambda n: error_point(method, n, j_rule(n), delta, quad), list(n_grid))
