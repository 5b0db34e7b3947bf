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
"""Bayes factors of a submodel M_j against the null model M_0.

All three Bayes factors depend on the data only through the residual ratio
b_j0, so every function here takes (n, j, b_j0):

* GN: the g-prior with g = n, closed form.
* MIX: the inverse-gamma(1/2, n/2) mixture of g-priors, one integral.
* IP: the intrinsic priors, one integral over an angle.
* SCHWARZ: the large-sample form shared by all of them when k is bounded.

Values are natural logs.  `log_bf_approx` gives the large-n approximations in
the two growth regimes of k, k = O(n^b) with b < 1 or b = 1.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import enum
import math

import numpy
from scipy import special

from bvs import errors
from bvs import quadrature

# exp() of a log Bayes factor is reported only below this magnitude.
MAX_EXP = 700.0


class Method(enum.Enum):
  GN = 'gn'
  MIX = 'mix'
  IP = 'ip'
  SCHWARZ = 'schwarz'


class Regime(enum.Enum):
  """Growth of the number of candidate regressors, k = O(n^b)."""
  B_LT_1 = 'blt1'
  B_EQ_1 = 'beq1'


class Mode(enum.Enum):
  EXACT = 'exact'
  APPROX_B_LT_1 = 'approx_blt1'
  APPROX_B_EQ_1 = 'approx_beq1'


_REGIME_MODE = {Regime.B_LT_1: Mode.APPROX_B_LT_1,
                Regime.B_EQ_1: Mode.APPROX_B_EQ_1}


class LogBayesFactor(
    collections.namedtuple('LogBayesFactor',
                           ['log_value', 'method', 'mode', 'n', 'j', 'b_j0'])):
  """A log Bayes factor of M_j versus M_0 and how it was obtained."""
  __slots__ = ()

  @property
  def value(self):
    """The Bayes factor itself, or None when it would overflow."""
    if abs(self.log_value) < MAX_EXP:
      return math.exp(self.log_value)
    return None


def _check(n, j, b_j0, min_df):
  """Validates 0 < b_j0 <= 1 and, unless min_df is None, n > j + min_df."""
  if j < 0 or int(j) != j:
    raise errors.DomainError('j must be a non-negative integer: %s' % j)
  if min_df is not None and not n > j + min_df:
    raise errors.DomainError('Need n > j + %d, got n=%s and j=%s' %
                             (min_df, n, j))
  b = numpy.asarray(b_j0, dtype=numpy.float64)
  if not numpy.all((b > 0) & (b <= 1)):
    raise errors.DomainError('b_j0 must lie in (0, 1]: %s' % (b_j0,))
  return b


def _gn(n, j, b):
  return 0.5 * (n - j - 1) * math.log1p(n) - 0.5 * (n - 1) * numpy.log1p(n * b)


def _schwarz(n, j, b):
  return -0.5 * j * math.log(n) - 0.5 * n * numpy.log(b)


def _mix(n, j, b, spec):
  """Integrates in u = log g, the logit of s for g = s / (1 - s)."""
  a = 0.5 * (n - j - 1)
  c = 0.5 * (n - 1)

  def log_integrand(u, log_b):
    return (a * numpy.logaddexp(0.0, u) - c * numpy.logaddexp(0.0, u + log_b)
            - 0.5 * u - 0.5 * n * numpy.exp(-u))

  log_b = numpy.log(numpy.atleast_1d(b))
  lower = math.log(0.5 * n) - 10.0
  upper = -log_b + math.log(n) + 120.0
  log_int = quadrature.log_integrate(log_integrand, lower, upper, (log_b,),
                                     spec)
  return 0.5 * math.log(0.5 * n) - special.gammaln(0.5) + log_int


def _ip(n, j, b, spec):
  """Integrates in psi = log tan(phi) so both endpoints go to infinity."""
  a = 0.5 * (n - j - 1)
  c = 0.5 * (n - 1)
  log_n = math.log(n)
  log_j2 = math.log(j + 2)

  def log_integrand(psi, log_nb):
    log_cosh = numpy.logaddexp(0.0, 2.0 * psi)
    log_sin = psi - 0.5 * log_cosh
    log_s2 = log_j2 + 2.0 * log_sin
    return (j * log_sin + a * numpy.logaddexp(log_n, log_s2) -
            c * numpy.logaddexp(log_nb, log_s2) + psi - log_cosh)

  log_b = numpy.log(numpy.atleast_1d(b))
  lower = 0.5 * log_b - 60.0
  log_int = quadrature.log_integrate(log_integrand, lower, 60.0,
                                     (log_n + log_b,), spec)
  return math.log(2.0 / math.pi) + 0.5 * j * log_j2 + log_int


def log_bf_gn(n, j, b_j0):
  """Exact log Bayes factor under the g-prior with g = n.

  Args:
    n: Sample size, n > j + 1.
    j: Model dimension.
    b_j0: Residual ratio in (0, 1].
  Returns:
    A LogBayesFactor.
  Raises:
    DomainError: On violated preconditions.
  """
  b = _check(n, j, b_j0, 1)
  return LogBayesFactor(float(_gn(n, j, b)), Method.GN, Mode.EXACT, n, j,
                        float(b))


def log_bf_mix(n, j, b_j0, quad=quadrature.DEFAULT_SPEC):
  """Exact log Bayes factor under the mixture of g-priors.

  Args:
    n: Sample size, n > j + 2.
    j: Model dimension.
    b_j0: Residual ratio in (0, 1].
    quad: A QuadratureSpec.
  Returns:
    A LogBayesFactor.
  Raises:
    DomainError: On violated preconditions.
    QuadratureNonConvergence: If the integral does not converge.
  """
  b = _check(n, j, b_j0, 2)
  return LogBayesFactor(float(_mix(n, j, b, quad)[0]), Method.MIX, Mode.EXACT,
                        n, j, float(b))


def log_bf_ip(n, j, b_j0, quad=quadrature.DEFAULT_SPEC):
  """Exact log Bayes factor under the intrinsic priors.

  Args:
    n: Sample size, n > j + 1.
    j: Model dimension.
    b_j0: Residual ratio in (0, 1].
    quad: A QuadratureSpec.
  Returns:
    A LogBayesFactor.
  Raises:
    DomainError: On violated preconditions.
    QuadratureNonConvergence: If the integral does not converge.
  """
  b = _check(n, j, b_j0, 1)
  return LogBayesFactor(float(_ip(n, j, b, quad)[0]), Method.IP, Mode.EXACT,
                        n, j, float(b))


def log_bf_schwarz(n, j, b_j0):
  """The Schwarz form -(j/2) log n - (n/2) log b_j0."""
  if not n > 1:
    raise errors.DomainError('Need n > 1, got n=%s' % n)
  b = _check(n, j, b_j0, None)
  return LogBayesFactor(float(_schwarz(n, j, b)), Method.SCHWARZ, Mode.EXACT,
                        n, j, float(b))


def _approx(method, regime, n, j, b):
  log_b = numpy.log(b)
  if method is Method.GN:
    correction = 1.0 - 1.0 / b
    if regime is Regime.B_EQ_1:
      correction = correction - j / n
    return -0.5 * j * math.log(n) - 0.5 * n * log_b + 0.5 * correction
  if method is Method.MIX:
    value = (-0.5 * j * math.log(0.5 * n) - 0.5 * (n - j - 2) * log_b +
             special.gammaln(0.5 * (j + 1)) - special.gammaln(0.5))
    if regime is Regime.B_EQ_1:
      value = value - 0.5 * (j + 1) * numpy.log1p(j * b / n)
    return value
  if method is Method.IP:
    if regime is Regime.B_LT_1:
      return (-0.5 * j * math.log(n / (j + 2)) - 0.5 * (n - 1) * log_b +
              0.5 * (j + 2) * (1.0 - 1.0 / b))
    return (0.5 * (n - j - 1) * math.log1p(n / (j + 2)) -
            0.5 * (n - 1) * numpy.log1p(n * b / (j + 2)))
  raise errors.DomainError('No large-sample approximation for %s' % method)


def log_bf_approx(method, regime, n, j, b_j0):
  """Large-n approximation of a Bayes factor in the given growth regime.

  Args:
    method: Method.GN, Method.MIX or Method.IP.
    regime: A Regime; the caller decides which growth rate of k applies.
    n: Sample size, n > j + 2.
    j: Model dimension.
    b_j0: Residual ratio in (0, 1].
  Returns:
    A LogBayesFactor whose mode records the regime.
  Raises:
    DomainError: On violated preconditions or an unsupported method.
  """
  method = Method(method)
  regime = Regime(regime)
  b = _check(n, j, b_j0, 2)
  return LogBayesFactor(float(_approx(method, regime, n, j, b)), method,
                        _REGIME_MODE[regime], n, j, float(b))


def log_bf(method, n, j, b_j0, quad=quadrature.DEFAULT_SPEC, regime=None):
  """Dispatches to the exact Bayes factor, or the approximation for regime."""
  method = Method(method)
  if regime is not None:
    return log_bf_approx(method, regime, n, j, b_j0)
  if method is Method.GN:
    return log_bf_gn(n, j, b_j0)
  if method is Method.MIX:
    return log_bf_mix(n, j, b_j0, quad)
  if method is Method.IP:
    return log_bf_ip(n, j, b_j0, quad)
  return log_bf_schwarz(n, j, b_j0)


def log_bf_values(method, n, j, b_values, quad=quadrature.DEFAULT_SPEC,
                  regime=None):
  """Log Bayes factors for many residual ratios of one (n, j) class.

  The integrals of a class are evaluated in one vectorized quadrature pass,
  which is what makes exhaustive enumeration affordable.

  Args:
    method: A Method.
    n: Sample size.
    j: Model dimension shared by all values.
    b_values: An array of residual ratios in (0, 1].
    quad: A QuadratureSpec.
    regime: Optional Regime selecting the large-n approximation.
  Returns:
    A float array of log Bayes factors, same shape as b_values.
  """
  method = Method(method)
  b = numpy.asarray(b_values, dtype=numpy.float64)
  if b.size == 0:
    return numpy.zeros(b.shape)
  flat = b.reshape(-1)
  if regime is not None:
    _check(n, j, flat, 2)
    out = _approx(method, Regime(regime), n, j, flat)
  elif method is Method.GN:
    _check(n, j, flat, 1)
    out = _gn(n, j, flat)
  elif method is Method.MIX:
    _check(n, j, flat, 2)
    out = _mix(n, j, flat, quad)
  elif method is Method.IP:
    _check(n, j, flat, 1)
    out = _ip(n, j, flat, quad)
  else:
    if not n > 1:
      raise errors.DomainError('Need n > 1, got n=%s' % n)
    _check(n, j, flat, None)
    out = _schwarz(n, j, flat)
  return numpy.asarray(out, dtype=numpy.float64).reshape(b.shape)


class ChangeOfVariableCheck(
    collections.namedtuple('ChangeOfVariableCheck',
                           ['numerical', 'closed_form'])):
  """Log of the y = exp(-n/(2g)) integral, by quadrature and in closed form."""
  __slots__ = ()


def mix_change_of_variable_integral(n, j, b_j0,
                                    quad=quadrature.DEFAULT_SPEC):
  """The intermediate integral behind the mixture approximation.

  Substituting y = exp(-n/(2g)) in the mixture integral and keeping the
  leading terms leaves

    I = int_0^1 y^(1/b - 1 + j/n) (-1/log y)^((1-j)/2) dy
      = b^((j+1)/2) (1 + j b/n)^(-(j+1)/2) Gamma((j+1)/2).

  Both sides are returned so the approximation can be checked against a
  direct evaluation.

  Args:
    n: Sample size.
    j: Model dimension.
    b_j0: Residual ratio in (0, 1].
    quad: A QuadratureSpec.
  Returns:
    A ChangeOfVariableCheck of log values.
  """
  b = float(_check(n, j, b_j0, 2))
  rate = 1.0 / b + j / n
  shape = 0.5 * (j + 1)

  # With y = exp(-e^w) the integrand is exp(shape * w - rate * e^w).
  def log_integrand(w):
    return shape * w - rate * numpy.exp(w)

  mode = math.log(shape / rate)
  numerical = quadrature.log_integrate(log_integrand, mode - 60.0 / shape - 5.0,
                                       mode + 6.0, (), quad)[0]
  closed = (shape * math.log(b) - shape * math.log1p(j * b / n) +
            special.gammaln(shape))
  return ChangeOfVariableCheck(float(numerical), float(closed))
