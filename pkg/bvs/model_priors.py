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
"""Prior mass over the 2^k models built from k candidate regressors.

All priors here are exchangeable: the mass of a model depends only on its
dimension j, never on which regressors it uses.
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


class PriorKind(enum.Enum):
  BERNOULLI = 'bernoulli'
  HIERARCHICAL_UNIFORM = 'hu'
  UNIFORM = 'uniform'


class ModelPrior(collections.namedtuple('ModelPrior', ['kind', 'theta'])):
  """A model prior; theta is the inclusion probability of BERNOULLI."""
  __slots__ = ()

  def __new__(cls, kind, theta=None):
    kind = PriorKind(kind)
    if kind is PriorKind.BERNOULLI:
      if theta is None or not 0.0 < theta < 1.0:
        raise errors.DomainError(
            'Bernoulli theta must lie strictly inside (0, 1): %s' % theta)
      theta = float(theta)
    elif theta is not None:
      raise errors.DomainError('Only the Bernoulli prior takes theta.')
    return super(ModelPrior, cls).__new__(cls, kind, theta)

  @classmethod
  def bernoulli(cls, theta):
    return cls(PriorKind.BERNOULLI, theta)

  @classmethod
  def hierarchical_uniform(cls):
    return cls(PriorKind.HIERARCHICAL_UNIFORM)

  @classmethod
  def uniform(cls):
    return cls(PriorKind.UNIFORM)

  def __str__(self):
    return format_prior(self)


def log_binomial(k, j):
  """log C(k, j) through log-gamma, for scalars or arrays."""
  return special.gammaln(k + 1) - special.gammaln(j + 1) - special.gammaln(
      k - j + 1)


def _check(j, k):
  if int(k) != k or k < 0:
    raise errors.DomainError('k must be a non-negative integer: %s' % k)
  j = numpy.asarray(j)
  if not numpy.all((j >= 0) & (j <= k) & (j == numpy.floor(j))):
    raise errors.DomainError('Need integer 0 <= j <= k=%d, got %s' % (k, j))
  return j


def _log_prior(prior, j, k):
  if prior.kind is PriorKind.BERNOULLI:
    return j * math.log(prior.theta) + (k - j) * math.log1p(-prior.theta)
  if prior.kind is PriorKind.HIERARCHICAL_UNIFORM:
    return -log_binomial(k, j) - math.log(k + 1)
  return numpy.zeros(numpy.shape(j)) - k * math.log(2.0)


def log_prior(prior, j, k):
  """Log prior mass of one model of dimension j among k regressors.

  Args:
    prior: A ModelPrior.
    j: The model dimension.
    k: The number of candidate regressors.
  Returns:
    The log mass.
  Raises:
    DomainError: Unless 0 <= j <= k.
  """
  j = _check(j, k)
  return float(_log_prior(prior, j, k))


def log_prior_ratio(prior, j, t, k):
  """log pi(M_j) - log pi(M_t) for models of dimensions j and t."""
  _check(j, k)
  _check(t, k)
  if prior.kind is PriorKind.BERNOULLI:
    return (j - t) * (math.log(prior.theta) - math.log1p(-prior.theta))
  if prior.kind is PriorKind.HIERARCHICAL_UNIFORM:
    return float(log_binomial(k, t) - log_binomial(k, j))
  return 0.0


def log_prior_by_dimension(prior, k):
  """Log mass of a single model of each dimension 0..k, as an array."""
  _check(0, k)
  return numpy.asarray(_log_prior(prior, numpy.arange(k + 1.0), k),
                       dtype=numpy.float64)


def dimension_distribution(prior, k):
  """Probabilities of the model dimension j = 0..k induced by the prior.

  Multiplies the per model mass by the C(k, j) models of each dimension.  Under
  BERNOULLI(theta) this is Binomial(k, theta), so j / k concentrates around
  theta as k grows.

  Args:
    prior: A ModelPrior.
    k: The number of candidate regressors.
  Returns:
    An array of k + 1 probabilities summing to one.
  """
  j = numpy.arange(k + 1.0)
  return numpy.exp(log_prior_by_dimension(prior, k) + log_binomial(k, j))


def parse_prior(text):
  """Parses `bernoulli:THETA`, `hu` or `uniform`.

  Args:
    text: The prior description.
  Returns:
    A ModelPrior.
  Raises:
    DomainError: If the text does not describe a prior.
  """
  name, _, arg = text.strip().lower().partition(':')
  if name == PriorKind.BERNOULLI.value:
    try:
      theta = float(arg)
    except ValueError:
      raise errors.DomainError(
          'Expected bernoulli:THETA with a number, got %r' % text)
    return ModelPrior.bernoulli(theta)
  if arg:
    raise errors.DomainError('Prior %r takes no argument.' % name)
  if name in (PriorKind.HIERARCHICAL_UNIFORM.value, 'hierarchical_uniform'):
    return ModelPrior.hierarchical_uniform()
  if name == PriorKind.UNIFORM.value:
    return ModelPrior.uniform()
  raise errors.DomainError(
      'Unknown prior %r; use bernoulli:THETA, hu or uniform.' % text)


def format_prior(prior):
  if prior.kind is PriorKind.BERNOULLI:
    return '%s:%r' % (prior.kind.value, prior.theta)
  return prior.kind.value
