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
"""Datasets, submodel fits and the residual-ratio statistic.

A model is identified by the subset of regressors it uses.  The intercept is
part of every model and never counted in the model dimension j, so the null
model M_0 is the empty subset.

Everything here works from orthogonal decompositions of the augmented design
[1 | X_subset]; hat matrices are never formed.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import csv
import io
import math

import numpy

from bvs import errors

RESPONSE_COLUMN = 'y'

# B_j0 needs SSE_0 on n - 1 >= 2 degrees of freedom.
MIN_OBSERVATIONS = 3

# Pivots of R below this fraction of the largest column norm mean the
# augmented design is rank deficient.
RANK_TOLERANCE = 1e-10

# Perfect fits are clamped here before anything takes a log.
MIN_BJ0 = 1e-300

# Upper bound on the number of doubles in one stacked QR batch.
_BATCH_ELEMENTS = 1 << 22


class Dataset(collections.namedtuple('Dataset', ['y', 'X', 'names'])):
  """A response vector and the n x k matrix of candidate regressors.

  The arrays are read only; the intercept column is implicit.
  """
  __slots__ = ()

  @property
  def n(self):
    return self.y.shape[0]

  @property
  def k(self):
    return self.X.shape[1]


class ModelSubset(collections.namedtuple('ModelSubset', ['indices'])):
  """A model, given as strictly increasing 1-based regressor indices."""
  __slots__ = ()

  def __new__(cls, indices=()):
    indices = tuple(int(i) for i in indices)
    for a, b in zip(indices, indices[1:]):
      if a >= b:
        raise errors.DomainError(
            'Subset indices must be strictly increasing: %s' % (indices,))
    if indices and indices[0] < 1:
      raise errors.DomainError('Subset indices start at 1: %s' % (indices,))
    return super(ModelSubset, cls).__new__(cls, indices)

  @classmethod
  def from_mask(cls, mask):
    """Builds the subset whose bit i-1 is set in mask for every index i."""
    indices = []
    i = 1
    while mask:
      if mask & 1:
        indices.append(i)
      mask >>= 1
      i += 1
    return cls(indices)

  @property
  def j(self):
    return len(self.indices)

  @property
  def mask(self):
    return sum(1 << (i - 1) for i in self.indices)

  def contains(self, other):
    """True if every regressor of other is also in this subset."""
    return set(other.indices).issubset(self.indices)

  def __str__(self):
    return '{%s}' % ','.join(str(i) for i in self.indices)


NULL_MODEL = ModelSubset(())


class FitSummary(collections.namedtuple('FitSummary', ['sse', 'sse0', 'b_j0'])):
  """Residual sums of squares of a submodel and of M_0 and their ratio."""
  __slots__ = ()


class TrueModel(
    collections.namedtuple('TrueModel', ['subset', 'beta', 'sigma'])):
  """The sampling model M_t: its subset, coefficients (intercept first), sd."""
  __slots__ = ()


def make_dataset(y, X, names=None):
  """Validates and freezes a response and regressor matrix into a Dataset.

  Args:
    y: The n responses.
    X: An n x k array of regressors, k may be 0.
    names: Optional regressor labels, defaults to x1..xk.
  Returns:
    A Dataset.
  Raises:
    EmptyDataset: If there are no observations.
    InsufficientDegreesOfFreedom: If there are fewer than MIN_OBSERVATIONS.
    DimensionMismatch: If the shapes disagree.
    NonFiniteValue: If a value is nan or infinite.
    ConstantRegressor: If a regressor is constant.
  """
  y = numpy.array(y, dtype=numpy.float64).reshape(-1)
  X = numpy.array(X, dtype=numpy.float64)
  if y.size == 0:
    raise errors.EmptyDataset('The dataset has no observations.')
  if y.size < MIN_OBSERVATIONS:
    raise errors.InsufficientDegreesOfFreedom(
        'Need at least %d observations, got %d' % (MIN_OBSERVATIONS, y.size))
  if X.ndim == 1 and X.size == 0:
    X = X.reshape(y.shape[0], 0)
  if X.ndim != 2 or X.shape[0] != y.shape[0]:
    raise errors.DimensionMismatch(
        'X must be n x k with n=%d, got shape %s' % (y.shape[0], X.shape))
  if names is None:
    names = tuple('x%d' % (i + 1) for i in range(X.shape[1]))
  names = tuple(names)
  if len(names) != X.shape[1]:
    raise errors.DimensionMismatch(
        'Expected %d regressor names, got %d' % (X.shape[1], len(names)))
  for row, col in zip(*numpy.nonzero(~numpy.isfinite(X))):
    raise errors.NonFiniteValue(int(row) + 1, names[col], X[row, col])
  for row in numpy.nonzero(~numpy.isfinite(y))[0]:
    raise errors.NonFiniteValue(int(row) + 1, RESPONSE_COLUMN, y[row])
  for col in range(X.shape[1]):
    if numpy.all(X[:, col] == X[0, col]):
      raise errors.ConstantRegressor(names[col])
  y.flags.writeable = False
  X.flags.writeable = False
  return Dataset(y, X, names)


def load_dataset(path, delimiter=','):
  """Reads a UTF-8 CSV with a header row and a `y` column.

  Every other column becomes a regressor, in file order.  Only plain decimal
  points are understood, and a leading byte-order mark is dropped.

  Args:
    path: The file to read.
    delimiter: The field separator.
  Returns:
    A Dataset.
  Raises:
    MissingResponseColumn: If no column is named y.
    NonFiniteValue: If a cell is not a finite real.
    EmptyDataset: If there are no data rows.
    MalformedCsv: If a row has the wrong number of cells.
    ConstantRegressor: If a regressor column is constant.
  """
  with io.open(path, 'r', encoding='utf-8-sig', newline='') as f:
    rows = [r for r in csv.reader(f, delimiter=delimiter) if r]
  if not rows:
    raise errors.EmptyDataset('No header row in %s' % path)
  header = [h.strip() for h in rows[0]]
  if RESPONSE_COLUMN not in header:
    raise errors.MissingResponseColumn(
        'No column named %r in %s: %s' % (RESPONSE_COLUMN, path, header))
  body = rows[1:]
  if not body:
    raise errors.EmptyDataset('No data rows in %s' % path)
  values = numpy.empty((len(body), len(header)))
  for i, row in enumerate(body):
    if len(row) != len(header):
      raise errors.MalformedCsv('Row %d has %d cells, expected %d' %
                                (i + 1, len(row), len(header)))
    for c, cell in enumerate(row):
      values[i, c] = _parse_cell(cell, i + 1, header[c])
  response = header.index(RESPONSE_COLUMN)
  others = [c for c in range(len(header)) if c != response]
  return make_dataset(values[:, response], values[:, others],
                      [header[c] for c in others])


def _parse_cell(text, row, col):
  try:
    value = float(text.strip())
  except ValueError:
    raise errors.NonFiniteValue(row, col, text)
  if not math.isfinite(value):
    raise errors.NonFiniteValue(row, col, text)
  return value


def _check_subset(dataset, subset):
  if subset.indices and subset.indices[-1] > dataset.k:
    raise errors.DimensionMismatch(
        'Subset %s uses regressors beyond k=%d' % (subset, dataset.k))
  if dataset.n <= subset.j + 1:
    raise errors.InsufficientDegreesOfFreedom(
        'Need n > j + 1 to fit %s, got n=%d' % (subset, dataset.n))


def _augmented(X, columns):
  """Returns [1 | X[:, columns]] stacked along a leading batch axis."""
  columns = numpy.asarray(columns, dtype=numpy.intp)
  block = numpy.moveaxis(X[:, columns], 0, -2)  # (m, n, j)
  ones = numpy.ones(block.shape[:-1] + (1,))
  return numpy.concatenate([ones, block], axis=-1)


def _orthonormal_basis(design, labels):
  """QR of a stack of designs, rejecting rank deficient members."""
  q, r = numpy.linalg.qr(design)
  pivots = numpy.abs(numpy.diagonal(r, axis1=-2, axis2=-1))
  scale = numpy.sqrt(numpy.sum(design * design, axis=-2)).max(axis=-1)
  bad = numpy.any(pivots < RANK_TOLERANCE * scale[..., None], axis=-1)
  if numpy.any(bad):
    raise errors.RankDeficient(
        'The augmented design of %s is rank deficient.' %
        labels(int(numpy.argmax(bad))))
  return q


def _project_out(q, v):
  """Returns v - Q Q'v for each basis in the stack q."""
  coef = numpy.einsum('...ni,...n->...i', q, v)
  return v - numpy.einsum('...ni,...i->...n', q, coef)


def residual_sum(dataset, subset):
  """Returns y'(I - H_j)y for the submodel with the given regressors.

  Args:
    dataset: The Dataset.
    subset: A ModelSubset.
  Returns:
    The residual sum of squares, >= 0.
  Raises:
    RankDeficient: If [1 | X_subset] is not of full column rank.
    InsufficientDegreesOfFreedom: If n <= j + 1.
  """
  _check_subset(dataset, subset)
  design = _augmented(dataset.X, [i - 1 for i in subset.indices])
  q = _orthonormal_basis(design[None], lambda _: subset)
  resid = _project_out(q[0], dataset.y)
  return float(resid.dot(resid))


def residual_sums(dataset, subsets):
  """Residual sums of squares for many subsets of one common size.

  Subsets are decomposed in stacked batches, so this is the fast path for
  enumerating a model space.

  Args:
    dataset: The Dataset.
    subsets: A sequence of ModelSubsets that all have the same j.
  Returns:
    A float array with one residual sum per subset.
  Raises:
    ValueError: If the subsets differ in size.
    RankDeficient: If any augmented design is rank deficient.
    InsufficientDegreesOfFreedom: If n <= j + 1.
  """
  subsets = list(subsets)
  if not subsets:
    return numpy.zeros(0)
  j = subsets[0].j
  if any(s.j != j for s in subsets):
    raise ValueError('All subsets must have the same size.')
  for s in subsets:
    _check_subset(dataset, s)
  columns = numpy.array([[i - 1 for i in s.indices] for s in subsets],
                        dtype=numpy.intp).reshape(len(subsets), j)
  step = max(1, _BATCH_ELEMENTS // (dataset.n * (j + 1)))
  out = numpy.empty(len(subsets))
  for start in range(0, len(subsets), step):
    chunk = columns[start:start + step]
    design = _augmented(dataset.X, chunk)
    q = _orthonormal_basis(design, lambda i, s=start: subsets[s + i])
    resid = _project_out(q, dataset.y)
    out[start:start + len(chunk)] = numpy.einsum('mn,mn->m', resid, resid)
  return out


def centered_sum(dataset):
  """Residual sum of squares of the intercept-only model M_0."""
  centered = dataset.y - dataset.y.mean()
  return float(centered.dot(centered))


def _sse0(dataset):
  sse0 = centered_sum(dataset)
  floor = numpy.finfo(numpy.float64).eps ** 2 * dataset.n * float(
      numpy.max(dataset.y * dataset.y))
  if sse0 <= floor:
    raise errors.ConstantResponse(
        'The response is constant; B_j0 is undefined.')
  return sse0


def compute_bj0(dataset, subset):
  """Fits a submodel and returns its residual ratio against M_0.

  Args:
    dataset: The Dataset.
    subset: A ModelSubset.
  Returns:
    A FitSummary with b_j0 = sse / sse0 clamped to [MIN_BJ0, 1]; exactly 1
    for the empty subset.
  Raises:
    ConstantResponse: If the response has no variation.
  """
  sse0 = _sse0(dataset)
  if not subset.indices:
    _check_subset(dataset, subset)
    return FitSummary(sse0, sse0, 1.0)
  sse = residual_sum(dataset, subset)
  return FitSummary(sse, sse0, min(max(sse / sse0, MIN_BJ0), 1.0))


def bj0_values(dataset, subsets):
  """Vectorized b_j0 for equal-size subsets, clamped like compute_bj0."""
  subsets = list(subsets)
  sse0 = _sse0(dataset)
  if subsets and subsets[0].j == 0:
    return numpy.ones(len(subsets))
  return numpy.clip(residual_sums(dataset, subsets) / sse0, MIN_BJ0, 1.0)


def _true_design(dataset, true_model):
  beta = numpy.asarray(true_model.beta, dtype=numpy.float64).reshape(-1)
  if beta.shape[0] != true_model.subset.j + 1:
    raise errors.DimensionMismatch(
        'beta must hold the intercept and %d coefficients, got %d values' %
        (true_model.subset.j, beta.shape[0]))
  if not true_model.sigma > 0:
    raise errors.DomainError('sigma must be positive: %s' % true_model.sigma)
  _check_subset(dataset, true_model.subset)
  return _augmented(dataset.X, [i - 1 for i in true_model.subset.indices]), beta


def pseudo_distance(dataset, true_model, other):
  """The finite-sample pseudo-distance δ_n(M_t, M_j).

  δ_n = β_t' X_t'(I - H_j) X_t β_t / (2 n σ_t²), where X_t carries the
  intercept column of the true model's design.

  Args:
    dataset: The Dataset supplying the regressors.
    true_model: A TrueModel.
    other: The ModelSubset of M_j.
  Returns:
    δ_n >= 0; exactly 0 when other equals the true subset.
  Raises:
    DimensionMismatch: If beta does not match the true subset.
    RankDeficient: If the design of other is rank deficient.
  """
  design_t, beta = _true_design(dataset, true_model)
  if other == true_model.subset:
    return 0.0
  _check_subset(dataset, other)
  mean = design_t.dot(beta)
  design_j = _augmented(dataset.X, [i - 1 for i in other.indices])
  q = _orthonormal_basis(design_j[None], lambda _: other)
  resid = _project_out(q[0], mean)
  return float(resid.dot(resid)) / (2.0 * dataset.n * true_model.sigma ** 2)


def regressor_covariance(dataset):
  """The centred (1/n) covariance of the regressors, k x k."""
  centered = dataset.X - dataset.X.mean(axis=0)
  return centered.T.dot(centered) / dataset.n


def pseudo_distance_from_covariance(covariance, true_model, other):
  """δ(M_t, M_j) from a regressor covariance via a Schur complement.

  With S the covariance of the joint covariates,
  δ = β' (S_tt - S_tj S_jj⁻¹ S_jt) β / (2σ²) where β excludes the intercept.
  Passing a population covariance gives the limit δ*; passing
  regressor_covariance(dataset) reproduces pseudo_distance.

  Args:
    covariance: A k x k positive definite covariance.
    true_model: A TrueModel; its intercept is ignored.
    other: The ModelSubset of M_j.
  Returns:
    δ >= 0.
  Raises:
    DimensionMismatch: If beta or the indices do not fit the covariance.
  """
  covariance = numpy.asarray(covariance, dtype=numpy.float64)
  k = covariance.shape[0]
  if covariance.shape != (k, k):
    raise errors.DimensionMismatch('covariance must be square: %s' %
                                   (covariance.shape,))
  beta = numpy.asarray(true_model.beta, dtype=numpy.float64).reshape(-1)
  t = true_model.subset
  if beta.shape[0] != t.j + 1:
    raise errors.DimensionMismatch(
        'beta must hold the intercept and %d coefficients, got %d values' %
        (t.j, beta.shape[0]))
  for s in (t, other):
    if s.indices and s.indices[-1] > k:
      raise errors.DimensionMismatch('Subset %s exceeds k=%d' % (s, k))
  if not true_model.sigma > 0:
    raise errors.DomainError('sigma must be positive: %s' % true_model.sigma)
  if other == t:
    return 0.0
  ti = numpy.array(t.indices, dtype=numpy.intp) - 1
  oi = numpy.array(other.indices, dtype=numpy.intp) - 1
  s_tt = covariance[numpy.ix_(ti, ti)]
  if oi.size:
    s_tj = covariance[numpy.ix_(ti, oi)]
    s_jj = covariance[numpy.ix_(oi, oi)]
    s_tt = s_tt - s_tj.dot(numpy.linalg.solve(s_jj, s_tj.T))
  slopes = beta[1:]
  value = slopes.dot(s_tt).dot(slopes) / (2.0 * true_model.sigma ** 2)
  return max(float(value), 0.0)
