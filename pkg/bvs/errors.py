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
"""Exceptions raised by bvs.

There are three families and the command line maps each to an exit code:

* DataError: the input data cannot be used (exit 3).
* DomainError: a numeric argument is outside its domain (exit 2).
* NumericalError: a computation did not converge (exit 4).

Every class also derives from the closest builtin so that existing
`except ValueError` handlers keep working.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function


class BvsError(Exception):
  """Base class for all bvs errors."""


class DataError(BvsError, ValueError):
  """The dataset or a submodel of it is unusable."""


class MissingResponseColumn(DataError):
  pass


class MalformedCsv(DataError):
  pass


class EmptyDataset(DataError):
  pass


class NonFiniteValue(DataError):
  """A cell did not parse as a finite real."""

  def __init__(self, row, col, text=None):
    self.row = row
    self.col = col
    super(NonFiniteValue, self).__init__(
        'Non-finite value at row %d, column %s: %r' % (row, col, text))


class ConstantRegressor(DataError):
  """A regressor column is collinear with the intercept."""

  def __init__(self, name):
    self.name = name
    super(ConstantRegressor, self).__init__(
        'Regressor %s is constant and collinear with the intercept.' % name)


class RankDeficient(DataError):
  pass


class InsufficientDegreesOfFreedom(DataError):
  pass


class ConstantResponse(DataError):
  pass


class DimensionMismatch(DataError):
  pass


class DomainError(BvsError, ValueError):
  """A numeric argument violates the operation's preconditions."""


class EnumerationCapExceeded(DomainError):

  def __init__(self, k, cap):
    self.k = k
    self.cap = cap
    super(EnumerationCapExceeded, self).__init__(
        'Cannot enumerate 2^%d models: k exceeds the enumeration cap of %d.' %
        (k, cap))


class NumericalError(BvsError, ArithmeticError):
  """A numerical procedure failed to reach its tolerance."""


class QuadratureNonConvergence(NumericalError):
  pass


class SeriesNonConvergence(NumericalError):
  pass
