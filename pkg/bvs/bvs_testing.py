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
"""Test class for bvs."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import io
import os

from absl.testing import absltest
import numpy

from bvs import regression


class BvsTestCase(absltest.TestCase):
  """Contains shared setUp and convenience methods.

  This adds the following attributes to self:

  self.rng: a numpy Generator seeded per test.
  """

  SEED = 20150101

  def setUp(self):
    super(BvsTestCase, self).setUp()
    self.rng = numpy.random.default_rng(self.SEED)

  def MakeDataset(self, n, k, true_indices=(1,), beta=None, sigma=1.0):
    """Independent standard normal regressors and a linear response."""
    X = self.rng.standard_normal((n, k))
    if beta is None:
      beta = [0.0] + [1.0] * len(true_indices)
    columns = [i - 1 for i in true_indices]
    y = (beta[0] + X[:, columns].dot(numpy.asarray(beta[1:])) +
         sigma * self.rng.standard_normal(n))
    return regression.make_dataset(y, X)

  def NormalEquationsSse(self, dataset, indices):
    """Residual sum of squares solved through X'X b = X'y as an oracle."""
    design = numpy.column_stack(
        [numpy.ones(dataset.n)] + [dataset.X[:, i - 1] for i in indices])
    coef = numpy.linalg.solve(design.T.dot(design), design.T.dot(dataset.y))
    resid = dataset.y - design.dot(coef)
    return float(resid.dot(resid))

  def WriteCsv(self, text, name='data.csv'):
    """Writes text to a fresh file and returns its path."""
    path = os.path.join(self.create_tempdir().full_path, name)
    with io.open(path, 'w', encoding='utf-8') as f:
      f.write(text)
    return path

  def WriteDataset(self, dataset, name='data.csv'):
    header = [regression.RESPONSE_COLUMN] + list(dataset.names)
    lines = [','.join(header)]
    for yi, row in zip(dataset.y, dataset.X):
      lines.append(','.join('%.17g' % v for v in [yi] + list(row)))
    return self.WriteCsv('\n'.join(lines) + '\n', name)
