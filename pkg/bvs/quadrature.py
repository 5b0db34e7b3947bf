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
"""Log-domain adaptive quadrature for sharply peaked one-dimensional integrands.

The integrands of the Bayes factors have exponents of order n, so they are
only ever handled through their logarithm.  An integral is computed for a
whole batch of parameter rows at once:

1. A coarse scan over a caller supplied range locates, for every row, the
   interval on which the log integrand is within `SUPPORT_WINDOW` of its peak.
2. Composite Gauss-Legendre rules on that interval are doubled in panel count
   until successive log values agree to the requested relative tolerance.

The integrand is assumed unimodal in the integration variable, which holds
for every transformed integrand used in this package.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import functools

from absl import logging
import numpy
from scipy import special

from bvs import errors

# Mass more than exp(-SUPPORT_WINDOW) below the peak is ignored.
SUPPORT_WINDOW = 50.0
GAUSS_ORDER = 10


class QuadratureSpec(
    collections.namedtuple('QuadratureSpec',
                           ['rel_tol', 'max_refinements', 'initial_panels'])):
  """Convergence controls for log_integrate.

  Attributes:
    rel_tol: Successive log values L must agree to rel_tol * max(1, |L|).
    max_refinements: How many times the panel count may be doubled.
    initial_panels: Panels in the first composite rule.
  """
  __slots__ = ()

  def __new__(cls, rel_tol=1e-10, max_refinements=20, initial_panels=64):
    if not rel_tol > 0:
      raise errors.DomainError('rel_tol must be positive: %s' % rel_tol)
    if int(max_refinements) < 1:
      raise errors.DomainError(
          'max_refinements must be at least 1: %s' % max_refinements)
    if int(initial_panels) < 1:
      raise errors.DomainError(
          'initial_panels must be at least 1: %s' % initial_panels)
    return super(QuadratureSpec, cls).__new__(
        cls, float(rel_tol), int(max_refinements), int(initial_panels))


DEFAULT_SPEC = QuadratureSpec()


@functools.lru_cache(maxsize=None)
def _panel_rule(panels):
  """Nodes in [0, 1] and log weights of a composite Gauss-Legendre rule."""
  x, w = special.roots_legendre(GAUSS_ORDER)
  starts = numpy.arange(panels)[:, None]
  nodes = ((starts + 0.5 * (x + 1.0)) / panels).reshape(-1)
  weights = numpy.tile(0.5 * w / panels, panels)
  nodes.flags.writeable = False
  return nodes, numpy.log(weights)


def _rows(params, index):
  return tuple(p[index][:, None] for p in params)


def _support(log_integrand, lower, upper, params, scan_step):
  """Per row [lo, hi] outside of which the integrand is negligible."""
  points = int(numpy.ceil(numpy.max(upper - lower) / scan_step)) + 1
  grid = numpy.linspace(0.0, 1.0, max(points, 3))
  x = lower[:, None] + (upper - lower)[:, None] * grid
  with numpy.errstate(over='ignore', invalid='ignore', divide='ignore'):
    values = log_integrand(x, *_rows(params, slice(None)))
  values = numpy.broadcast_to(values, x.shape)
  if numpy.any(numpy.isnan(values)):
    raise errors.QuadratureNonConvergence(
        'The log integrand is not a number on the scan grid.')
  peak = values.max(axis=1)
  keep = values >= (peak - SUPPORT_WINDOW)[:, None]
  first = numpy.argmax(keep, axis=1)
  last = keep.shape[1] - 1 - numpy.argmax(keep[:, ::-1], axis=1)
  first = numpy.maximum(first - 1, 0)
  last = numpy.minimum(last + 1, keep.shape[1] - 1)
  rows = numpy.arange(x.shape[0])
  return x[rows, first], x[rows, last], numpy.isfinite(peak)


def _estimate(log_integrand, lo, hi, params, panels):
  nodes, log_w = _panel_rule(panels)
  width = hi - lo
  x = lo[:, None] + width[:, None] * nodes
  with numpy.errstate(over='ignore', invalid='ignore', divide='ignore'):
    values = log_integrand(x, *params)
  values = numpy.broadcast_to(values, x.shape)
  if numpy.any(numpy.isnan(values)):
    raise errors.QuadratureNonConvergence(
        'The log integrand is not a number at a quadrature node.')
  return special.logsumexp(values + log_w, axis=1) + numpy.log(width)


def log_integrate(log_integrand, lower, upper, params=(), spec=DEFAULT_SPEC,
                  scan_step=0.5):
  """Returns log of the integral of exp(log_integrand) for a batch of rows.

  Args:
    log_integrand: Called as log_integrand(x, *cols) where x has shape
      (rows, nodes) and every col has shape (rows, 1); returns the log of the
      integrand with the shape of x.
    lower: Start of the scan range, a scalar or one value per row.
    upper: End of the scan range, a scalar or one value per row.  The
      integrand must be negligible outside [lower, upper].
    params: A tuple of per row parameter arrays passed through as cols.
    spec: A QuadratureSpec.
    scan_step: Resolution of the support scan.
  Returns:
    An array with the log integral of every row; -inf where the integrand
    vanishes on the whole range.
  Raises:
    QuadratureNonConvergence: If some row fails to converge within
      spec.max_refinements doublings.
  """
  params = tuple(numpy.atleast_1d(numpy.asarray(p, dtype=numpy.float64))
                 for p in params)
  count = max([p.shape[0] for p in params] + [1])
  params = tuple(numpy.broadcast_to(p, (count,)) for p in params)
  lower = numpy.broadcast_to(numpy.asarray(lower, numpy.float64), (count,))
  upper = numpy.broadcast_to(numpy.asarray(upper, numpy.float64), (count,))

  lo, hi, alive = _support(log_integrand, lower, upper, params, scan_step)
  result = numpy.full(count, -numpy.inf)
  active = numpy.nonzero(alive)[0]
  if active.size == 0:
    return result

  panels = spec.initial_panels
  previous = _estimate(log_integrand, lo[active], hi[active],
                       _rows(params, active), panels)
  for refinement in range(spec.max_refinements):
    panels *= 2
    current = _estimate(log_integrand, lo[active], hi[active],
                        _rows(params, active), panels)
    done = (numpy.abs(current - previous) <=
            spec.rel_tol * numpy.maximum(1.0, numpy.abs(current)))
    result[active[done]] = current[done]
    active = active[~done]
    previous = current[~done]
    if active.size == 0:
      logging.vlog(1, 'Quadrature converged with %d panels after %d '
                   'refinements.', panels, refinement + 1)
      return result
  raise errors.QuadratureNonConvergence(
      '%d of %d integrals did not converge to rel_tol=%g within %d '
      'refinements.' % (active.size, count, spec.rel_tol,
                        spec.max_refinements))
