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
"""Deterministic parallel map over independent work units.

Results are always assembled in input order so the output does not depend on
scheduling.  The pool size comes from the BVS_THREADS environment variable.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from concurrent import futures
import os

from absl import logging

THREADS_ENV = 'BVS_THREADS'


def worker_count():
  """Returns the number of worker threads, 0 or unset meaning auto."""
  value = os.environ.get(THREADS_ENV, '0').strip() or '0'
  try:
    count = int(value)
  except ValueError:
    raise ValueError('%s must be a non-negative integer: %r' %
                     (THREADS_ENV, value))
  if count < 0:
    raise ValueError('%s must be a non-negative integer: %r' %
                     (THREADS_ENV, value))
  if count == 0:
    count = os.cpu_count() or 1
  return count


def ordered_map(fn, items, max_workers=None):
  """Applies fn to every item and returns the results in item order.

  numpy and LAPACK release the GIL for the heavy lifting, so threads are
  enough to overlap work units.

  Args:
    fn: A pure function of one argument.
    items: An iterable of work units.
    max_workers: Overrides worker_count().
  Returns:
    A list with fn(item) for every item, in the order of items.
  """
  items = list(items)
  workers = min(max_workers or worker_count(), max(len(items), 1))
  if workers <= 1:
    return [fn(x) for x in items]
  logging.vlog(1, 'Mapping %d work units over %d threads.', len(items),
               workers)
  with futures.ThreadPoolExecutor(max_workers=workers) as pool:
    return list(pool.map(fn, items))
