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
"""Command line front end.

  bvs bf --data=d.csv --subset=1,2 --method=ip
  bvs posterior --data=d.csv --method=ip --prior=hu --top=5
  bvs errors --method=gn --n_min=15 --n_max=99 --n_step=3 --j_ratio=3
  bvs consistency --b=0.8 --n_grid=50:400:50 --true=1,2 --prior=hu
  bvs thresholds --r_grid=1,1.5,2,3,5,10
  bvs simulate --n=100 --k=6 --true=1,2 --seed=7

Flags may be spelled with dashes or underscores.  Results go to --out (stdout
by default) as CSV or JSON; logs go to stderr.  Exit status is 0 on success,
2 on usage errors, 3 on data or file errors and 4 on numerical failures.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import contextlib
import csv
import io
import json
import math
import sys

from absl import flags
from absl import logging
import numpy

from bvs import asymptotics
from bvs import bayes_factors
from bvs import error_analysis
from bvs import errors
from bvs import model_priors
from bvs import posterior
from bvs import quadrature
from bvs import regression
from bvs import simulation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

_METHODS = [m.value for m in bayes_factors.Method]

flags.DEFINE_string('out', None, 'Output file; stdout when unset or "-".')
flags.DEFINE_enum('format', 'csv', ['csv', 'json'], 'Output format.')
flags.DEFINE_float('quad_tol', quadrature.DEFAULT_SPEC.rel_tol,
                   'Relative tolerance of the Bayes factor quadrature.')
flags.DEFINE_integer('quad_max_refine', quadrature.DEFAULT_SPEC.max_refinements,
                     'Panel doublings allowed before quadrature gives up.')

flags.DEFINE_string('data', None, 'CSV dataset with a header and a y column.')
flags.DEFINE_string('subset', '', 'Comma separated 1-based regressor indices.')
flags.DEFINE_enum('method', 'ip', _METHODS, 'Bayes factor.')
flags.DEFINE_enum('approx', None, [r.value for r in bayes_factors.Regime],
                  'Use the large-n approximation for this growth regime.')
flags.DEFINE_string('prior', 'hu',
                    'Model prior: bernoulli:THETA, hu or uniform.')
flags.DEFINE_integer('top', None, 'Only report the most probable models.')
flags.DEFINE_integer('cap', posterior.DEFAULT_ENUMERATION_CAP,
                     'Largest number of regressors that may be enumerated.')

flags.DEFINE_integer('n_min', 15, 'Smallest sample size of the error curves.')
flags.DEFINE_integer('n_max', 99, 'Largest sample size of the error curves.')
flags.DEFINE_integer('n_step', 3, 'Step of the error curve grid.')
flags.DEFINE_float('j_ratio', None,
                   'Alternative dimension j = ceil(n / ratio).')
flags.DEFINE_integer('j_fixed', None, 'Fixed alternative dimension j.')
flags.DEFINE_float('delta', 1.0, 'Pseudo-distance of the alternative from M_0.')

flags.DEFINE_float('b', 0.5, 'Growth exponent, k = floor(k_scale * n^b).')
flags.DEFINE_string('n_grid', '50:400:50',
                    'Sample sizes as START:STOP:STEP or a comma list.')
flags.DEFINE_string('true', '1,2', 'Indices of the true regressors.')
flags.DEFINE_string('beta', None,
                    'Intercept and true slopes; 0 then ones when unset.')
flags.DEFINE_float('sigma', 1.0, 'Noise standard deviation.')
flags.DEFINE_float('corr', 0.0, 'Pairwise correlation of the covariates.')
flags.DEFINE_integer('reps', 50, 'Replicates per sample size.')
flags.DEFINE_integer('seed', 0, 'Master seed.')
flags.DEFINE_float('k_scale', 1.0, 'Multiplier on n^b for the regressor count.')

flags.DEFINE_string('r_grid', '1,1.5,2,3,5,10',
                    'Comma separated ratios r = n / t.')

flags.DEFINE_integer('n', 100, 'Sample size of a simulated dataset.')
flags.DEFINE_integer('k', 6, 'Regressors of a simulated dataset.')

FLAGS = flags.FLAGS


def _number(value):
  """CSV text of a cell; floats carry 17 significant digits."""
  if value is None:
    return ''
  if isinstance(value, (bool, numpy.bool_)):
    return 'true' if value else 'false'
  if isinstance(value, (int, numpy.integer)):
    return str(int(value))
  if isinstance(value, (float, numpy.floating)):
    return '%.17g' % value
  return str(value)


def _json_ready(value):
  if isinstance(value, dict):
    return {k: _json_ready(v) for k, v in value.items()}
  if isinstance(value, (list, tuple)):
    return [_json_ready(v) for v in value]
  if isinstance(value, (bool, numpy.bool_)):
    return bool(value)
  if isinstance(value, (int, numpy.integer)):
    return int(value)
  if isinstance(value, (float, numpy.floating)):
    value = float(value)
    return value if math.isfinite(value) else None
  return value


@contextlib.contextmanager
def _output():
  if not FLAGS.out or FLAGS.out == '-':
    yield sys.stdout
  else:
    with io.open(FLAGS.out, 'w', encoding='utf-8', newline='') as f:
      yield f


def _write_csv(stream, header, rows):
  writer = csv.writer(stream, lineterminator='\n')
  writer.writerow(header)
  for row in rows:
    writer.writerow([_number(v) for v in row])


def _write_json(stream, document):
  stream.write(json.dumps(_json_ready(document), indent=2))
  stream.write('\n')


def _emit(header, rows, document=None):
  """Writes rows as CSV, or document (a list of row dicts by default)."""
  rows = [tuple(r) for r in rows]
  with _output() as stream:
    if FLAGS.format == 'csv':
      _write_csv(stream, header, rows)
    else:
      if document is None:
        document = [dict(zip(header, r)) for r in rows]
      _write_json(stream, document)


def _quad():
  return quadrature.QuadratureSpec(rel_tol=FLAGS.quad_tol,
                                   max_refinements=FLAGS.quad_max_refine)


def _require(name):
  value = getattr(FLAGS, name)
  if value is None:
    raise flags.Error('--%s is required for this command.' % name)
  return value


def _ints(text, name):
  text = text.strip()
  if not text:
    return []
  try:
    return [int(x) for x in text.split(',')]
  except ValueError:
    raise flags.Error('--%s expects comma separated integers: %r' %
                      (name, text))


def _floats(text, name):
  try:
    return [float(x) for x in text.split(',') if x.strip()]
  except ValueError:
    raise flags.Error('--%s expects comma separated numbers: %r' % (name, text))


def _grid(text, name):
  """START:STOP:STEP (inclusive) or a comma list of integers."""
  if ':' not in text:
    return _ints(text, name)
  parts = text.split(':')
  if len(parts) != 3:
    raise flags.Error('--%s expects START:STOP:STEP: %r' % (name, text))
  try:
    start, stop, step = [int(p) for p in parts]
  except ValueError:
    raise flags.Error('--%s expects integers: %r' % (name, text))
  if step < 1 or stop < start:
    raise flags.Error('--%s needs STEP >= 1 and STOP >= START: %r' %
                      (name, text))
  return list(range(start, stop + 1, step))


def _beta():
  if FLAGS.beta is None:
    return None
  return _floats(FLAGS.beta, 'beta')


def cmd_bf():
  """Bayes factor of one submodel against the null model."""
  dataset = regression.load_dataset(_require('data'))
  subset = regression.ModelSubset(_ints(FLAGS.subset, 'subset'))
  fit = regression.compute_bj0(dataset, subset)
  if subset.j == 0:
    mode = bayes_factors.Mode.EXACT if FLAGS.approx is None else (
        bayes_factors.Mode('approx_' + FLAGS.approx))
    result = bayes_factors.LogBayesFactor(
        0.0, bayes_factors.Method(FLAGS.method), mode, dataset.n, 0, 1.0)
  else:
    result = bayes_factors.log_bf(FLAGS.method, dataset.n, subset.j, fit.b_j0,
                                  _quad(), FLAGS.approx)
  logging.info('bf: n=%d subset=%s method=%s mode=%s', dataset.n, subset,
               result.method.value, result.mode.value)
  _emit(['n', 'j', 'b_j0', 'log_bf', 'bf', 'method', 'mode'],
        [(result.n, result.j, result.b_j0, result.log_value, result.value,
          result.method.value, result.mode.value)])


def cmd_posterior():
  """Posterior probabilities of every model of a dataset."""
  prior = model_priors.parse_prior(FLAGS.prior)
  dataset = regression.load_dataset(_require('data'))
  table = posterior.enumerate_posterior(dataset, FLAGS.method, prior, _quad(),
                                        FLAGS.cap, FLAGS.approx)
  logging.info('posterior: n=%d k=%d method=%s prior=%s', table.n, table.k,
               table.method.value, prior)
  if FLAGS.top is None:
    entries = table.entries
  else:
    entries = [table.entries[s.mask]
               for s, _ in posterior.top_models(table, FLAGS.top)]
  inclusion = posterior.inclusion_probabilities(table)
  with _output() as stream:
    if FLAGS.format == 'json':
      document = table.to_dict()
      if FLAGS.top is not None:
        document['models'] = [{'indices': list(e.subset.indices),
                               'log_unnormalized': e.log_unnormalized,
                               'posterior': e.posterior} for e in entries]
      _write_json(stream, document)
    else:
      _write_csv(stream, ['indices', 'log_bf', 'log_unnormalized',
                          'posterior'],
                 [(str(e.subset), e.log_bf, e.log_unnormalized, e.posterior)
                  for e in entries])
      stream.write('\n')
      _write_csv(stream, ['regressor', 'name', 'inclusion'],
                 [(i + 1, dataset.names[i], p)
                  for i, p in enumerate(inclusion)])


def _j_rule():
  if FLAGS.j_ratio is not None and FLAGS.j_fixed is not None:
    raise flags.Error('Pass at most one of --j_ratio and --j_fixed.')
  if FLAGS.j_fixed is not None:
    return error_analysis.j_fixed_rule(FLAGS.j_fixed)
  ratio = 3.0 if FLAGS.j_ratio is None else FLAGS.j_ratio
  if not ratio > 0:
    raise errors.DomainError('--j_ratio must be positive: %s' % ratio)
  return error_analysis.j_ratio_rule(ratio)


def cmd_errors():
  """Type I error and power curves of one Bayes factor rule."""
  if FLAGS.n_step < 1 or FLAGS.n_max < FLAGS.n_min:
    raise flags.Error('Need --n_step >= 1 and --n_max >= --n_min.')
  n_grid = range(FLAGS.n_min, FLAGS.n_max + 1, FLAGS.n_step)
  points = error_analysis.error_curves(FLAGS.method, n_grid, _j_rule(),
                                       FLAGS.delta, _quad())
  for p in points:
    logging.info('errors: n=%d j=%d b_star=%.6g type1=%.6g power=%.6g', p.n,
                 p.j, p.b_star, p.type1, p.power)
  _emit(['n', 'j', 'method', 'b_star', 'type1', 'power', 'delta'],
        [(p.n, p.j, p.method.value, p.b_star, p.type1, p.power, p.delta)
         for p in points])


def cmd_consistency():
  """Posterior of the true model as the number of regressors grows."""
  config = simulation.ExperimentConfig(
      b=FLAGS.b,
      n_grid=_grid(FLAGS.n_grid, 'n_grid'),
      true_indices=_ints(FLAGS.true, 'true'),
      beta=_beta(),
      sigma=FLAGS.sigma,
      covariate_corr=FLAGS.corr,
      replications=FLAGS.reps,
      seed=FLAGS.seed,
      method=FLAGS.method,
      prior=model_priors.parse_prior(FLAGS.prior),
      enumeration_cap=FLAGS.cap,
      k_scale=FLAGS.k_scale)
  result = simulation.run_consistency_experiment(config, _quad())
  for s in result.summaries:
    logging.info('consistency: n=%d k=%d mean=%.4f median=%.4f hit=%.3f', s.n,
                 s.k, s.mean_posterior, s.median_posterior, s.hit_rate)
  header = ['n', 'k', 'replicate', 'true_posterior', 'modal_is_true',
            'modal_indices']
  rows = [(r.n, r.k, r.replicate, r.true_posterior, r.modal_is_true,
           str(regression.ModelSubset(r.modal_indices)))
          for r in result.records]
  document = {
      'b': config.b,
      'method': config.method.value,
      'prior': model_priors.format_prior(config.prior),
      'seed': config.seed,
      'records': [dict(zip(header, r)) for r in rows],
      'summaries': [s._asdict() for s in result.summaries],
  }
  _emit(header, rows, document)


def cmd_thresholds():
  """Pseudo-distance thresholds of the mixture and intrinsic rules."""
  rows = []
  for r in _floats(FLAGS.r_grid, 'r_grid'):
    mix = asymptotics.threshold_delta_mix(r) if r > 1 else None
    rows.append((r, mix, asymptotics.threshold_delta_ip(r)))
  _emit(['r', 'delta_mix', 'delta_ip'], rows)


def cmd_simulate():
  """Writes a seeded synthetic dataset as a CSV the other commands read."""
  true_indices = _ints(FLAGS.true, 'true')
  beta = _beta()
  if beta is None:
    beta = [0.0] + [1.0] * len(true_indices)
  dataset = simulation.generate_synthetic(FLAGS.n, FLAGS.k, true_indices, beta,
                                          FLAGS.sigma, FLAGS.corr,
                                          simulation.derive_seed(FLAGS.seed))
  header = [regression.RESPONSE_COLUMN] + list(dataset.names)
  rows = numpy.column_stack([dataset.y, dataset.X]).tolist()
  document = {name: column for name, column in zip(header, zip(*rows))}
  _emit(header, rows, document)


COMMANDS = {
    'bf': cmd_bf,
    'posterior': cmd_posterior,
    'errors': cmd_errors,
    'consistency': cmd_consistency,
    'thresholds': cmd_thresholds,
    'simulate': cmd_simulate,
}


def _normalize(arg):
  """--foo-bar=x becomes --foo_bar=x; values are left alone."""
  if not arg.startswith('--'):
    return arg
  name, sep, value = arg[2:].partition('=')
  return '--' + name.replace('-', '_') + sep + value


@contextlib.contextmanager
def _parsed_flags(argv):
  """Parses argv into FLAGS for the duration of one command.

  The flag values and parse state found on entry are put back on exit, so a
  host process that already parsed its own flags keeps them.
  """
  was_parsed = FLAGS.is_parsed()
  saved = {name: (FLAGS[name].value, FLAGS[name].present,
                  FLAGS[name].using_default_value) for name in FLAGS}
  FLAGS.unparse_flags()
  try:
    extra = FLAGS(argv)
    if len(extra) > 1:
      raise flags.Error('Unexpected arguments: %s' % ' '.join(extra[1:]))
    yield
  finally:
    if was_parsed:
      for name, (value, present, using_default) in saved.items():
        flag = FLAGS[name]
        flag.value = value
        flag.present = present
        flag.using_default_value = using_default
      FLAGS.mark_as_parsed()
    else:
      FLAGS.unparse_flags()


def _usage():
  return 'usage: bvs {%s} [--flags]' % ','.join(sorted(COMMANDS))


def run(argv):
  """Runs one command and returns the process exit status.

  Args:
    argv: The program name, the command and its flags.
  Returns:
    One of EXIT_OK, EXIT_USAGE, EXIT_DATA or EXIT_NUMERICAL.
  """
  argv = list(argv)
  if len(argv) < 2 or argv[1] not in COMMANDS:
    print(_usage(), file=sys.stderr)
    return EXIT_USAGE
  command = argv[1]
  try:
    with _parsed_flags([argv[0]] + [_normalize(a) for a in argv[2:]]):
      COMMANDS[command]()
  except (flags.Error, errors.DomainError) as e:
    print('bvs %s: %s' % (command, e), file=sys.stderr)
    return EXIT_USAGE
  except (errors.DataError, IOError) as e:
    print('bvs %s: data error: %s' % (command, e), file=sys.stderr)
    return EXIT_DATA
  except errors.NumericalError as e:
    print('bvs %s: numerical failure: %s' % (command, e), file=sys.stderr)
    return EXIT_NUMERICAL
  return EXIT_OK


def main():
  sys.exit(run(sys.argv))


if __name__ == '__main__':
  main()
