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
"""Exact and large-sample Bayesian variable selection for linear regression.

Bayes factors of every submodel against the intercept-only model under the
g = n prior, the mixture of g-priors and the intrinsic prior; posterior
enumeration under exchangeable model priors; consistency sums when the
number of regressors grows with n; exact Type I error and power of the
Bayes rule.

see [README.md](README.md) for the command line.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

# pylint: disable=unused-import
from bvs import asymptotics
from bvs import error_analysis
from bvs import errors
from bvs import simulation

from bvs.bayes_factors import LogBayesFactor
from bvs.bayes_factors import log_bf
from bvs.bayes_factors import log_bf_approx
from bvs.bayes_factors import log_bf_gn
from bvs.bayes_factors import log_bf_ip
from bvs.bayes_factors import log_bf_mix
from bvs.bayes_factors import log_bf_schwarz
from bvs.bayes_factors import log_bf_values
from bvs.bayes_factors import Method
from bvs.bayes_factors import Mode
from bvs.bayes_factors import Regime

from bvs.model_priors import ModelPrior
from bvs.model_priors import parse_prior
from bvs.model_priors import PriorKind

from bvs.posterior import enumerate_posterior
from bvs.posterior import inclusion_probabilities
from bvs.posterior import modal_model
from bvs.posterior import PosteriorTable
from bvs.posterior import top_models

from bvs.quadrature import QuadratureSpec

from bvs.regression import compute_bj0
from bvs.regression import Dataset
from bvs.regression import load_dataset
from bvs.regression import make_dataset
from bvs.regression import ModelSubset
from bvs.regression import NULL_MODEL
from bvs.regression import pseudo_distance
from bvs.regression import residual_sum
from bvs.regression import TrueModel
