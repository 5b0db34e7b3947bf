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

from setuptools import find_packages, setup

_VERSION = '0.1.0'

REQUIRED_PACKAGES = [
    'absl-py >= 1.0.0',
    'numpy >= 1.17.0',
    'scipy >= 1.4.0',
]

CONSOLE_SCRIPTS = [
    'bvs = bvs.cli:main',
]

TEST_PACKAGES = [
    'pytest >= 6.0',
]

setup(
    name='bvs',
    version=_VERSION,
    description='Exact and large-sample Bayesian variable selection',
    long_description='',
    author='Eider Moore',
    author_email='opensource@google.com',
    # Contained modules and scripts.
    packages=find_packages(),
    entry_points={
        'console_scripts': CONSOLE_SCRIPTS
        },
    python_requires='>=3.7',
    install_requires=REQUIRED_PACKAGES,
    tests_require=REQUIRED_PACKAGES + TEST_PACKAGES,
    extras_require={
        'test': TEST_PACKAGES,
        },
    # PyPI package information.
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Education',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Software Development :: Libraries :: Python Modules',
        ],
    license='Apache 2.0',
    keywords='bayesian variable selection regression bayes factor',
    )
