# Copyright 2024 The wave_relaxation Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Setup file for wave_relaxation."""

import os

import setuptools

_ROOT_DIR = os.path.dirname(os.path.abspath(__file__))


def _requirements() -> list[str]:
  with open(os.path.join(_ROOT_DIR, 'requirements.txt')) as f:
    return [
        line.strip()
        for line in f
        if line.strip() and line.strip() != 'pytest'
    ]


setuptools.setup(
    name='wave_relaxation',
    version='0.1.0',
    packages=setuptools.find_packages(),
    py_modules=['run'],
    python_requires='>=3.10',
    install_requires=_requirements(),
    extras_require={'test': ['pytest']},
)
