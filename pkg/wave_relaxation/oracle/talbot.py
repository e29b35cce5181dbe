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

"""Numerical inverse Laplace transforms on the fixed Talbot contour."""

from typing import Callable

import mpmath

DEFAULT_DEGREE = 64


def talbot_inverse(
    transform: Callable[[mpmath.mpc], mpmath.mpc],
    t: float,
    degree: int = DEFAULT_DEGREE,
) -> float:
  """f(t) from its Laplace transform F(s).

  mpmath raises the working precision with the degree. The contour has to
  enclose every singularity of F, so F must be analytic to the right of a
  parabola through s = 2 degree / (5 t).

  Args:
    transform: F, called with mpmath numbers.
    t: Time, > 0.
    degree: Number of contour nodes.

  Returns:
    The real part of the approximation.
  """
  if not t > 0:
    raise ValueError(f'Talbot inversion needs t > 0, got {t}.')
  value = mpmath.invertlaplace(transform, t, method='talbot', degree=degree)
  return float(mpmath.re(value))


def chi_talbot(
    alpha: float, beta: float, t: float, degree: int = DEFAULT_DEGREE
) -> float:
  """Continuous part of chi(alpha, beta, t) by numerical inversion.

  exp(-beta sqrt(s^2 + alpha^2)) = exp(-beta s) G(s) with
  G(s) = exp(-beta (sqrt(s^2 + alpha^2) - s)). Removing the impulse leaves
  G(s) - 1, which is inverted at tau = t - beta. The square root is taken as
  s sqrt(1 + alpha^2 / s^2), whose branch cut is the segment [-i alpha,
  i alpha].
  """
  if t <= beta:
    return 0.0

  def transform(s):
    root = s * mpmath.sqrt(1 + (alpha / s) ** 2)
    return mpmath.exp(-beta * (root - s)) - 1

  return talbot_inverse(transform, t - beta, degree)
