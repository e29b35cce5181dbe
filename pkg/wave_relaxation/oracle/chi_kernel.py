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

"""The kernel exp(-beta sqrt(s^2 + alpha^2)) in the time domain.

Its inverse Laplace transform is a unit impulse at t = beta followed by the
continuous tail

  -alpha beta J1(alpha sqrt(t^2 - beta^2)) / sqrt(t^2 - beta^2),  t > beta,

and vanishes for t < beta. It replaces the pure delay exp(-beta s) when a
Fourier mode of a 2D strip decomposition is propagated.
"""

import dataclasses
import math

import numpy as np
from scipy import integrate
from scipy import special

QUADRATURE_TOLERANCE = 1e-10


def bessel_j1(z: float) -> float:
  """J1(z) = 1/pi int_0^pi cos(z sin(phi) - phi) dphi, adaptive quadrature."""
  value, _ = integrate.quad(
      lambda phi: math.cos(z * math.sin(phi) - phi),
      0.0,
      math.pi,
      epsabs=QUADRATURE_TOLERANCE,
      epsrel=QUADRATURE_TOLERANCE,
      limit=200,
  )
  return value / math.pi


@dataclasses.dataclass(frozen=True)
class ChiValue:
  """Result of chi_eval.

  Attributes:
    shift: Time of the unit impulse.
    value: Continuous part at the requested time.
    at_limit: True when t == beta and `value` is the one-sided limit.
  """

  shift: float
  value: float
  at_limit: bool = False


@dataclasses.dataclass(frozen=True)
class ChiKernel:
  """chi(alpha, beta, t) as an impulse at beta plus a continuous tail."""

  alpha: float
  beta: float

  def __post_init__(self):
    if self.alpha < 0:
      raise ValueError(f'alpha must be >= 0, got {self.alpha}.')
    if not self.beta > 0:
      raise ValueError(f'beta must be positive, got {self.beta}.')

  @property
  def limit(self) -> float:
    """Value of the tail as t -> beta from above."""
    return -self.alpha**2 * self.beta / 2

  def continuous(self, t: np.ndarray) -> np.ndarray:
    """Tail sampled at t, vectorized with scipy.special.j1.

    Samples within a relative 1e-12 of beta get the one-sided limit.
    """
    t = np.asarray(t, dtype=float)
    result = np.zeros(t.shape)
    if self.alpha == 0:
      return result
    near = np.abs(t - self.beta) <= 1e-12 * max(1.0, self.beta)
    after = (t > self.beta) & ~near
    r = np.sqrt(t[after] ** 2 - self.beta**2)
    result[after] = -self.alpha * self.beta * special.j1(self.alpha * r) / r
    result[near] = self.limit
    return result


def chi_eval(alpha: float, beta: float, t: float) -> ChiValue:
  """Evaluates chi with J1 from its integral representation.

  Args:
    alpha: >= 0. alpha = 0 leaves the pure delay.
    beta: Delay, > 0.
    t: Time, >= 0.

  Returns:
    The impulse position and the continuous part at t.
  """
  kernel = ChiKernel(alpha, beta)
  if t < 0:
    raise ValueError(f't must be >= 0, got {t}.')
  if t == beta:
    return ChiValue(shift=beta, value=kernel.limit, at_limit=True)
  if t < beta or alpha == 0:
    return ChiValue(shift=beta, value=0.0)
  r = math.sqrt(t * t - beta * beta)
  return ChiValue(shift=beta, value=-alpha * beta * bessel_j1(alpha * r) / r)
