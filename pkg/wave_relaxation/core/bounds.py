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

"""Iteration counts after which the NNWR and DNWR errors vanish."""

import fractions
import math
from typing import Final

import immutabledict

NNWR_TWO_SUBDOMAINS: Final[str] = 'nnwr-2sub-1d'
NNWR_MULTI: Final[str] = 'nnwr-multi-1d'
NNWR_2D: Final[str] = 'nnwr-2d'
DNWR_TWO_SUBDOMAINS: Final[str] = 'dnwr-2sub-1d'
DNWR_MULTI: Final[str] = 'dnwr-multi-1d'
DNWR_2D: Final[str] = 'dnwr-2d'

# Method tag -> (factor, strict). The error vanishes after k + 1 iterations
# for the smallest k with T <= factor * k * h_min / c, or T < ... if strict.
_BOUNDS = immutabledict.immutabledict({
    NNWR_TWO_SUBDOMAINS: (4, False),
    NNWR_MULTI: (2, False),
    NNWR_2D: (2, True),
    DNWR_TWO_SUBDOMAINS: (2, False),
    DNWR_MULTI: (1, False),
    DNWR_2D: (1, True),
})

METHOD_TAGS: Final[tuple[str, ...]] = tuple(_BOUNDS)


def as_fraction(value: float | int | fractions.Fraction) -> fractions.Fraction:
  """Reads a float through its shortest decimal representation."""
  if isinstance(value, (int, fractions.Fraction)):
    return fractions.Fraction(value)
  return fractions.Fraction(repr(float(value)))


def method_tag(method: str, dimension: int, num_subdomains: int) -> str | None:
  """Tag of the convergence bound for a run, or None if there is none."""
  if method not in ('nnwr', 'dnwr'):
    return None
  if dimension == 2:
    return f'{method}-2d'
  if num_subdomains == 2:
    return f'{method}-2sub-1d'
  return f'{method}-multi-1d'


def theoretical_iterations(
    method: str, time_window: float, h_min: float, speed: float
) -> int:
  """Iteration after which the interface error is predicted to vanish.

  Args:
    method: One of METHOD_TAGS.
    time_window: T > 0.
    h_min: Smallest subdomain width, > 0.
    speed: Constant wave speed, > 0.

  Returns:
    k + 1 for the smallest integer k >= 1 satisfying the bound.

  Raises:
    ValueError: For an unknown tag or non-positive arguments.
  """
  if method not in _BOUNDS:
    raise ValueError(f'Unknown method tag {method!r}; expected {METHOD_TAGS}.')
  if not (time_window > 0 and h_min > 0 and speed > 0):
    raise ValueError('T, h_min and c must be positive.')
  factor, strict = _BOUNDS[method]
  ratio = (as_fraction(time_window) * as_fraction(speed)) / (
      factor * as_fraction(h_min)
  )
  # Ties that only miss an integer by float noise count as ties.
  nearest = round(ratio)
  if abs(ratio - nearest) <= fractions.Fraction(1, 10**12) * max(nearest, 1):
    ratio = fractions.Fraction(nearest)
  if strict:
    k = math.floor(ratio) + 1
  else:
    k = math.ceil(ratio)
  return max(k, 1) + 1
