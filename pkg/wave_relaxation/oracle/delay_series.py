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

"""Finite signed sums of time shifts.

A DelaySeries stands for sum_m a_m exp(-d_m s) in the Laplace variable s, or
equivalently for the time-domain operator w -> sum_m a_m H(t - d_m) w(t - d_m).
The hyperbolic ratios of the 1D wave equation expand into such sums, and
products of them are again delay series. Delays and coefficients are exact
fractions, so cancellations are exact.
"""

import bisect
import dataclasses
import fractions
import math
from typing import Iterable, Sequence

from absl import logging
import numpy as np
from wave_relaxation.core import bounds

Fraction = fractions.Fraction

DEFAULT_MAX_TERMS = 10**6


class TermLimitError(ValueError):
  """A series grew beyond the configured number of terms."""


def _fraction(value: float | int | Fraction, what: str) -> Fraction:
  result = bounds.as_fraction(value)
  if result <= 0:
    raise ValueError(f'{what} must be positive, got {value}.')
  return result


@dataclasses.dataclass(frozen=True)
class DelaySeries:
  """Truncated delay series.

  Attributes:
    terms: (delay, coefficient) pairs with strictly increasing delays >= 0 and
      non-zero coefficients.
    horizon: Truncation horizon. Terms with a larger delay are dropped.
  """

  terms: tuple[tuple[Fraction, Fraction], ...]
  horizon: Fraction

  def __post_init__(self):
    delays = [d for d, _ in self.terms]
    if any(d < 0 for d in delays):
      raise ValueError('Delays must be non-negative.')
    if any(b <= a for a, b in zip(delays, delays[1:])):
      raise ValueError('Delays must be strictly increasing.')
    if delays and delays[-1] > self.horizon:
      raise ValueError(f'Delay {delays[-1]} exceeds the horizon.')

  def __len__(self) -> int:
    return len(self.terms)

  @property
  def delays(self) -> tuple[Fraction, ...]:
    return tuple(d for d, _ in self.terms)

  def coefficient(self, delay: float | Fraction) -> Fraction:
    """Coefficient of exp(-delay s), 0 if absent."""
    delay = bounds.as_fraction(delay)
    delays = self.delays
    k = bisect.bisect_left(delays, delay)
    if k < len(delays) and delays[k] == delay:
      return self.terms[k][1]
    return Fraction(0)

  def leading_term(
      self, after: float | Fraction = 0
  ) -> tuple[Fraction, Fraction] | None:
    """First term with a delay strictly greater than `after`."""
    after = bounds.as_fraction(after)
    for delay, coeff in self.terms:
      if delay > after:
        return delay, coeff
    return None

  def evaluate(self, s: complex | float) -> complex | float:
    """Value of the truncated sum at the Laplace variable s."""
    return sum(float(a) * np.exp(-float(d) * s) for d, a in self.terms)


def from_terms(
    terms: Iterable[tuple[float | Fraction, float | int | Fraction]],
    horizon: float | Fraction,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> DelaySeries:
  """Merges equal delays, drops zeros and terms past the horizon.

  Raises:
    ValueError: On a negative delay.
    TermLimitError: If more than `max_terms` distinct delays remain.
  """
  horizon = _fraction(horizon, 'The truncation horizon')
  merged = {}
  for delay, coeff in terms:
    delay = bounds.as_fraction(delay)
    if delay < 0:
      raise ValueError(f'Negative delay {delay} is not causal.')
    if delay > horizon:
      continue
    merged[delay] = merged.get(delay, Fraction(0)) + bounds.as_fraction(coeff)
    if len(merged) > max_terms:
      raise TermLimitError(
          f'Delay series exceeds {max_terms} terms below horizon {horizon};'
          ' lower the horizon.'
      )
  return DelaySeries(
      terms=tuple((d, a) for d, a in sorted(merged.items()) if a != 0),
      horizon=horizon,
  )


def identity(horizon: float | Fraction) -> DelaySeries:
  return from_terms([(0, 1)], horizon)


def zero(horizon: float | Fraction) -> DelaySeries:
  return from_terms([], horizon)


def _geometric(
    first: Fraction,
    step: Fraction,
    coefficient,
    horizon: Fraction,
    max_terms: int,
) -> list[tuple[Fraction, Fraction]]:
  """Terms (first + m step, coefficient(m)) for m >= 0 up to the horizon."""
  if first > horizon:
    return []
  count = math.floor((horizon - first) / step) + 1
  if count > max_terms:
    raise TermLimitError(
        f'Expansion needs {count} terms below horizon {horizon}, more than'
        f' {max_terms}.'
    )
  return [(first + m * step, Fraction(coefficient(m))) for m in range(count)]


def series_reciprocal_sinh(
    h: float | Fraction,
    c: float | Fraction,
    horizon: float | Fraction,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> DelaySeries:
  """1 / sinh(h s / c) = 2 sum_{m >= 0} exp(-(2m + 1) h s / c)."""
  unit = _fraction(h, 'h') / _fraction(c, 'c')
  horizon = _fraction(horizon, 'The truncation horizon')
  return from_terms(
      _geometric(unit, 2 * unit, lambda m: 2, horizon, max_terms), horizon,
      max_terms,
  )


def series_coth(
    h: float | Fraction,
    c: float | Fraction,
    horizon: float | Fraction,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> DelaySeries:
  """cosh / sinh (h s / c) = 1 + 2 sum_{m >= 1} exp(-2 m h s / c)."""
  unit = _fraction(h, 'h') / _fraction(c, 'c')
  horizon = _fraction(horizon, 'The truncation horizon')
  tail = _geometric(2 * unit, 2 * unit, lambda m: 2, horizon, max_terms)
  return from_terms([(0, 1)] + tail, horizon, max_terms)


def series_reciprocal_cosh(
    h: float | Fraction,
    c: float | Fraction,
    horizon: float | Fraction,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> DelaySeries:
  """1 / cosh(h s / c) = 2 sum_{m >= 0} (-1)^m exp(-(2m + 1) h s / c)."""
  unit = _fraction(h, 'h') / _fraction(c, 'c')
  horizon = _fraction(horizon, 'The truncation horizon')
  return from_terms(
      _geometric(unit, 2 * unit, lambda m: 2 * (-1) ** m, horizon, max_terms),
      horizon,
      max_terms,
  )


def series_tanh(
    h: float | Fraction,
    c: float | Fraction,
    horizon: float | Fraction,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> DelaySeries:
  """sinh / cosh (h s / c) = 1 + 2 sum_{m >= 1} (-1)^m exp(-2 m h s / c)."""
  unit = _fraction(h, 'h') / _fraction(c, 'c')
  horizon = _fraction(horizon, 'The truncation horizon')
  tail = _geometric(
      2 * unit, 2 * unit, lambda m: 2 * (-1) ** (m + 1), horizon, max_terms
  )
  return from_terms([(0, 1)] + tail, horizon, max_terms)


def series_add(*series: DelaySeries) -> DelaySeries:
  """Sum of series, truncated at the smallest horizon."""
  if not series:
    raise ValueError('series_add needs at least one series.')
  horizon = min(s.horizon for s in series)
  return from_terms(
      (term for s in series for term in s.terms), horizon
  )


def series_scale(a: DelaySeries, factor: int | Fraction) -> DelaySeries:
  return from_terms(
      ((d, coeff * bounds.as_fraction(factor)) for d, coeff in a.terms),
      a.horizon,
  )


def series_mul(
    a: DelaySeries, b: DelaySeries, max_terms: int = DEFAULT_MAX_TERMS
) -> DelaySeries:
  """Product of two series: delays add and coefficients multiply.

  Raises:
    TermLimitError: If the product has more than `max_terms` distinct delays
      below the common horizon.
  """
  horizon = min(a.horizon, b.horizon)
  b_delays = b.delays
  products = {}
  for delay_a, coeff_a in a.terms:
    if delay_a > horizon:
      break
    for delay_b, coeff_b in b.terms[
        : bisect.bisect_right(b_delays, horizon - delay_a)
    ]:
      delay = delay_a + delay_b
      products[delay] = products.get(delay, Fraction(0)) + coeff_a * coeff_b
    if len(products) > max_terms:
      raise TermLimitError(
          f'Product exceeds {max_terms} terms below horizon {horizon}; lower'
          ' the horizon.'
      )
  return from_terms(products.items(), horizon, max_terms)


def shift_trace(
    values: np.ndarray, time_grid: np.ndarray, delay: float | Fraction
) -> np.ndarray:
  """H(t - delay) w(t - delay) sampled on time_grid.

  Args:
    values: Samples of w on time_grid, time along axis 0. w is taken as zero
      before time_grid[0].
    time_grid: Uniform sample times starting at 0.
    delay: Shift >= 0.

  Returns:
    The shifted samples. Shifts that are whole multiples of the grid step are
    exact index shifts; other shifts interpolate linearly in time.
  """
  values = np.asarray(values, dtype=float)
  time_grid = np.asarray(time_grid, dtype=float)
  delay = float(delay)
  if delay < 0:
    raise ValueError(f'Negative delay {delay} is not causal.')
  result = np.zeros_like(values)
  dt = time_grid[1] - time_grid[0]
  steps = delay / dt
  whole = round(steps)
  if abs(steps - whole) <= 1e-9 * max(1.0, steps):
    if whole < values.shape[0]:
      result[whole:] = values[: values.shape[0] - whole]
    return result
  shifted = time_grid - delay
  flat = values.reshape(values.shape[0], -1)
  columns = [
      np.interp(shifted, time_grid, flat[:, k], left=0.0)
      for k in range(flat.shape[1])
  ]
  return np.stack(columns, axis=1).reshape(values.shape)


def apply(
    series: DelaySeries, values: np.ndarray, time_grid: np.ndarray
) -> np.ndarray:
  """Time-domain action sum_m a_m H(t - d_m) w(t - d_m)."""
  values = np.asarray(values, dtype=float)
  result = np.zeros_like(values)
  t_end = float(time_grid[-1])
  for delay, coeff in series.terms:
    if float(delay) > t_end:
      break
    result += float(coeff) * shift_trace(values, time_grid, delay)
  return result


def common_step(delays: Sequence[Fraction]) -> Fraction | None:
  """Largest step dividing every delay, None if there are no positive ones."""
  step = None
  for delay in delays:
    if delay <= 0:
      continue
    if step is None:
      step = delay
    else:
      step = Fraction(
          math.gcd(step.numerator * delay.denominator,
                   delay.numerator * step.denominator),
          step.denominator * delay.denominator,
      )
  return step


def check_sampling(series: Sequence[DelaySeries], dt: float) -> bool:
  """Warns when dt does not divide every delay of the series.

  Returns:
    True if every delay is a whole number of steps.
  """
  step = common_step([d for s in series for d in s.delays])
  if step is None:
    return True
  ratio = float(step) / dt
  if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio) or round(ratio) == 0:
    logging.warning(
        'Trace step %.6g does not divide the delay step %s; shifted samples'
        ' are interpolated.',
        dt,
        step,
    )
    return False
  return True
