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

"""Delay operators of one NNWR sweep on a 1D chain of subdomains.

For a constant speed c and widths h_0, ..., h_{N-1}, one NNWR sweep maps the
interface errors w_0, ..., w_{N-2} (Laplace transformed) to

  w_i <- w_i - theta * sum_j S_ij w_j,

with S = M K. K takes traces to flux residuals and M takes residuals to the
Neumann corrections; both are tridiagonal in sinh/cosh ratios of h_i s / c
and S is pentadiagonal. Every entry is assembled here as a delay series.
"""

import dataclasses
import fractions
from typing import Sequence

from absl import logging
import immutabledict
import numpy as np
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.oracle import delay_series

Fraction = fractions.Fraction


@dataclasses.dataclass(frozen=True)
class InterfaceOperators:
  """The entries S_ij of one sweep, as delay series.

  Attributes:
    widths: Subdomain widths, left to right.
    speed: Constant wave speed.
    horizon: Truncation horizon of every entry.
    entries: (i, j) -> S_ij for |i - j| <= 2.
  """

  widths: tuple[float, ...]
  speed: float
  horizon: Fraction
  entries: immutabledict.immutabledict

  @property
  def num_interfaces(self) -> int:
    return len(self.widths) - 1

  def entry(self, i: int, j: int) -> delay_series.DelaySeries:
    return self.entries.get((i, j), delay_series.zero(self.horizon))

  def hat_coefficient(self, i: int, j: int) -> delay_series.DelaySeries:
    """Entry in the normalization of the theta = 1/4 update.

    With theta = 1/4 the sweep reads w_i <- -1/4 (sum_j t_ij w_j) with the
    sign of the j = i +- 2 terms pulled out: t_ii = S_ii - 4,
    t_i,i+-1 = S_i,i+-1 and t_i,i+-2 = -S_i,i+-2.
    """
    s = self.entry(i, j)
    if i == j:
      return delay_series.series_add(
          s, delay_series.series_scale(delay_series.identity(self.horizon), -4)
      )
    if abs(i - j) == 2:
      return delay_series.series_scale(s, -1)
    return s

  def all_series(self) -> list[delay_series.DelaySeries]:
    return [self.entries[key] for key in sorted(self.entries)]


def _blocks(widths, speed, horizon, max_terms):
  csch = [delay_series.series_reciprocal_sinh(h, speed, horizon, max_terms)
          for h in widths]
  coth = [delay_series.series_coth(h, speed, horizon, max_terms)
          for h in widths]
  return csch, coth


def _residual_matrix(csch, coth, num_interfaces):
  """K: traces -> flux residuals, scaled by c / s."""
  k = {}
  for i in range(num_interfaces):
    k[(i, i)] = delay_series.series_add(coth[i], coth[i + 1])
    if i > 0:
      k[(i, i - 1)] = delay_series.series_scale(csch[i], -1)
    if i < num_interfaces - 1:
      k[(i, i + 1)] = delay_series.series_scale(csch[i + 1], -1)
  return k


def _correction_matrix(csch, coth, tanh_first, tanh_last, num_interfaces):
  """M: flux residuals, scaled by c / s, -> Neumann corrections."""
  m = {}
  for i in range(num_interfaces):
    left = tanh_first if i == 0 else coth[i]
    right = tanh_last if i == num_interfaces - 1 else coth[i + 1]
    m[(i, i)] = delay_series.series_add(left, right)
    if i > 0:
      m[(i, i - 1)] = csch[i]
    if i < num_interfaces - 1:
      m[(i, i + 1)] = csch[i + 1]
  return m


def build_interface_operators(
    partition: partition_lib.Partition | Sequence[float],
    speed: float,
    horizon: float,
    max_terms: int = delay_series.DEFAULT_MAX_TERMS,
) -> InterfaceOperators:
  """Assembles S = M K entry by entry with series arithmetic.

  Args:
    partition: A 1D partition or the subdomain widths.
    speed: Constant wave speed c > 0.
    horizon: Truncation horizon, usually the time window.
    max_terms: Term cap of every intermediate series.

  Returns:
    The operators.

  Raises:
    ValueError: For fewer than two subdomains.
    TermLimitError: If an entry needs more than `max_terms` terms.
    RuntimeError: If the symmetry relations of S fail.
  """
  if isinstance(partition, partition_lib.Partition):
    # Drop the float noise of coordinate differences.
    widths = tuple(round(h, 12) for h in partition.widths)
  else:
    widths = tuple(float(h) for h in partition)
  if len(widths) < 2:
    raise ValueError('The oracle needs at least two subdomains.')
  num_interfaces = len(widths) - 1
  csch, coth = _blocks(widths, speed, horizon, max_terms)
  tanh_first = delay_series.series_tanh(widths[0], speed, horizon, max_terms)
  tanh_last = delay_series.series_tanh(widths[-1], speed, horizon, max_terms)
  k = _residual_matrix(csch, coth, num_interfaces)
  m = _correction_matrix(csch, coth, tanh_first, tanh_last, num_interfaces)

  entries = {}
  for i in range(num_interfaces):
    for j in range(max(0, i - 2), min(num_interfaces, i + 3)):
      products = [
          delay_series.series_mul(m[(i, l)], k[(l, j)], max_terms)
          for l in range(num_interfaces)
          if (i, l) in m and (l, j) in k
      ]
      if products:
        entries[(i, j)] = delay_series.series_add(*products)
  operators = InterfaceOperators(
      widths=tuple(widths),
      speed=float(speed),
      horizon=csch[0].horizon,
      entries=immutabledict.immutabledict(entries),
  )
  _check_symmetry(operators)
  logging.info(
      'Built %d interface operators, %d delay terms in total.',
      len(entries),
      sum(len(s) for s in entries.values()),
  )
  return operators


def _check_symmetry(operators: InterfaceOperators) -> None:
  """t_i,i+2 = t_i+2,i everywhere, t_i,i+1 = -t_i+1,i away from the ends."""
  n = operators.num_interfaces
  for i in range(n - 2):
    if operators.entry(i, i + 2) != operators.entry(i + 2, i):
      raise RuntimeError(f'Entries ({i}, {i + 2}) and ({i + 2}, {i}) differ.')
  for i in range(1, n - 2):
    forward = operators.entry(i, i + 1)
    backward = delay_series.series_scale(operators.entry(i + 1, i), -1)
    if forward != backward:
      raise RuntimeError(
          f'Entries ({i}, {i + 1}) and ({i + 1}, {i}) are not antisymmetric.'
      )


def closed_form(
    widths: Sequence[float], speed: float, s: float
) -> np.ndarray:
  """S evaluated with hyperbolic functions at a real Laplace variable s."""
  widths = np.asarray(widths, dtype=float)
  x = widths * s / speed
  csch = 1.0 / np.sinh(x)
  coth = 1.0 / np.tanh(x)
  tanh = np.tanh(x)
  n = widths.size - 1
  k = np.zeros((n, n))
  m = np.zeros((n, n))
  for i in range(n):
    k[i, i] = coth[i] + coth[i + 1]
    m[i, i] = (tanh[0] if i == 0 else coth[i]) + (
        tanh[-1] if i == n - 1 else coth[i + 1]
    )
    if i > 0:
      k[i, i - 1] = -csch[i]
      m[i, i - 1] = csch[i]
    if i < n - 1:
      k[i, i + 1] = -csch[i + 1]
      m[i, i + 1] = csch[i + 1]
  return m @ k


def check_operators(
    operators: InterfaceOperators, s: float = 1.0, tolerance: float = 1e-8
) -> dict[tuple[int, int], float]:
  """Compares the truncated series against the closed forms at s.

  The truncation error of an entry is of the order of exp(-s horizon), so the
  horizon has to be large enough for `tolerance` to be meaningful.

  Returns:
    (i, j) -> absolute discrepancy, for the entries above the tolerance.
    Every mismatch is logged.
  """
  expected = closed_form(operators.widths, operators.speed, s)
  mismatches = {}
  n = operators.num_interfaces
  for i in range(n):
    for j in range(n):
      value = operators.entry(i, j).evaluate(s)
      error = abs(value - expected[i, j])
      if error > tolerance * max(1.0, abs(expected[i, j])):
        logging.warning(
            'Operator entry (%d, %d) at s = %g: series %.12g vs closed form'
            ' %.12g.',
            i,
            j,
            s,
            value,
            expected[i, j],
        )
        mismatches[(i, j)] = error
  return mismatches
