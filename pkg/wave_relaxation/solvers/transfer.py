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

"""Moves traces between non-matching time grids.

Traces are carried over by linear interpolation. `band_limit` removes the time
frequencies a coarse neighbor cannot represent.
"""

import dataclasses

import numpy as np
from wave_relaxation.core import traces


def _tolerance(grid: np.ndarray) -> float:
  return 1e-12 * max(1.0, float(np.max(np.abs(grid))))


@dataclasses.dataclass(frozen=True, eq=False)
class TimeProjection:
  """Interpolation weights from a source grid onto a target grid.

  Row n of the projection evaluates lower_weight[n] * w[lower[n]] +
  upper_weight[n] * w[upper[n]]. Target points that coincide with a source
  point carry weight 1 on that point.
  """

  source: np.ndarray
  target: np.ndarray
  lower: np.ndarray
  upper: np.ndarray
  lower_weight: np.ndarray
  upper_weight: np.ndarray

  @property
  def is_identity(self) -> bool:
    return (
        self.source.size == self.target.size
        and np.array_equal(self.lower, np.arange(self.source.size))
        and np.all(self.lower_weight == 1.0)
    )

  def apply(self, values: np.ndarray) -> np.ndarray:
    """Projects samples on the source grid; extra axes are carried along."""
    values = np.asarray(values, dtype=float)
    shape = (-1,) + (1,) * (values.ndim - 1)
    return (
        self.lower_weight.reshape(shape) * values[self.lower]
        + self.upper_weight.reshape(shape) * values[self.upper]
    )


def _check_grid(grid: np.ndarray, what: str) -> np.ndarray:
  grid = np.asarray(grid, dtype=float)
  if grid.ndim != 1 or grid.size < 2:
    raise ValueError(f'The {what} grid needs at least two points.')
  if np.any(np.diff(grid) <= 0):
    raise ValueError(f'The {what} grid is not strictly increasing.')
  return grid


def build_projection(source: np.ndarray, target: np.ndarray) -> TimeProjection:
  """Builds the linear interpolation from `source` onto `target`.

  Both grids must cover the same window [0, T]. The weights are found with a
  single sweep over both sorted grids.

  Raises:
    ValueError: If a grid is not strictly increasing or the windows differ.
  """
  source = _check_grid(source, 'source')
  target = _check_grid(target, 'target')
  tol = max(_tolerance(source), _tolerance(target))
  if abs(source[0] - target[0]) > tol or abs(source[-1] - target[-1]) > tol:
    raise ValueError(
        f'Grids span different windows: [{source[0]}, {source[-1]}] vs'
        f' [{target[0]}, {target[-1]}].'
    )
  size = target.size
  lower = np.empty(size, dtype=int)
  upper = np.empty(size, dtype=int)
  lower_weight = np.empty(size)
  upper_weight = np.empty(size)
  last = source.size - 1
  k = 0
  for n, t in enumerate(target):
    while k < last - 1 and source[k + 1] <= t:
      k += 1
    if t <= source[k] + tol:
      lower[n] = upper[n] = k
      lower_weight[n], upper_weight[n] = 1.0, 0.0
    elif t >= source[k + 1] - tol:
      lower[n] = upper[n] = k + 1
      lower_weight[n], upper_weight[n] = 1.0, 0.0
    else:
      weight = (t - source[k]) / (source[k + 1] - source[k])
      lower[n], upper[n] = k, k + 1
      lower_weight[n], upper_weight[n] = 1.0 - weight, weight
  return TimeProjection(
      source=source,
      target=target,
      lower=lower,
      upper=upper,
      lower_weight=lower_weight,
      upper_weight=upper_weight,
  )


def project_trace(
    projection: TimeProjection, trace: traces.SpaceTimeTrace
) -> traces.SpaceTimeTrace:
  """Resamples a trace onto the projection's target grid.

  Raises:
    ValueError: If the trace is not sampled on the projection's source grid.
  """
  if trace.time_grid.size != projection.source.size or not np.allclose(
      trace.time_grid, projection.source, rtol=0.0,
      atol=_tolerance(projection.source),
  ):
    raise ValueError('Trace is not sampled on the projection source grid.')
  if projection.is_identity:
    return traces.SpaceTimeTrace(projection.target, trace.values, trace.kind)
  return traces.SpaceTimeTrace(
      projection.target, projection.apply(trace.values), trace.kind
  )


def resample(
    trace: traces.SpaceTimeTrace, target: np.ndarray
) -> traces.SpaceTimeTrace:
  """Projects a trace onto `target`, skipping the work for equal grids."""
  target = np.asarray(target, dtype=float)
  if trace.time_grid.size == target.size and np.allclose(
      trace.time_grid, target, rtol=0.0, atol=_tolerance(target)
  ):
    return traces.SpaceTimeTrace(target, trace.values, trace.kind)
  return project_trace(build_projection(trace.time_grid, target), trace)


def band_limit(
    trace: traces.SpaceTimeTrace, max_frequency: float
) -> traces.SpaceTimeTrace:
  """Removes time frequencies above `max_frequency` from a trace.

  The value at the first sample is kept. The rest is fitted in the least
  squares sense with the modes sin((k - 1/2) pi t / T), k = 1, 2, ..., whose
  frequencies do not exceed `max_frequency`; at least one mode is kept.
  2D traces are fitted per y-node.

  Args:
    trace: Trace on a grid with at least two samples.
    max_frequency: Largest angular frequency kept, > 0.

  Returns:
    The projected trace on the same grid.
  """
  if not max_frequency > 0:
    raise ValueError(f'max_frequency must be positive, got {max_frequency}.')
  t = trace.time_grid - trace.time_grid[0]
  window = float(t[-1])
  count = int(np.floor(max_frequency * window / np.pi + 0.5))
  count = min(max(count, 1), t.size - 1)
  phases = (np.arange(1, count + 1) - 0.5) * np.pi / window
  basis = np.sin(np.outer(t[1:], phases))
  values = np.asarray(trace.values, dtype=float)
  coefficients, *_ = np.linalg.lstsq(
      basis, values[1:] - values[0], rcond=None
  )
  projected = values.copy()
  projected[1:] = values[0] + basis @ coefficients
  return trace.with_values(projected)
