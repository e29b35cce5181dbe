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

"""Runs a waveform relaxation method until it converges or runs out."""

import time

from absl import logging
from wave_relaxation.core import traces
from wave_relaxation.methods import base_method
import termcolor


def run_iterations(
    method: base_method.WaveformRelaxationMethod,
    max_iterations: int = 20,
    tolerance: float = 1e-12,
) -> tuple[traces.ConvergenceRecord, tuple[traces.SpaceTimeTrace, ...]]:
  """Iterates `method` and records the interface error after every sweep.

  The run stops at the first iteration k with error(k) <= tolerance *
  error(0), or after `max_iterations` sweeps.

  Args:
    method: The method to run. It is reset first.
    max_iterations: Iteration budget, >= 0.
    tolerance: Relative stopping tolerance, >= 0.

  Returns:
    The convergence record and the final interface traces.
  """
  if max_iterations < 0:
    raise ValueError(f'max_iterations must be >= 0, got {max_iterations}.')
  if tolerance < 0:
    raise ValueError(f'tolerance must be >= 0, got {tolerance}.')
  current = method.reset()
  reference = method.reference_traces()
  errors = [traces.interface_error(current, reference)]
  wall_times = [0.0]
  iterations_to_tolerance = None
  threshold = tolerance * errors[0]
  if errors[0] <= threshold:
    iterations_to_tolerance = 0
  k = 0
  while iterations_to_tolerance is None and k < max_iterations:
    start = time.perf_counter()
    result = method.step()
    wall_times.append(time.perf_counter() - start)
    k += 1
    current = result.traces
    errors.append(traces.interface_error(current, reference))
    logging.info('%s iteration %d: error %.6e', method.name, k, errors[-1])
    if errors[-1] <= threshold:
      iterations_to_tolerance = k

  if iterations_to_tolerance is not None:
    print(
        termcolor.colored(
            f'{method.name}: reached tolerance after'
            f' {iterations_to_tolerance} iterations.',
            'green',
        )
    )
  else:
    print(
        termcolor.colored(
            f'{method.name}: reached max number of iterations'
            f' ({max_iterations}) before the tolerance.',
            'red',
        )
    )
  record = traces.ConvergenceRecord(
      method=method.name,
      theta=method.theta,
      errors=errors,
      iterations_to_tolerance=iterations_to_tolerance,
      wall_times=wall_times,
      seed=method.seed,
      metadata=method.metadata,
  )
  return record, tuple(current)
