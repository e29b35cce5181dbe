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

"""Key names of the records and sidecars written by the experiment runner."""

# Columns of a convergence curve CSV.
ITERATION = 'iteration'
ERROR = 'error'


class RecordConstants:
  """Keys of a curve sidecar and of the in-memory run summaries.

  Attributes:
    CURVE: Name of the curve; also the stem of its CSV and JSON files.
    SCENARIO: Registered scenario the curve belongs to, if any.
    METHOD: Method that produced the curve.
    THETA: Relaxation parameter, or None.
    SEED: Seed of a random initial guess, or None.
    CONFIG: The full run configuration.
    THEORETICAL_ITERATIONS: Predicted iteration count, or 'n/a' when no
      bound applies.
    ITERATIONS_TO_TOLERANCE: First iteration that met the tolerance.
    NUM_ITERATIONS: Iterations performed.
    INITIAL_ERROR: Interface error of the initial guess.
    FINAL_ERROR: Interface error after the last iteration.
    EXTRAS: Method- and scenario-specific values.
    ERRORS: The convergence curve. Written to the CSV, not the sidecar.
    WALL_TIME: Seconds spent iterating. Never written to disk.
  """

  CURVE = 'curve'
  SCENARIO = 'scenario'
  METHOD = 'method'
  THETA = 'theta'
  SEED = 'seed'
  CONFIG = 'config'
  THEORETICAL_ITERATIONS = 'theoretical_iterations'
  ITERATIONS_TO_TOLERANCE = 'iterations_to_tolerance'
  NUM_ITERATIONS = 'num_iterations'
  INITIAL_ERROR = 'initial_error'
  FINAL_ERROR = 'final_error'
  EXTRAS = 'extras'
  ERRORS = 'errors'
  WALL_TIME = 'wall_time'


# Placeholder for a prediction that does not apply to a run.
NOT_APPLICABLE = 'n/a'
