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

"""Runs waveform relaxation experiments.

Verbs:

  run.py run <config-path>          Runs one INI configuration.
  run.py scenario <name>            Runs a registered scenario.
  run.py list                       Lists the registered scenarios.
  run.py predict <tag> <T> <hmin> <c>
                                    Prints the predicted iteration count.

Every curve is written as `<curve>.csv` with the columns `iteration,error`
plus a `<curve>.json` sidecar. The exit code is 0 on success, 2 for invalid
input and 3 for failures while running.
"""

from collections.abc import Callable, Sequence
import sys

from absl import app
from absl import flags
from absl import logging
from wave_relaxation import checkpointer as checkpointer_lib
from wave_relaxation import config as config_lib
from wave_relaxation import profiles
from wave_relaxation import registry
from wave_relaxation import suite_utils
from wave_relaxation.core import bounds

logging.set_verbosity(logging.WARNING)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILURE = 3

VERBS = ('run', 'scenario', 'list', 'predict')

Job = Callable[[], object]

_OUTPUT_DIR = flags.DEFINE_string(
    'output_dir',
    None,
    'Directory the CSV and JSON files are written to. If not set, a new'
    ' timestamped directory is created under --output_path.',
)
_OUTPUT_PATH = flags.DEFINE_string(
    'output_path',
    'runs',
    'Parent of the timestamped run directories.',
)
_MAX_ITERATIONS = flags.DEFINE_integer(
    'max_iterations',
    None,
    'Overrides the iteration budget of every run.',
    lower_bound=0,
)
_TOLERANCE = flags.DEFINE_float(
    'tolerance',
    None,
    'Overrides the relative stopping tolerance of every run.',
    lower_bound=0.0,
)
_SEED = flags.DEFINE_integer(
    'seed',
    None,
    'Overrides the seed of random initial guesses.',
    lower_bound=0,
)


def _checkpointer() -> checkpointer_lib.IncrementalCheckpointer:
  if _OUTPUT_DIR.value:
    directory = _OUTPUT_DIR.value
  else:
    directory = checkpointer_lib.create_run_directory(_OUTPUT_PATH.value)
  print(f'Writing to {directory}')
  return checkpointer_lib.IncrementalCheckpointer(directory)


def _expect_args(verb: str, args: Sequence[str], names: Sequence[str]):
  if len(args) != len(names):
    raise ValueError(
        f'{verb} expects {len(names)} arguments ({", ".join(names)}), got'
        f' {len(args)}.'
    )


def _list_scenarios() -> None:
  scenarios = registry.ScenarioRegistry()
  width = max(len(name) for name in scenarios.names())
  for name in scenarios.names():
    print(f'{name:<{width}}  {scenarios.get_scenario(name).description}')


def _predict(args: Sequence[str]) -> Job:
  _expect_args('predict', args, ('tag', 'T', 'hmin', 'c'))
  tag, time_window, h_min, speed = args
  prediction = bounds.theoretical_iterations(
      tag,
      profiles.parse_number(time_window),
      profiles.parse_number(h_min),
      profiles.parse_number(speed),
  )
  return lambda: print(prediction)


def _run(args: Sequence[str]) -> Job:
  _expect_args('run', args, ('config-path',))
  config = config_lib.load_config(args[0])
  config = suite_utils.apply_overrides(
      config, _MAX_ITERATIONS.value, _TOLERANCE.value, _SEED.value
  )
  return lambda: suite_utils.run_configs([config], _checkpointer())


def _scenario(args: Sequence[str]) -> Job:
  _expect_args('scenario', args, ('name',))
  scenario = registry.ScenarioRegistry().get_scenario(args[0])
  suite_utils.create_runs(
      scenario, _MAX_ITERATIONS.value, _TOLERANCE.value, _SEED.value
  )
  return lambda: suite_utils.run_scenario(
      scenario.name,
      _checkpointer(),
      max_iterations=_MAX_ITERATIONS.value,
      tolerance=_TOLERANCE.value,
      seed=_SEED.value,
  )


def _plan(args: Sequence[str]) -> Job:
  """Validates the command line and returns the work it asks for.

  Args:
    args: The verb and its arguments.

  Returns:
    The job. Nothing has been run or written yet.

  Raises:
    ValueError: For an unknown verb, bad arguments or an invalid config.
  """
  if not args:
    raise ValueError(f'Expected a verb, one of {VERBS}.')
  verb, rest = args[0], args[1:]
  if verb == 'run':
    return _run(rest)
  elif verb == 'scenario':
    return _scenario(rest)
  elif verb == 'list':
    _expect_args('list', rest, ())
    return _list_scenarios
  elif verb == 'predict':
    return _predict(rest)
  raise ValueError(
      f'Unknown verb {verb!r}.' + profiles.suggest_keyword(verb, list(VERBS))
  )


def main(argv: Sequence[str]) -> int:
  try:
    job = _plan(argv[1:])
  except ValueError as e:
    print(f'Invalid input: {e}', file=sys.stderr)
    return EXIT_INVALID
  try:
    job()
  except Exception as e:  # pylint: disable=broad-exception-caught
    logging.exception('Run failed.')
    print(f'Run failed: {e}', file=sys.stderr)
    return EXIT_FAILURE
  return EXIT_OK


if __name__ == '__main__':
  app.run(main)
