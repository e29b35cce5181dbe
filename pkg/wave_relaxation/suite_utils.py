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

"""Runs configurations and scenarios and summarizes their curves."""

from typing import Any, Sequence

import numpy as np
import pandas as pd
from wave_relaxation import checkpointer as checkpointer_lib
from wave_relaxation import config as config_lib
from wave_relaxation import constants
from wave_relaxation import iteration_runner
from wave_relaxation import registry as registry_lib
from wave_relaxation.core import bounds
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.methods import base_method
from wave_relaxation.methods import dnwr
from wave_relaxation.methods import guesses
from wave_relaxation.methods import nnwr
from wave_relaxation.methods import swr
from wave_relaxation.oracle import chi_kernel
from wave_relaxation.oracle import oracle_steps
from wave_relaxation.oracle import talbot

Summary = dict[str, Any]


def create_method(
    config: config_lib.RunConfig,
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
) -> base_method.WaveformRelaxationMethod:
  """Instantiates the method a config names."""
  guess = guesses.InitialGuess(config.guess, seed=config.seed)
  theta = config.resolved_theta
  if config.method == nnwr.NAME:
    return nnwr.NnwrMethod(
        problem,
        partition,
        theta,
        guess,
        config.track_solution,
        flux_weighting=config.flux_weighting,
    )
  if config.method == dnwr.NAME:
    return dnwr.DnwrMethod(problem, partition, theta, guess)
  if config.method == config_lib.SWR_CLASSICAL:
    return swr.SwrMethod(
        problem,
        partition,
        swr.SwrConfig(overlap=config.overlap, transmission=swr.CLASSICAL),
        guess,
    )
  if config.method == config_lib.SWR_OPTIMIZED:
    return swr.SwrMethod(
        problem,
        partition,
        swr.SwrConfig(
            overlap=config.overlap, transmission=swr.FIRST_ORDER, p=config.p
        ),
        guess,
    )
  if config.method == oracle_steps.NAME:
    return oracle_steps.OracleNnwrMethod(
        problem, partition, theta, guess, config.num_modes
    )
  raise ValueError(f'Unsupported method: {config.method}')


def theoretical_prediction(
    config: config_lib.RunConfig,
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
) -> int | str:
  """Predicted iteration count for NNWR at constant speed, else 'n/a'."""
  if config.method != nnwr.NAME:
    return constants.NOT_APPLICABLE
  if problem.dimension == 2:
    speed = float(problem.speed)
  elif problem.speed.is_constant:
    speed = problem.speed.value()
  else:
    return constants.NOT_APPLICABLE
  tag = bounds.method_tag(
      config.method, problem.dimension, partition.num_subdomains
  )
  return bounds.theoretical_iterations(
      tag, partition.time_window, partition.h_min, speed
  )


def run_config(
    config: config_lib.RunConfig,
    checkpointer: checkpointer_lib.Checkpointer = (
        checkpointer_lib.NullCheckpointer()
    ),
    scenario: str | None = None,
) -> Summary:
  """Runs one configuration and saves its curve.

  Args:
    config: The validated run.
    checkpointer: Where the CSV and the sidecar go.
    scenario: Scenario the run belongs to, for the summary table.

  Returns:
    The sidecar, plus the errors and the wall time.
  """
  problem = config_lib.build_problem(config)
  partition = config_lib.build_partition(config, problem)
  method = create_method(config, problem, partition)
  name = config.curve_name
  msg = 'Running curve: ' + name
  print(msg + '\n' + '=' * len(msg))
  record, _ = iteration_runner.run_iterations(
      method, config.max_iterations, config.tolerance
  )
  prediction = theoretical_prediction(config, problem, partition)
  sidecar = {
      constants.RecordConstants.CURVE: name,
      constants.RecordConstants.METHOD: record.method,
      constants.RecordConstants.THETA: record.theta,
      constants.RecordConstants.SEED: record.seed,
      constants.RecordConstants.CONFIG: config.to_dict(),
      constants.RecordConstants.THEORETICAL_ITERATIONS: prediction,
      constants.RecordConstants.ITERATIONS_TO_TOLERANCE: (
          record.iterations_to_tolerance
      ),
      constants.RecordConstants.NUM_ITERATIONS: record.num_iterations,
      constants.RecordConstants.INITIAL_ERROR: record.errors[0],
      constants.RecordConstants.FINAL_ERROR: record.errors[-1],
      constants.RecordConstants.EXTRAS: dict(record.metadata),
  }
  checkpointer.save_curve(name, record.errors, sidecar)
  summary = dict(sidecar)
  summary[constants.RecordConstants.SCENARIO] = scenario
  summary[constants.RecordConstants.ERRORS] = list(record.errors)
  summary[constants.RecordConstants.WALL_TIME] = float(sum(record.wall_times))
  return summary


def run_configs(
    configs: Sequence[config_lib.RunConfig],
    checkpointer: checkpointer_lib.Checkpointer = (
        checkpointer_lib.NullCheckpointer()
    ),
    scenario: str | None = None,
    print_summary: bool = True,
) -> list[Summary]:
  """Runs configurations in order and prints the summary table."""
  summaries = []
  for config in configs:
    summaries.append(run_config(config, checkpointer, scenario))
    print()
  summarize_records(summaries, print_summary=print_summary)
  return summaries


def apply_overrides(
    config: config_lib.RunConfig,
    max_iterations: int | None,
    tolerance: float | None,
    seed: int | None,
) -> config_lib.RunConfig:
  """Applies command-line overrides of the budget, tolerance and seed."""
  changes = {}
  if max_iterations is not None:
    changes['max_iterations'] = max_iterations
  if tolerance is not None:
    changes['tolerance'] = tolerance
  if seed is not None:
    changes['seed'] = seed
  if not changes:
    return config
  return config_lib.replace(config, **changes)


def create_runs(
    scenario: registry_lib.Scenario,
    max_iterations: int | None = None,
    tolerance: float | None = None,
    seed: int | None = None,
) -> list[config_lib.RunConfig]:
  """The configurations of a scenario, with command-line overrides applied."""
  return [
      apply_overrides(c, max_iterations, tolerance, seed)
      for c in scenario.configs()
  ]


def run_chi_check(
    name: str,
    checkpointer: checkpointer_lib.Checkpointer = (
        checkpointer_lib.NullCheckpointer()
    ),
    grid: Sequence[tuple[float, float, float]] = registry_lib.CHI_CHECK_GRID,
    degree: int = talbot.DEFAULT_DEGREE,
) -> Summary:
  """Compares the Bessel kernel with numerical inversion on a grid.

  The curve holds one row per grid point: `iteration` is the point index and
  `error` the absolute discrepancy.

  Args:
    name: Curve name.
    checkpointer: Where the CSV and the sidecar go.
    grid: (alpha, beta, t) points with t > beta.
    degree: Talbot contour nodes.

  Returns:
    The sidecar, plus the discrepancies.
  """
  msg = 'Running kernel check: ' + name
  print(msg + '\n' + '=' * len(msg))
  points = []
  discrepancies = []
  for alpha, beta, t in grid:
    bessel = chi_kernel.chi_eval(alpha, beta, t).value
    inverted = talbot.chi_talbot(alpha, beta, t, degree)
    discrepancies.append(abs(bessel - inverted))
    points.append({
        'alpha': alpha,
        'beta': beta,
        't': t,
        'bessel': bessel,
        'talbot': inverted,
    })
  sidecar = {
      constants.RecordConstants.CURVE: name,
      constants.RecordConstants.METHOD: 'chi-check',
      constants.RecordConstants.THEORETICAL_ITERATIONS: (
          constants.NOT_APPLICABLE
      ),
      constants.RecordConstants.EXTRAS: {
          'degree': degree,
          'max_discrepancy': float(np.max(discrepancies)),
          'points': points,
      },
  }
  checkpointer.save_curve(name, discrepancies, sidecar)
  print(f'Max kernel discrepancy: {np.max(discrepancies):.3e}')
  summary = dict(sidecar)
  summary[constants.RecordConstants.SCENARIO] = name
  summary[constants.RecordConstants.ERRORS] = discrepancies
  return summary


def run_scenario(
    name: str,
    checkpointer: checkpointer_lib.Checkpointer = (
        checkpointer_lib.NullCheckpointer()
    ),
    max_iterations: int | None = None,
    tolerance: float | None = None,
    seed: int | None = None,
) -> list[Summary]:
  """Runs every curve of a registered scenario.

  Args:
    name: Scenario name; see `registry.ScenarioRegistry`.
    checkpointer: Where the CSVs and sidecars go.
    max_iterations: Overrides the iteration budget of every curve.
    tolerance: Overrides the stopping tolerance of every curve.
    seed: Overrides the seed of every curve.

  Returns:
    One summary per curve.

  Raises:
    ValueError: For an unknown scenario.
  """
  scenario = registry_lib.ScenarioRegistry().get_scenario(name)
  if scenario.kind == registry_lib.CHI_CHECK:
    return [run_chi_check(scenario.name, checkpointer)]
  configs = create_runs(scenario, max_iterations, tolerance, seed)
  return run_configs(configs, checkpointer, scenario.name)


def run_theta_sweep(
    config: config_lib.RunConfig,
    thetas: Sequence[float],
    checkpointer: checkpointer_lib.Checkpointer = (
        checkpointer_lib.NullCheckpointer()
    ),
) -> list[Summary]:
  """Runs `config` once per relaxation parameter."""
  configs = [
      config_lib.replace(
          config, theta=theta, name=f'{config.name}_theta-{theta:g}', curve=''
      )
      for theta in thetas
  ]
  return run_configs(configs, checkpointer, config.name)


def run_window_sweep(
    config: config_lib.RunConfig,
    windows: Sequence[float],
    checkpointer: checkpointer_lib.Checkpointer = (
        checkpointer_lib.NullCheckpointer()
    ),
) -> list[Summary]:
  """Runs `config` once per time window length."""
  configs = [
      config_lib.replace(
          config,
          time_window=window,
          name=f'{config.name}_T-{window:g}',
          curve='',
      )
      for window in windows
  ]
  return run_configs(configs, checkpointer, config.name)


def summarize_records(
    summaries: Sequence[Summary], print_summary: bool = False
) -> pd.DataFrame:
  """One row per curve.

  Columns: scenario, method, theta, initial and final error, iterations to
  tolerance, the theoretical prediction and the wall time.

  Args:
    summaries: Results of `run_config` or `run_scenario`.
    print_summary: Whether to print the table.

  Returns:
    The table, indexed by curve.
  """
  columns = [
      constants.RecordConstants.SCENARIO,
      constants.RecordConstants.METHOD,
      constants.RecordConstants.THETA,
      constants.RecordConstants.INITIAL_ERROR,
      constants.RecordConstants.FINAL_ERROR,
      constants.RecordConstants.ITERATIONS_TO_TOLERANCE,
      constants.RecordConstants.THEORETICAL_ITERATIONS,
      constants.RecordConstants.WALL_TIME,
  ]
  df = pd.DataFrame(
      [{c: s.get(c) for c in columns} for s in summaries],
      index=pd.Index(
          [s[constants.RecordConstants.CURVE] for s in summaries],
          name=constants.RecordConstants.CURVE,
      ),
      columns=columns,
  )
  if print_summary and not df.empty:
    pd.set_option('display.max_columns', 100)
    pd.set_option('display.max_rows', 1000)
    pd.set_option('display.width', 1000)
    print(f'\n\n{df}')
  return df
