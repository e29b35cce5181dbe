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

"""Neumann-Neumann waveform relaxation.

One iteration solves a Dirichlet problem on every subdomain with the current
interface traces, a homogeneous Neumann correction problem driven by the
jump of the normal derivatives, and relaxes the traces with the corrections:

  w_i <- w_i - theta * (psi_i(x_i) + psi_{i+1}(x_i)).

Where the speed jumps, the normal derivatives are weighted by the speed on
each side before they are summed, and each correction problem divides the sum
by its own speed again. With a constant speed this is the plain sum, which
stays available as the `PLAIN` weighting.

Two neighbors with different speeds or time grids resolve different time
frequencies, and the iteration amplifies what only one side can represent.
The traces of such an interface are band limited after every update, and at
iteration 0, to half the smaller resolved frequency of the two neighbors.
"""

import dataclasses
from typing import Any, Sequence

import numpy as np
from wave_relaxation import iteration_runner
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.core import traces
from wave_relaxation.methods import base_method
from wave_relaxation.methods import guesses
from wave_relaxation.methods import reference
from wave_relaxation.methods import subdomains
from wave_relaxation.solvers import stepper
from wave_relaxation.solvers import transfer

NAME = 'nnwr'

SPEED_WEIGHTED = reference.FLUX_SPEED_WEIGHTED
PLAIN = reference.FLUX_PLAIN
FLUX_WEIGHTINGS = reference.FLUX_WEIGHTINGS


def check_theta(theta: float) -> float:
  if not 0 < theta <= 1:
    raise ValueError(f'theta out of (0,1]: {theta}')
  return float(theta)


@dataclasses.dataclass(frozen=True, eq=False)
class NnwrState:
  """Interface traces after `iteration` sweeps.

  Attributes:
    iteration: Number of completed sweeps.
    traces: One Dirichlet trace per interior interface, on its carrier grid.
    theta: Relaxation parameter in (0, 1].
  """

  iteration: int
  traces: tuple[traces.SpaceTimeTrace, ...]
  theta: float

  def __post_init__(self):
    check_theta(self.theta)
    object.__setattr__(self, 'traces', tuple(self.traces))


def _subdomain_data(
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
    data: Sequence[subdomains.SubdomainData] | None,
) -> Sequence[subdomains.SubdomainData]:
  if data is not None:
    return data
  return [
      subdomains.build_subdomain(problem, partition, i)
      for i in range(partition.num_subdomains)
  ]


def _side_condition(
    problem, data, side, interface_trace
) -> stepper.BoundaryCondition:
  if interface_trace is None:
    return subdomains.physical_condition(problem, data, side)
  return stepper.dirichlet(transfer.resample(interface_trace, data.time_grid))


def dirichlet_step(
    state: NnwrState,
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
    data: Sequence[subdomains.SubdomainData] | None = None,
) -> list[stepper.SubdomainField]:
  """Solves every subdomain with the state's traces as Dirichlet data.

  Args:
    state: Current interface traces.
    problem: The global problem; provides the physical boundary data.
    partition: The decomposition.
    data: Pre-sampled subdomain data, to skip resampling the problem.

  Returns:
    One field per subdomain.
  """
  if len(state.traces) != partition.num_interfaces:
    raise ValueError(
        f'Got {len(state.traces)} traces for {partition.num_interfaces}'
        ' interfaces.'
    )
  data = _subdomain_data(problem, partition, data)
  fields = []
  for i, sub in enumerate(data):
    left = None if i == 0 else state.traces[i - 1]
    right = None if i == partition.num_subdomains - 1 else state.traces[i]
    bc = stepper.BoundarySpec(
        _side_condition(problem, sub, stepper.LEFT, left),
        _side_condition(problem, sub, stepper.RIGHT, right),
    )
    fields.append(subdomains.solve(sub, bc))
  return fields


def interface_residuals(
    fields: Sequence[stepper.SubdomainField],
    weighting: str = SPEED_WEIGHTED,
) -> list[traces.SpaceTimeTrace]:
  """Sum of the outward normal derivatives at each interface.

  Each residual lives on the carrier grid of its interface, which is the
  time grid of the left neighbor.

  Args:
    fields: Dirichlet solutions, one per subdomain.
    weighting: `SPEED_WEIGHTED` multiplies each derivative by the speed on
      its side, `PLAIN` adds them as they are.

  Returns:
    One residual per interior interface.
  """
  reference.check_flux_weighting(weighting)
  result = []
  for left, right in zip(fields, fields[1:]):
    flux_left = stepper.extract_normal_derivative(
        left, stepper.RIGHT, stepper.CONSISTENT
    )
    flux_right = transfer.resample(
        stepper.extract_normal_derivative(
            right, stepper.LEFT, stepper.CONSISTENT
        ),
        left.time_grid,
    )
    if weighting == PLAIN:
      values = flux_left.values + flux_right.values
    else:
      values = (
          left.speed_at(stepper.RIGHT) * flux_left.values
          + right.speed_at(stepper.LEFT) * flux_right.values
      )
    result.append(traces.SpaceTimeTrace(left.time_grid, values, traces.FLUX))
  return result


def neumann_step(
    fields: Sequence[stepper.SubdomainField],
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
    data: Sequence[subdomains.SubdomainData] | None = None,
    weighting: str = SPEED_WEIGHTED,
) -> list[stepper.SubdomainField]:
  """Solves the homogeneous correction problems.

  Args:
    fields: Dirichlet solutions of the current sweep.
    problem: The global problem.
    partition: The decomposition.
    data: Pre-sampled subdomain data.
    weighting: How the normal derivatives are combined, see
      `interface_residuals`. Speed-weighted residuals are divided by the
      speed of the correction subdomain.

  Returns:
    One correction field per subdomain. Physical boundaries carry zero
    Dirichlet data, interfaces carry the residual of the Dirichlet solves.
  """
  if len(fields) != partition.num_subdomains:
    raise ValueError(
        f'Got {len(fields)} fields for {partition.num_subdomains} subdomains.'
    )
  data = _subdomain_data(problem, partition, data)
  residuals = interface_residuals(fields, weighting)
  corrections = []
  for i, sub in enumerate(data):
    homogeneous = sub.homogeneous()
    conditions = []
    for side, k in ((stepper.LEFT, i - 1), (stepper.RIGHT, i)):
      if k < 0 or k >= partition.num_interfaces:
        conditions.append(stepper.dirichlet(homogeneous.zero_trace()))
        continue
      residual = transfer.resample(residuals[k], sub.time_grid)
      if weighting == SPEED_WEIGHTED:
        residual = residual.with_values(residual.values / sub.speed_at(side))
      conditions.append(stepper.neumann(residual))
    corrections.append(
        subdomains.solve(homogeneous, stepper.BoundarySpec(*conditions))
    )
  return corrections


def resolved_frequency(
    data: subdomains.SubdomainData, side: str, dx: float
) -> float:
  """Highest time frequency a subdomain grid carries at one side."""
  dt = float(data.time_grid[1] - data.time_grid[0])
  courant = min(1.0, data.speed_at(side) * dt / dx)
  return 2 * float(np.arcsin(courant)) / dt


def trace_bands(
    partition: partition_lib.Partition,
    data: Sequence[subdomains.SubdomainData],
) -> tuple[float | None, ...]:
  """Band limit of every interface, None where the neighbors match.

  Neighbors match when they have the same speed at the interface and the
  same time grid.
  """
  bands = []
  for left, right in zip(data, data[1:]):
    same_speed = np.isclose(
        left.speed_at(stepper.RIGHT), right.speed_at(stepper.LEFT)
    )
    same_grid = left.time_grid.shape == right.time_grid.shape and np.allclose(
        left.time_grid, right.time_grid
    )
    if same_speed and same_grid:
      bands.append(None)
      continue
    bands.append(
        0.5
        * min(
            resolved_frequency(left, stepper.RIGHT, partition.dx),
            resolved_frequency(right, stepper.LEFT, partition.dx),
        )
    )
  return tuple(bands)


def _band_limited(
    interface_traces: Sequence[traces.SpaceTimeTrace],
    bands: Sequence[float | None] | None,
) -> tuple[traces.SpaceTimeTrace, ...]:
  if bands is None:
    return tuple(interface_traces)
  return tuple(
      trace if band is None else transfer.band_limit(trace, band)
      for trace, band in zip(interface_traces, bands)
  )


def update_traces(
    state: NnwrState,
    corrections: Sequence[stepper.SubdomainField],
    theta: float | None = None,
    bands: Sequence[float | None] | None = None,
) -> NnwrState:
  """Relaxes the traces with the correction fields.

  Args:
    state: Traces of the finished sweep.
    corrections: Neumann correction fields, one per subdomain.
    theta: Relaxation parameter; defaults to the state's.
    bands: Optional band limit per interface, see `trace_bands`.

  Returns:
    The next state.
  """
  theta = state.theta if theta is None else check_theta(theta)
  if len(corrections) != len(state.traces) + 1:
    raise ValueError(
        f'Got {len(corrections)} corrections for {len(state.traces)} traces.'
    )
  updated = []
  for i, trace in enumerate(state.traces):
    from_left = transfer.resample(
        corrections[i].boundary_trace(stepper.RIGHT), trace.time_grid
    )
    from_right = transfer.resample(
        corrections[i + 1].boundary_trace(stepper.LEFT), trace.time_grid
    )
    updated.append(
        trace.with_values(
            trace.values - theta * (from_left.values + from_right.values)
        )
    )
  return NnwrState(
      state.iteration + 1, _band_limited(updated, bands), theta
  )


def reconstruct_solution(
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
    interface_traces: Sequence[traces.SpaceTimeTrace],
) -> list[stepper.SubdomainField]:
  """Subdomain solutions obtained from a set of interface traces."""
  state = NnwrState(0, tuple(interface_traces), 1.0)
  return dirichlet_step(state, problem, partition)


class NnwrMethod(base_method.WaveformRelaxationMethod):
  """NNWR as a resettable method for the iteration runner."""

  def __init__(
      self,
      problem: problems.WaveProblem,
      partition: partition_lib.Partition,
      theta: float,
      guess: guesses.InitialGuess | Sequence[traces.SpaceTimeTrace],
      track_solution: bool = False,
      name: str = NAME,
      flux_weighting: str = SPEED_WEIGHTED,
      band_limit: bool = True,
  ):
    super().__init__(problem, partition, name)
    if partition.num_subdomains < 2:
      raise ValueError('NNWR needs at least two subdomains.')
    self._theta = check_theta(theta)
    self._guess = guess
    self._track_solution = track_solution
    self._flux_weighting = reference.check_flux_weighting(flux_weighting)
    self._data = _subdomain_data(problem, partition, None)
    self._bands = trace_bands(partition, self._data) if band_limit else None
    self._state = None
    self._solution_errors = []

  @property
  def theta(self) -> float:
    return self._theta

  @property
  def seed(self) -> int | None:
    if isinstance(self._guess, guesses.InitialGuess):
      if self._guess.kind == guesses.RANDOM:
        return self._guess.seed
    return None

  @property
  def bands(self) -> tuple[float | None, ...] | None:
    return self._bands

  @property
  def metadata(self) -> dict[str, Any]:
    if not self._track_solution:
      return {}
    return {'solution_errors': list(self._solution_errors)}

  @property
  def state(self) -> NnwrState | None:
    return self._state

  def reset(self) -> tuple[traces.SpaceTimeTrace, ...]:
    initial = _band_limited(
        guesses.resolve(self._guess, self.problem, self.partition),
        self._bands,
    )
    self._state = NnwrState(0, initial, self._theta)
    self._solution_errors = []
    if self._track_solution:
      self._record_solution_error(
          dirichlet_step(self._state, self.problem, self.partition, self._data)
      )
    return self._state.traces

  def step(self) -> base_method.IterationResult:
    fields = dirichlet_step(
        self._state, self.problem, self.partition, self._data
    )
    corrections = neumann_step(
        fields, self.problem, self.partition, self._data, self._flux_weighting
    )
    self._state = update_traces(
        self._state, corrections, bands=self._bands
    )
    if self._track_solution:
      self._record_solution_error(
          dirichlet_step(self._state, self.problem, self.partition, self._data)
      )
    correction_max = max(float(np.max(np.abs(c.values))) for c in corrections)
    return base_method.IterationResult(
        traces=self._state.traces, data={'correction_max': correction_max}
    )

  def mono_reference(self) -> reference.MonoReference:
    if self._reference is None:
      self._reference = reference.mono_reference(
          self.problem, self.partition, self._flux_weighting
      )
    return self._reference

  def _record_solution_error(self, fields) -> None:
    self._solution_errors.append(
        reference.solution_error(fields, self.mono_reference())
    )


def run_nnwr(
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
    theta: float,
    guess: guesses.InitialGuess | Sequence[traces.SpaceTimeTrace],
    max_iterations: int = 20,
    tolerance: float = 1e-12,
    track_solution: bool = False,
    flux_weighting: str = SPEED_WEIGHTED,
    band_limit: bool = True,
) -> tuple[traces.ConvergenceRecord, tuple[traces.SpaceTimeTrace, ...]]:
  """Runs NNWR and measures it against the mono-domain reference.

  Args:
    problem: The problem to solve.
    partition: Its decomposition; at least two subdomains.
    theta: Relaxation parameter in (0, 1].
    guess: Recipe for, or explicit, iteration-0 traces.
    max_iterations: Iteration budget.
    tolerance: Stop once error(k) <= tolerance * error(0).
    track_solution: Also record the relative error of the reconstructed
      subdomain solutions after every iteration.
    flux_weighting: `SPEED_WEIGHTED` or `PLAIN`, see `interface_residuals`.
      The reference uses the matching interface stencil.
    band_limit: Band limit the traces of interfaces whose neighbors differ.

  Returns:
    The convergence record and the final traces.
  """
  method = NnwrMethod(
      problem,
      partition,
      theta,
      guess,
      track_solution,
      flux_weighting=flux_weighting,
      band_limit=band_limit,
  )
  return iteration_runner.run_iterations(method, max_iterations, tolerance)
