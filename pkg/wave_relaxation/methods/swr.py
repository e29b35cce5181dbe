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

"""Schwarz waveform relaxation with Dirichlet or first-order transmission.

Subdomain i is extended by `overlap` past each of its interior interfaces, so
neighbors share a strip of width 2 * overlap. All subdomains are solved with
data from the previous sweep (Jacobi). With first-order transmission the
datum handed to a subdomain is B u = d/dn u + (1/c) u_t + p u of the
neighbor's field at the boundary node, with n the receiving subdomain's
outward normal.
"""

import dataclasses
from typing import Sequence

import numpy as np
from wave_relaxation import iteration_runner
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.core import traces
from wave_relaxation.methods import base_method
from wave_relaxation.methods import guesses
from wave_relaxation.methods import subdomains
from wave_relaxation.solvers import stepper
from wave_relaxation.solvers import transfer

CLASSICAL = 'classical-dirichlet'
FIRST_ORDER = 'first-order'
TRANSMISSIONS = (CLASSICAL, FIRST_ORDER)


@dataclasses.dataclass(frozen=True)
class SwrConfig:
  """Schwarz variant.

  Attributes:
    overlap: Extension of every subdomain past each interior interface; a
      multiple of dx.
    transmission: CLASSICAL or FIRST_ORDER.
    p: Zeroth-order coefficient of FIRST_ORDER transmission, >= 0.
  """

  overlap: float = 0.0
  transmission: str = FIRST_ORDER
  p: float = 0.0

  def __post_init__(self):
    if self.transmission not in TRANSMISSIONS:
      raise ValueError(
          f'Unknown transmission {self.transmission!r}; expected one of'
          f' {TRANSMISSIONS}.'
      )
    if self.overlap < 0:
      raise ValueError(f'overlap must be >= 0, got {self.overlap}.')
    if self.p < 0:
      raise ValueError(f'p must be >= 0, got {self.p}.')

  @property
  def method_name(self) -> str:
    return 'swr-classical' if self.transmission == CLASSICAL else (
        'swr-optimized'
    )


def overlap_nodes(config: SwrConfig, partition: partition_lib.Partition) -> int:
  """Overlap in grid cells, validated against the partition."""
  cells = int(round(config.overlap / partition.dx))
  if abs(cells * partition.dx - config.overlap) > 1e-9 * partition.dx:
    raise ValueError(
        f'overlap {config.overlap} is not a multiple of dx = {partition.dx}.'
    )
  if cells * partition.dx >= partition.h_min - 1e-12:
    raise ValueError(
        f'overlap {config.overlap} must be smaller than the narrowest'
        f' subdomain ({partition.h_min}).'
    )
  return cells


def _time_derivative(values: np.ndarray, time_grid: np.ndarray) -> np.ndarray:
  return np.gradient(values, time_grid[1] - time_grid[0], axis=0)


class SwrMethod(base_method.WaveformRelaxationMethod):
  """Overlapping or non-overlapping Schwarz waveform relaxation."""

  def __init__(
      self,
      problem: problems.WaveProblem,
      partition: partition_lib.Partition,
      config: SwrConfig,
      guess: guesses.InitialGuess | Sequence[traces.SpaceTimeTrace] = (
          guesses.InitialGuess()
      ),
  ):
    super().__init__(problem, partition, config.method_name)
    if partition.num_subdomains < 2:
      raise ValueError('Schwarz iterations need at least two subdomains.')
    if (
        problem.dimension == 1
        and problem.speed.kind == problems.PIECEWISE
        and not problem.speed.is_constant
    ):
      raise ValueError(
          'Piecewise speeds are not supported by SWR; give the speed as a'
          ' profile or table of x instead.'
      )
    cells = overlap_nodes(config, partition)
    if config.transmission == CLASSICAL and cells == 0 and partition.is_2d:
      raise ValueError(
          'Classical Schwarz without overlap does not converge in 2D; use a'
          ' positive overlap.'
      )
    self._config = config
    self._guess = guess
    last = partition.num_subdomains - 1
    self._data = []
    for i in range(partition.num_subdomains):
      first, end = partition.node_range(i)
      self._data.append(
          subdomains.build_subdomain(
              problem,
              partition,
              i,
              first if i == 0 else first - cells,
              end if i == last else end + cells,
          )
      )
    self._left_data = [None] * partition.num_subdomains
    self._right_data = [None] * partition.num_subdomains

  @property
  def config(self) -> SwrConfig:
    return self._config

  @property
  def seed(self) -> int | None:
    if isinstance(self._guess, guesses.InitialGuess):
      if self._guess.kind == guesses.RANDOM:
        return self._guess.seed
    return None

  def _x(self, node: int) -> float:
    return self.partition.interfaces[0] + self.partition.dx * node

  def _guess_traces(
      self,
  ) -> tuple[
      tuple[traces.SpaceTimeTrace, ...], dict[int, traces.SpaceTimeTrace]
  ]:
    """Iteration-0 traces at the interfaces and at the artificial boundaries.

    Every node is drawn once, on the grid of the first subdomain that needs
    it, and resampled for the others.
    """
    partition = self.partition
    interface_nodes = list(partition.node_offsets[1:-1])
    if not isinstance(self._guess, guesses.InitialGuess):
      interface_traces = guesses.resolve(self._guess, self.problem, partition)
      by_node = dict(zip(interface_nodes, interface_traces))
      for sub in self._data:
        for node in (sub.first_node, sub.last_node):
          if node not in by_node and 0 < node < partition.num_nodes - 1:
            raise ValueError(
                'Explicit guesses only cover the interfaces; use a guess'
                ' recipe with a positive overlap.'
            )
      return interface_traces, by_node
    needed = {}
    for i, node in enumerate(interface_nodes):
      needed.setdefault(node, partition.carrier_grid(i))
    for i, sub in enumerate(self._data):
      if i > 0:
        needed.setdefault(sub.first_node, sub.time_grid)
      if i < partition.num_subdomains - 1:
        needed.setdefault(sub.last_node, sub.time_grid)
    nodes = list(needed)
    sampled = self._guess.sample(
        self.problem,
        [self._x(node) for node in nodes],
        [needed[node] for node in nodes],
        partition.y_nodes() if partition.is_2d else None,
    )
    by_node = dict(zip(nodes, sampled))
    return tuple(by_node[node] for node in interface_nodes), by_node

  def _initial_ghost(self, node: int) -> float | np.ndarray:
    x = np.asarray(self._x(node))
    if self.partition.is_2d:
      y = self.partition.y_nodes()
      return np.broadcast_to(np.asarray(self.problem.u0(x, y), float), y.shape)
    return float(self.problem.u0(x))

  def _datum_from_guess(
      self, trace: traces.SpaceTimeTrace, sub: subdomains.SubdomainData,
      side: str,
  ) -> traces.SpaceTimeTrace:
    trace = transfer.resample(trace, sub.time_grid)
    if self._config.transmission == CLASSICAL:
      return trace
    rate = _time_derivative(trace.values, sub.time_grid)
    return trace.with_values(
        rate / sub.speed_at(side) + self._config.p * trace.values
    )

  def reset(self) -> tuple[traces.SpaceTimeTrace, ...]:
    interface_traces, by_node = self._guess_traces()
    last = self.partition.num_subdomains - 1
    for i, sub in enumerate(self._data):
      self._left_data[i] = None if i == 0 else self._datum_from_guess(
          by_node[sub.first_node], sub, stepper.LEFT
      )
      self._right_data[i] = None if i == last else self._datum_from_guess(
          by_node[sub.last_node], sub, stepper.RIGHT
      )
    return tuple(interface_traces)

  def _condition(
      self, i: int, side: str
  ) -> stepper.BoundaryCondition:
    sub = self._data[i]
    datum = self._left_data[i] if side == stepper.LEFT else self._right_data[i]
    if datum is None:
      return subdomains.physical_condition(self.problem, sub, side)
    if self._config.transmission == CLASSICAL:
      return stepper.dirichlet(datum)
    ghost_node = sub.first_node - 1 if side == stepper.LEFT else (
        sub.last_node + 1
    )
    return stepper.first_order(
        datum, self._config.p, self._initial_ghost(ghost_node)
    )

  def _transmitted(
      self,
      neighbor: int,
      field: stepper.SubdomainField,
      node: int,
      receiver: subdomains.SubdomainData,
      side: str,
  ) -> traces.SpaceTimeTrace:
    """Datum for `receiver`'s `side` read off the neighbor's field."""
    source = self._data[neighbor]
    j = node - source.first_node
    values = field.values[:, j]
    if self._config.transmission == CLASSICAL:
      datum = values
    else:
      speed = receiver.speed_at(side)
      rate = _time_derivative(values, field.time_grid) / speed
      last = field.values.shape[1] - 1
      if 0 < j < last:
        slope = (field.values[:, j + 1] - field.values[:, j - 1]) / (
            2.0 * field.dx
        )
        normal = -slope if side == stepper.LEFT else slope
        datum = normal + rate + self._config.p * values
      else:
        # The node is the neighbor's own boundary, where its normal
        # derivative is fixed by the datum it was solved with.
        previous = (
            self._right_data[neighbor] if j == last
            else self._left_data[neighbor]
        )
        datum = 2.0 * (rate + self._config.p * values) - previous.values
    return transfer.resample(
        traces.SpaceTimeTrace(field.time_grid, datum), receiver.time_grid
    )

  def step(self) -> base_method.IterationResult:
    fields = []
    for i, sub in enumerate(self._data):
      bc = stepper.BoundarySpec(
          self._condition(i, stepper.LEFT), self._condition(i, stepper.RIGHT)
      )
      fields.append(subdomains.solve(sub, bc))
    last = self.partition.num_subdomains - 1
    left_data = [None] * len(fields)
    right_data = [None] * len(fields)
    for i, sub in enumerate(self._data):
      if i > 0:
        left_data[i] = self._transmitted(
            i - 1, fields[i - 1], sub.first_node, sub, stepper.LEFT
        )
      if i < last:
        right_data[i] = self._transmitted(
            i + 1, fields[i + 1], sub.last_node, sub, stepper.RIGHT
        )
    self._left_data, self._right_data = left_data, right_data
    interface_traces = []
    for i in range(self.partition.num_interfaces):
      node = self.partition.node_offsets[i + 1]
      column = fields[i].values[:, node - self._data[i].first_node]
      interface_traces.append(
          traces.SpaceTimeTrace(fields[i].time_grid, column)
      )
    return base_method.IterationResult(traces=tuple(interface_traces))


def run_swr(
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
    config: SwrConfig,
    guess: guesses.InitialGuess | Sequence[traces.SpaceTimeTrace] = (
        guesses.InitialGuess()
    ),
    max_iterations: int = 20,
    tolerance: float = 1e-12,
) -> tuple[traces.ConvergenceRecord, tuple[traces.SpaceTimeTrace, ...]]:
  """Runs Schwarz waveform relaxation; errors are read at the interfaces.

  Raises:
    ValueError: For an overlap that is not a multiple of dx or not smaller
      than the narrowest subdomain, or for classical transmission without
      overlap in 2D.
  """
  method = SwrMethod(problem, partition, config, guess)
  return iteration_runner.run_iterations(method, max_iterations, tolerance)
