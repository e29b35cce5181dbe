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

"""Base class of the waveform relaxation methods."""

import abc
import dataclasses
from typing import Any

from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.core import traces
from wave_relaxation.methods import reference


@dataclasses.dataclass()
class IterationResult:
  """Result of one iteration.

  Attributes:
    traces: Interface traces after the iteration, on the carrier grids.
    data: Method-specific data produced by the iteration.
  """

  traces: tuple[traces.SpaceTimeTrace, ...]
  data: dict[str, Any] = dataclasses.field(default_factory=dict)


class WaveformRelaxationMethod(abc.ABC):
  """Iterates the interface traces of a decomposed wave problem."""

  def __init__(
      self,
      problem: problems.WaveProblem,
      partition: partition_lib.Partition,
      name: str = '',
  ):
    self._problem = problem
    self._partition = partition
    self._name = name
    self._reference = None

  @property
  def problem(self) -> problems.WaveProblem:
    return self._problem

  @property
  def partition(self) -> partition_lib.Partition:
    return self._partition

  @property
  def name(self) -> str:
    return self._name

  @property
  def theta(self) -> float | None:
    """Relaxation parameter, for methods that have one."""
    return None

  @property
  def seed(self) -> int | None:
    return None

  @property
  def metadata(self) -> dict[str, Any]:
    """Extras copied into the convergence record."""
    return {}

  @abc.abstractmethod
  def reset(self) -> tuple[traces.SpaceTimeTrace, ...]:
    """Starts over and returns the iteration-0 interface traces."""

  @abc.abstractmethod
  def step(self) -> IterationResult:
    """Performs one iteration."""

  def mono_reference(self) -> reference.MonoReference:
    if self._reference is None:
      self._reference = reference.mono_reference(
          self._problem, self._partition
      )
    return self._reference

  def reference_traces(self) -> tuple[traces.SpaceTimeTrace, ...]:
    """Traces the iterates converge to."""
    return self.mono_reference().interface_traces()
