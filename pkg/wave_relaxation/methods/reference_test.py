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

import numpy as np
from absl.testing import absltest
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.methods import reference
from wave_relaxation.solvers import stepper


class MonoReferenceTest(absltest.TestCase):

  def test_standing_wave_is_reproduced(self):
    problem = problems.WaveProblem1D(
        x_lo=0.0,
        x_hi=2.0,
        time_window=2.0,
        speed=problems.WaveSpeed(constant=1.0),
        u0=lambda x: np.sin(np.pi * x),
    )
    partition = partition_lib.build_partition(
        problem, [0.5, 1.25], dx=0.05, dt=0.05
    )
    mono = reference.mono_reference(problem, partition)
    for i, trace in enumerate(mono.interface_traces()):
      x = partition.interior_interfaces[i]
      t = partition.carrier_grid(i)
      np.testing.assert_allclose(
          trace.values, np.sin(np.pi * x) * np.cos(np.pi * t), atol=1e-10
      )

  def test_piecewise_speed_couplings(self):
    problem = problems.WaveProblem1D(
        x_lo=0.0,
        x_hi=2.0,
        time_window=1.0,
        speed=problems.WaveSpeed(pieces=(1.0, 2.0)),
    )
    partition = partition_lib.build_partition(
        problem, [1.0], dx=0.05, dt=(0.05, 0.025)
    )
    speed, left, right = reference.mono_couplings(problem, partition)
    node = partition.node_offsets[1]
    self.assertEqual(speed[0], 1.0)
    self.assertEqual(speed[-1], 2.0)
    self.assertAlmostEqual(left[node], 4.0 / 3.0)
    self.assertAlmostEqual(right[node], 8.0 / 3.0)
    self.assertEqual(left[node - 1], 1.0)
    self.assertEqual(right[node + 1], 4.0)

    _, left, right = reference.mono_couplings(
        problem, partition, reference.FLUX_PLAIN
    )
    self.assertAlmostEqual(left[node], 8.0 / 5.0)
    self.assertAlmostEqual(right[node], 8.0 / 5.0)
    self.assertEqual(left[node - 1], 1.0)
    self.assertEqual(right[node + 1], 4.0)

    with self.assertRaisesRegex(ValueError, 'flux weighting'):
      reference.mono_couplings(problem, partition, 'harmonic')

  def test_restrict_and_solution_error(self):
    problem = problems.WaveProblem1D(
        x_lo=0.0,
        x_hi=2.0,
        time_window=1.0,
        speed=problems.WaveSpeed(pieces=(1.0, 2.0)),
        u0=lambda x: x * (2.0 - x),
    )
    partition = partition_lib.build_partition(
        problem, [1.0], dx=0.05, dt=(0.05, 0.025)
    )
    mono = reference.mono_reference(problem, partition)
    self.assertEqual(mono.field.time_grid.size, 41)
    fields = []
    for i in range(partition.num_subdomains):
      first, last = partition.node_range(i)
      grid = partition.time_grid(i)
      values = mono.restrict(first, last, grid)
      self.assertEqual(values.shape, (grid.size, last - first + 1))
      fields.append(
          stepper.SubdomainField1D(
              x=partition.x_nodes(i),
              time_grid=grid,
              values=values,
              left_coupling=np.ones(values.shape[1]),
              right_coupling=np.ones(values.shape[1]),
              v0=np.zeros(values.shape[1]),
          )
      )
    np.testing.assert_array_equal(
        fields[0].values, mono.field.values[::2, :21]
    )
    self.assertEqual(reference.solution_error(fields, mono), 0.0)

    shifted = fields[1].values + 0.5
    fields[1] = stepper.SubdomainField1D(
        x=fields[1].x,
        time_grid=fields[1].time_grid,
        values=shifted,
        left_coupling=fields[1].left_coupling,
        right_coupling=fields[1].right_coupling,
        v0=fields[1].v0,
    )
    scale = np.max(np.abs(mono.field.values))
    self.assertAlmostEqual(
        reference.solution_error(fields, mono, relative=False), 0.5
    )
    self.assertAlmostEqual(reference.solution_error(fields, mono), 0.5 / scale)


if __name__ == '__main__':
  absltest.main()
