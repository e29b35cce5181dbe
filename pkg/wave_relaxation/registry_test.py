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

from absl.testing import absltest
from absl.testing import parameterized
from wave_relaxation import config as config_lib
from wave_relaxation import registry

_Registry = registry.ScenarioRegistry


class RegistryTest(parameterized.TestCase):

  def setUp(self):
    super().setUp()
    self.registry = registry.ScenarioRegistry()

  def test_names(self):
    self.assertEqual(
        self.registry.names(),
        [
            'E1-theta-sweep-1d',
            'E2-windows-1d',
            'E3-variable-c',
            'E4-2d-theta',
            'E5-compare-1d',
            'E6-compare-2d',
            'E7-nonuniform-dt',
            'E8-scalability',
            'O1-oracle-1d',
            'O2-oracle-chi',
        ],
    )

  @parameterized.parameters(
      (_Registry.THETA_SWEEP_1D, 5),
      (_Registry.WINDOWS_1D, 4),
      (_Registry.VARIABLE_SPEED, 8),
      (_Registry.THETA_2D, 8),
      (_Registry.COMPARE_1D, 8),
      (_Registry.COMPARE_2D, 7),
      (_Registry.NONUNIFORM_DT, 1),
      (_Registry.SCALABILITY, 3),
      (_Registry.ORACLE_1D, 3),
  )
  def test_every_curve_validates(self, name, num_curves):
    scenario = self.registry.get_scenario(name)
    configs = scenario.configs()
    self.assertLen(configs, num_curves)
    names = [c.curve_name for c in configs]
    self.assertLen(set(names), num_curves)
    for curve in names:
      self.assertStartsWith(curve, name + '_')
    for config in configs:
      problem = config_lib.build_problem(config)
      config_lib.build_partition(config, problem)

  def test_chi_check_has_no_runs(self):
    scenario = self.registry.get_scenario(_Registry.ORACLE_CHI)
    self.assertEqual(scenario.kind, registry.CHI_CHECK)
    self.assertEmpty(scenario.configs())
    self.assertLen(registry.CHI_CHECK_GRID, 12)
    for _, beta, t in registry.CHI_CHECK_GRID:
      self.assertGreater(t, beta)

  def test_unknown_scenario_suggests(self):
    with self.assertRaisesRegex(ValueError, "Did you mean 'E2-windows-1d'"):
      self.registry.get_scenario('E2-window-1d')

  def test_theta_sweep(self):
    configs = self.registry.get_scenario(_Registry.THETA_SWEEP_1D).configs()
    self.assertEqual(
        [c.theta for c in configs], [0.1, 0.2, 0.25, 0.3, 0.4]
    )
    for config in configs:
      self.assertEqual(config.time_window, 8.0)
      self.assertEqual(config.interfaces, (0.6, 1.2, 1.7, 4.0))

  def test_scalability_keeps_width_over_window(self):
    configs = self.registry.get_scenario(_Registry.SCALABILITY).configs()
    ratios = set()
    for config in configs:
      partition = config_lib.build_partition(
          config, config_lib.build_problem(config)
      )
      widths = {round(w, 12) for w in partition.widths}
      self.assertLen(widths, 1)
      ratios.add(round(partition.h_min / config.time_window, 12))
    self.assertEqual(ratios, {0.5})

  def test_compare_2d_methods(self):
    configs = self.registry.get_scenario(_Registry.COMPARE_2D).configs()
    self.assertEqual(
        [(len(c.interfaces), c.method) for c in configs],
        [
            (1, 'nnwr'),
            (1, 'dnwr'),
            (1, 'swr-classical'),
            (1, 'swr-optimized'),
            (2, 'nnwr'),
            (2, 'swr-classical'),
            (2, 'swr-optimized'),
        ],
    )
    for config in configs:
      self.assertEqual(config.seed, 42)
      self.assertEqual(config.dimension, 2)


if __name__ == '__main__':
  absltest.main()
