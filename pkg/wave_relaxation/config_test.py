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

import os
import tempfile
import textwrap

from absl.testing import absltest
from absl.testing import parameterized
from wave_relaxation import config as config_lib
from wave_relaxation.core import problems

_MINIMAL = textwrap.dedent("""\
    [run]
    method = nnwr

    [problem]
    domain = 0, 5
    g_lo = power:2  # left boundary

    [partition]
    interfaces = 1
    dx = 0.1
    dt = 0.1

    [iteration]
    time_window = 1
    """)


def _sections(**changes):
  sections = {
      config_lib.RUN: {'method': 'nnwr'},
      config_lib.PROBLEM: {'domain': '0, 5'},
      config_lib.PARTITION: {'interfaces': '1', 'dx': '0.1', 'dt': '0.1'},
      config_lib.ITERATION: {'time_window': '1'},
  }
  for key, value in changes.items():
    section = config_lib.section_of(key)
    if value is None:
      sections[section].pop(key, None)
    else:
      sections.setdefault(section, {})[key] = value
  return sections


class ParseTest(absltest.TestCase):

  def test_minimal_config_gets_defaults(self):
    config = config_lib.parse_config_text(_MINIMAL)
    self.assertEqual(config.method, 'nnwr')
    self.assertEqual(config.domain, (0.0, 5.0))
    self.assertEqual(config.g_lo, 'power:2')
    self.assertEqual(config.dt, (0.1,))
    self.assertEqual(config.seed, 0)
    self.assertEqual(config.max_iterations, 20)
    self.assertEqual(config.tolerance, 1e-12)
    self.assertIsNone(config.theta)
    self.assertEqual(config.resolved_theta, 0.25)
    self.assertEqual(config.curve_name, 'run')
    self.assertEqual(config.flux_weighting, 'speed')

  def test_builds_problem_and_partition(self):
    config = config_lib.parse_config_text(_MINIMAL)
    problem = config_lib.build_problem(config)
    self.assertIsInstance(problem, problems.WaveProblem1D)
    partition = config_lib.build_partition(config, problem)
    self.assertEqual(partition.num_subdomains, 2)

  def test_parse_error_names_the_line(self):
    text = '[run]\nmethod = nnwr\nthis line is broken\n'
    with self.assertRaisesRegex(config_lib.ConfigError, '^line 3: ') as cm:
      config_lib.parse_config_text(text)
    self.assertEqual(cm.exception.line, 3)

  def test_missing_section_header(self):
    with self.assertRaisesRegex(config_lib.ConfigError, '^line 1: '):
      config_lib.parse_config_text('method = nnwr\n')

  def test_render_round_trip(self):
    config = config_lib.parse_config_text(_MINIMAL)
    self.assertEqual(
        config_lib.parse_config_text(config_lib.render(config)), config
    )

  def test_load_config_resolves_base_dir(self):
    with tempfile.TemporaryDirectory() as directory:
      path = os.path.join(directory, 'run.ini')
      with open(path, 'w') as f:
        f.write(_MINIMAL)
      config = config_lib.load_config(path)
    self.assertEqual(config.base_dir, os.path.abspath(directory))

  def test_load_missing_file(self):
    with self.assertRaisesRegex(config_lib.ConfigError, 'Cannot read'):
      config_lib.load_config('/nonexistent/run.ini')


class ValidationTest(parameterized.TestCase):

  def test_unknown_key_is_named_with_a_suggestion(self):
    with self.assertRaisesRegex(
        config_lib.ConfigError,
        r"\[iteration\] max_iteration: Unknown key\. Did you mean"
        r" 'max_iterations'\?",
    ) as cm:
      config_lib.from_sections(
          _sections() | {config_lib.ITERATION: {
              'time_window': '1', 'max_iteration': '5'}}
      )
    self.assertEqual(cm.exception.section, config_lib.ITERATION)
    self.assertEqual(cm.exception.key, 'max_iteration')

  def test_unknown_section(self):
    with self.assertRaisesRegex(config_lib.ConfigError, r'\[partitions\]'):
      config_lib.from_sections(_sections() | {'partitions': {}})

  def test_missing_required_key(self):
    with self.assertRaisesRegex(
        config_lib.ConfigError, r'\[partition\] dx: Missing required key'
    ):
      config_lib.from_sections(_sections(dx=None))

  @parameterized.named_parameters(
      ('theta_too_large', {'theta': '1.5'}, r'theta out of \(0,1\]'),
      ('theta_zero', {'theta': '0'}, r'theta out of \(0,1\]'),
      (
          'theta_for_schwarz',
          {'method': 'swr-classical', 'theta': '0.5'},
          'no relaxation parameter',
      ),
      ('overlap_for_nnwr', {'overlap': '0.2'}, 'overlap only applies'),
      ('p_for_classical', {'method': 'swr-classical', 'p': '1'}, 'p only'),
      ('num_modes_in_1d', {'num_modes': '8'}, 'num_modes only'),
      (
          'track_solution_for_dnwr',
          {'method': 'dnwr', 'track_solution': 'true'},
          'track_solution only',
      ),
      (
          'flux_weighting_for_dnwr',
          {'method': 'dnwr', 'flux_weighting': 'plain'},
          'flux_weighting only',
      ),
      (
          'unknown_flux_weighting',
          {'flux_weighting': 'harmonic'},
          r'\[iteration\] flux_weighting:',
      ),
      ('sin_guess_in_1d', {'guess': 't-sin-y'}, 'needs a 2D problem'),
      (
          'random_oracle_guess',
          {'method': 'oracle-nnwr', 'guess': 'random'},
          'deterministic',
      ),
      ('two_d_key_in_1d', {'g_top': 'zero'}, 'Not available for 1D'),
      ('unknown_method', {'method': 'nwr'}, r'\[run\] method:'),
      ('negative_tolerance', {'tolerance': '-1'}, r'tolerance:'),
      ('bad_number', {'dx': 'small'}, 'Not a number'),
      ('bad_boolean', {'track_solution': 'maybe'}, 'Not a boolean'),
      ('unknown_profile', {'g_hi': 'powr:2'}, r'\[problem\] g_hi:'),
      ('bad_speed', {'speed': 'piecewise:1,2,3'}, 'pieces for 2'),
      ('off_grid_interface', {'interfaces': '1.05'}, 'does not sit'),
  )
  def test_rejected(self, changes, pattern):
    with self.assertRaisesRegex(config_lib.ConfigError, pattern):
      config_lib.from_sections(_sections(**changes))

  def test_cfl_violation_names_the_subdomain(self):
    with self.assertRaisesRegex(
        config_lib.ConfigError,
        r'CFL condition violated on subdomain 2.*maximum admissible time'
        r' step is 0\.1',
    ):
      config_lib.from_sections(_sections(dt='0.1, 0.2'))

  def test_two_dimensional_needs_dy(self):
    with self.assertRaisesRegex(config_lib.ConfigError, 'need dy'):
      config_lib.from_sections(
          _sections(dimension='2', domain='0, 1', interfaces='0.5',
                    dx='0.05', dt='0.02')
      )

  def test_two_dimensional_config(self):
    config = config_lib.from_sections(
        _sections(dimension='2', domain='0, 1', interfaces='0.5',
                  dx='0.05', dy='0.3', dt='0.02', guess='t-sin-y',
                  g_left='power-sin:2')
    )
    self.assertEqual(config.dimension, 2)
    self.assertIsInstance(
        config_lib.build_problem(config), problems.WaveProblem2D
    )
    self.assertNotIn('g_lo', config.to_dict()[config_lib.PROBLEM])
    self.assertIn('dy', config.to_dict()[config_lib.PARTITION])


class ReplaceTest(absltest.TestCase):

  def test_replace_revalidates(self):
    config = config_lib.from_sections(_sections())
    changed = config_lib.replace(config, theta=0.5, max_iterations=3)
    self.assertEqual(changed.theta, 0.5)
    self.assertEqual(changed.max_iterations, 3)
    self.assertEqual(changed.domain, config.domain)
    with self.assertRaisesRegex(config_lib.ConfigError, 'theta out of'):
      config_lib.replace(config, theta=2.0)

  def test_section_of(self):
    self.assertEqual(config_lib.section_of('dx'), config_lib.PARTITION)
    with self.assertRaisesRegex(config_lib.ConfigError, 'Unknown key'):
      config_lib.section_of('dxx')

  def test_to_dict_uses_lists(self):
    config = config_lib.from_sections(_sections())
    document = config.to_dict()
    self.assertEqual(document[config_lib.PARTITION]['interfaces'], [1.0])
    self.assertEqual(document[config_lib.RUN]['method'], 'nnwr')
    self.assertNotIn('y_domain', document[config_lib.PROBLEM])


if __name__ == '__main__':
  absltest.main()
