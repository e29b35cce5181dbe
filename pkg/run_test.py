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

import contextlib
import io
import os
import tempfile
import textwrap
from unittest import mock

from absl import flags
from absl.testing import absltest
from absl.testing import flagsaver
import run
from wave_relaxation import registry
from wave_relaxation import suite_utils

_CONFIG = textwrap.dedent("""\
    [run]
    name = cli
    method = nnwr

    [problem]
    domain = 0, 2
    g_lo = power:2

    [partition]
    interfaces = 1
    dx = 0.05
    dt = 0.05

    [iteration]
    time_window = 1
    max_iterations = 3
    """)


class MainTest(absltest.TestCase):

  def setUp(self):
    super().setUp()
    if not flags.FLAGS.is_parsed():
      flags.FLAGS.mark_as_parsed()
    self.temp_dir = tempfile.TemporaryDirectory()

  def tearDown(self):
    super().tearDown()
    self.temp_dir.cleanup()

  def _main(self, *args):
    stdout, stderr = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(
        stderr
    ):
      code = run.main(['run.py', *args])
    return code, stdout.getvalue(), stderr.getvalue()

  def test_predict(self):
    code, out, _ = self._main('predict', 'nnwr-2sub-1d', '10', '2', '1')
    self.assertEqual(code, run.EXIT_OK)
    self.assertEqual(out.strip(), '3')

  def test_predict_unknown_tag(self):
    code, _, err = self._main('predict', 'nnwr-3d', '1', '1', '1')
    self.assertEqual(code, run.EXIT_INVALID)
    self.assertIn('Unknown method tag', err)

  def test_list(self):
    code, out, _ = self._main('list')
    self.assertEqual(code, run.EXIT_OK)
    for name in registry.ScenarioRegistry().names():
      self.assertIn(name, out)

  def test_no_verb(self):
    code, _, err = self._main()
    self.assertEqual(code, run.EXIT_INVALID)
    self.assertIn('Expected a verb', err)

  def test_unknown_verb_suggests(self):
    code, _, err = self._main('lst')
    self.assertEqual(code, run.EXIT_INVALID)
    self.assertIn("Did you mean 'list'?", err)

  def test_wrong_argument_count(self):
    code, _, err = self._main('scenario')
    self.assertEqual(code, run.EXIT_INVALID)
    self.assertIn('scenario expects 1 arguments', err)

  def test_unknown_scenario_creates_nothing(self):
    with flagsaver.flagsaver(output_path=self.temp_dir.name):
      code, _, err = self._main('scenario', 'E9-missing')
    self.assertEqual(code, run.EXIT_INVALID)
    self.assertIn('Unknown scenario', err)
    self.assertEmpty(os.listdir(self.temp_dir.name))

  def test_invalid_config(self):
    path = os.path.join(self.temp_dir.name, 'bad.ini')
    with open(path, 'w') as f:
      f.write(_CONFIG.replace('dt = 0.05', 'dt = 0.1'))
    code, _, err = self._main('run', path)
    self.assertEqual(code, run.EXIT_INVALID)
    self.assertIn('CFL condition violated on subdomain 1', err)

  def test_run_writes_curve(self):
    path = os.path.join(self.temp_dir.name, 'cli.ini')
    with open(path, 'w') as f:
      f.write(_CONFIG)
    output_dir = os.path.join(self.temp_dir.name, 'out')
    with flagsaver.flagsaver(output_dir=output_dir, max_iterations=2):
      code, _, _ = self._main('run', path)
    self.assertEqual(code, run.EXIT_OK)
    self.assertCountEqual(os.listdir(output_dir), ['cli.csv', 'cli.json'])
    with open(os.path.join(output_dir, 'cli.csv')) as f:
      lines = f.read().splitlines()
    self.assertEqual(lines[0], 'iteration,error')
    self.assertLessEqual(len(lines), 4)

  def test_failure_while_running(self):
    with flagsaver.flagsaver(output_dir=self.temp_dir.name):
      with mock.patch.object(
          suite_utils, 'run_scenario', side_effect=ValueError('singular')
      ):
        code, _, err = self._main('scenario', 'E1-theta-sweep-1d')
    self.assertEqual(code, run.EXIT_FAILURE)
    self.assertIn('Run failed: singular', err)

  def test_scenario_passes_overrides(self):
    with flagsaver.flagsaver(
        output_dir=self.temp_dir.name, max_iterations=1, seed=7
    ):
      with mock.patch.object(suite_utils, 'run_scenario') as run_scenario:
        code, _, _ = self._main('scenario', 'E2-windows-1d')
    self.assertEqual(code, run.EXIT_OK)
    run_scenario.assert_called_once()
    _, kwargs = run_scenario.call_args
    self.assertEqual(kwargs['max_iterations'], 1)
    self.assertEqual(kwargs['seed'], 7)
    self.assertIsNone(kwargs['tolerance'])


if __name__ == '__main__':
  absltest.main()
