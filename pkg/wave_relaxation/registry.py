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

"""Registers the named experiment scenarios.

Every scenario is a base configuration plus one set of changes per curve, so
running a scenario and running the config files it renders give the same
outputs.
"""

import dataclasses
import itertools
import types
from typing import Final, Mapping

from wave_relaxation import config as config_lib
from wave_relaxation import profiles

Sections = Mapping[str, Mapping[str, str]]

CURVES = 'curves'
CHI_CHECK = 'chi_check'

THETAS = ('0.1', '0.2', '0.25', '0.3', '0.4')

# (alpha, beta, t) points where the Bessel kernel is checked against the
# numerical inverse transform.
CHI_CHECK_GRID: Final[tuple[tuple[float, float, float], ...]] = tuple(
    (alpha, beta, beta + offset)
    for alpha, beta, offset in itertools.product(
        (0.5, 1.0, 2.0), (0.25, 1.0), (0.1, 2.0)
    )
)


@dataclasses.dataclass(frozen=True)
class Scenario:
  """A named group of runs.

  Attributes:
    name: Registry name.
    description: One line for listings.
    base: Section -> key -> text shared by all curves.
    variants: (label, key -> text) per curve; the curve is named
      `<name>_<label>`.
    kind: CURVES, or CHI_CHECK for the kernel check, which has no runs.
  """

  name: str
  description: str
  base: Sections = types.MappingProxyType({})
  variants: tuple[tuple[str, Mapping[str, str]], ...] = ()
  kind: str = CURVES

  def curve_sections(self) -> list[dict[str, dict[str, str]]]:
    """Raw sections of every curve."""
    result = []
    for label, changes in self.variants:
      sections = {k: dict(v) for k, v in self.base.items()}
      sections.setdefault(config_lib.RUN, {})['name'] = f'{self.name}_{label}'
      for key, text in changes.items():
        section = config_lib.section_of(key)
        sections.setdefault(section, {})[key] = text
      result.append(sections)
    return result

  def configs(self) -> list[config_lib.RunConfig]:
    """The validated configurations, one per curve."""
    return [config_lib.from_sections(s) for s in self.curve_sections()]


def _theta_sweep(
    time_window: str, extra: Mapping[str, str] | None = None
) -> tuple[tuple[str, dict[str, str]], ...]:
  return tuple(
      (f'theta-{theta}', {'theta': theta, 'time_window': time_window}
       | dict(extra or {}))
      for theta in THETAS
  )


def _window_sweep(
    windows: tuple[str, ...], extra: Mapping[str, str] | None = None
) -> tuple[tuple[str, dict[str, str]], ...]:
  return tuple(
      (f'T-{window}', {'theta': '0.25', 'time_window': window}
       | dict(extra or {}))
      for window in windows
  )


# The 1D model problem: five unequal subdomains of (0, 5).
_MODEL_1D = types.MappingProxyType({
    config_lib.RUN: {'method': 'nnwr'},
    config_lib.PROBLEM: {
        'domain': '0, 5',
        'speed': 'constant:1',
        'g_lo': 'power:2',
        'g_hi': 'power-decay:2,1',
    },
    config_lib.PARTITION: {
        'interfaces': '0.6, 1.2, 1.7, 4.0',
        'dx': '0.02',
        'dt': '0.02',
    },
    config_lib.ITERATION: {
        'guess': 'poly-t2',
        'max_iterations': '12',
        'tolerance': '0',
    },
})


def _with(base: Sections, **changes: Mapping[str, str]) -> Sections:
  """Copies `base` with some sections updated."""
  result = {k: dict(v) for k, v in base.items()}
  for section, values in changes.items():
    result.setdefault(section, {}).update(values)
  return types.MappingProxyType(result)


_VARIABLE_1D = _with(
    _MODEL_1D, problem={'speed': 'profile:affine:1/6,1/6'}
)

_STRIPS_2D = types.MappingProxyType({
    config_lib.RUN: {'method': 'nnwr'},
    config_lib.PROBLEM: {
        'dimension': '2',
        'domain': '0, 1',
        'y_domain': '0, pi',
        'speed': '1',
        'u0': 'strip-polynomial',
    },
    config_lib.PARTITION: {
        'interfaces': '2/5, 3/4',
        'dx': '0.05',
        'dy': '0.16',
        'dt': '0.04',
    },
    config_lib.ITERATION: {
        'guess': 't-sin-y',
        'max_iterations': '12',
        'tolerance': '0',
    },
})

_COMPARE_1D = types.MappingProxyType({
    config_lib.PROBLEM: {
        'domain': '-3, 2',
        'speed': '1',
        'v0': 'x-exp',
        'g_lo': 'ramp-x-exp:-3',
        'g_hi': 'ramp-x-exp:2',
    },
    config_lib.PARTITION: {
        'interfaces': '0',
        'dx': '1/50',
        'dt': '1/50',
    },
    config_lib.ITERATION: {
        'guess': 'poly-t2',
        'max_iterations': '10',
        'tolerance': '1e-12',
    },
})

_COMPARE_2D = types.MappingProxyType({
    config_lib.RUN: {'seed': '42'},
    config_lib.PROBLEM: {
        'dimension': '2',
        'domain': '0, 1',
        'y_domain': '0, pi',
        'speed': '1',
        'g_left': 'power-sin:2',
        'g_right': 'parabola-power:3',
    },
    config_lib.PARTITION: {
        'dx': '0.05',
        'dy': '0.16',
        'dt': '0.04',
    },
    config_lib.ITERATION: {
        'time_window': '2',
        'guess': 'random',
        'max_iterations': '10',
        'tolerance': '0',
    },
})


def _comparison(split: str, methods: tuple[str, ...], overlap: str):
  variants = []
  for method in methods:
    changes = {'method': method, 'interfaces': split}
    if method == 'nnwr':
      changes['theta'] = '0.25'
    elif method == 'dnwr':
      changes['theta'] = '0.5'
    elif method == config_lib.SWR_CLASSICAL:
      changes['overlap'] = overlap
    variants.append(changes)
  return variants


def _compare_2d_variants():
  two = ('nnwr', 'dnwr', config_lib.SWR_CLASSICAL, config_lib.SWR_OPTIMIZED)
  three = ('nnwr', config_lib.SWR_CLASSICAL, config_lib.SWR_OPTIMIZED)
  result = []
  for label, split, methods in (('2sub', '3/5', two),
                                ('3sub', '2/5, 3/4', three)):
    for changes in _comparison(split, methods, '0.1'):
      result.append((f'{label}-{changes["method"]}', changes))
  return tuple(result)


def _compare_1d_variants():
  methods = ('nnwr', 'dnwr', config_lib.SWR_CLASSICAL,
             config_lib.SWR_OPTIMIZED)
  result = []
  for window in ('4', '10'):
    for changes in _comparison('0', methods, '0.48'):
      changes['time_window'] = window
      result.append((f'T-{window}-{changes["method"]}', changes))
  return tuple(result)


class ScenarioRegistry:
  """Registry of scenarios."""

  THETA_SWEEP_1D: Final[str] = 'E1-theta-sweep-1d'
  WINDOWS_1D: Final[str] = 'E2-windows-1d'
  VARIABLE_SPEED: Final[str] = 'E3-variable-c'
  THETA_2D: Final[str] = 'E4-2d-theta'
  COMPARE_1D: Final[str] = 'E5-compare-1d'
  COMPARE_2D: Final[str] = 'E6-compare-2d'
  NONUNIFORM_DT: Final[str] = 'E7-nonuniform-dt'
  SCALABILITY: Final[str] = 'E8-scalability'
  ORACLE_1D: Final[str] = 'O1-oracle-1d'
  ORACLE_CHI: Final[str] = 'O2-oracle-chi'

  _SCENARIOS = (
      Scenario(
          THETA_SWEEP_1D,
          'NNWR on five unequal subdomains of (0, 5), theta sweep at T = 8.',
          _MODEL_1D,
          _theta_sweep('8'),
      ),
      Scenario(
          WINDOWS_1D,
          'NNWR on five unequal subdomains, theta = 1/4, T in {1, 2, 4, 8}.',
          _MODEL_1D,
          _window_sweep(('1', '2', '4', '8')),
      ),
      Scenario(
          VARIABLE_SPEED,
          'NNWR with c(x) = (x + 1)/6: theta sweep at T = 8 and windows.',
          _VARIABLE_1D,
          _theta_sweep('8') + _window_sweep(('2', '4', '8')),
      ),
      Scenario(
          THETA_2D,
          'NNWR on three strips of (0, 1) x (0, pi): theta sweep at T = 2'
          ' and windows.',
          _STRIPS_2D,
          _theta_sweep('2') + _window_sweep(('1', '2', '3')),
      ),
      Scenario(
          COMPARE_1D,
          'NNWR, DNWR and Schwarz on (-3, 2) split at 0, T in {4, 10}.',
          _COMPARE_1D,
          _compare_1d_variants(),
      ),
      Scenario(
          COMPARE_2D,
          'NNWR, DNWR and Schwarz in 2D with two and three strips, T = 2.',
          _COMPARE_2D,
          _compare_2d_variants(),
      ),
      Scenario(
          NONUNIFORM_DT,
          'NNWR with speeds 1/4, 2, 1/2 and a time step per subdomain.',
          types.MappingProxyType({
              config_lib.RUN: {'method': 'nnwr', 'seed': '42'},
              config_lib.PROBLEM: {
                  'domain': '0, 6',
                  'speed': 'piecewise:1/4, 2, 1/2',
                  'g_lo': 'power:2',
                  'g_hi': 'power:3',
              },
              config_lib.PARTITION: {
                  'interfaces': '2, 4',
                  'dx': '0.1',
                  'dt': '0.13, 0.039, 0.1',
              },
              config_lib.ITERATION: {
                  'time_window': '2',
                  'guess': 'random',
                  'max_iterations': '5',
                  'tolerance': '0',
                  'track_solution': 'true',
              },
          }),
          (('theta-0.25', {'theta': '0.25'}),),
      ),
      Scenario(
          SCALABILITY,
          'NNWR on 2, 4 and 8 equal subdomains of (0, 1) with h/T fixed.',
          types.MappingProxyType({
              config_lib.RUN: {'method': 'nnwr'},
              config_lib.PROBLEM: {
                  'domain': '0, 1',
                  'speed': '1',
                  'g_lo': 'power:2',
                  'g_hi': 'power-decay:2,1',
              },
              config_lib.PARTITION: {'dx': '1/64', 'dt': '1/64'},
              config_lib.ITERATION: {
                  'theta': '0.25',
                  'guess': 'poly-t2',
                  'max_iterations': '6',
                  'tolerance': '1e-8',
              },
          }),
          (
              ('N-2', {'interfaces': '1/2', 'time_window': '1'}),
              ('N-4', {'interfaces': '1/4, 1/2, 3/4', 'time_window': '1/2'}),
              (
                  'N-8',
                  {
                      'interfaces': '1/8, 1/4, 3/8, 1/2, 5/8, 3/4, 7/8',
                      'time_window': '1/4',
                  },
              ),
          ),
      ),
      Scenario(
          ORACLE_1D,
          'Delay-operator NNWR errors on the five-subdomain model problem.',
          _with(_MODEL_1D, run={'method': 'oracle-nnwr'}),
          (
              ('T-1-theta-0.25',
               {'time_window': '1', 'dt': '0.005', 'theta': '0.25',
                'max_iterations': '3'}),
              ('T-1-theta-0.3',
               {'time_window': '1', 'dt': '0.005', 'theta': '0.3',
                'max_iterations': '3'}),
              ('T-8-theta-0.25', {'time_window': '8', 'theta': '0.25'}),
          ),
      ),
      Scenario(
          ORACLE_CHI,
          'Bessel kernel of the 2D oracle against numerical inversion.',
          kind=CHI_CHECK,
      ),
  )

  REGISTRY = types.MappingProxyType({s.name: s for s in _SCENARIOS})

  def names(self) -> list[str]:
    return list(self.REGISTRY)

  def get_scenario(self, name: str) -> Scenario:
    """Gets a scenario by name.

    Args:
      name: The scenario name.

    Returns:
      The scenario.

    Raises:
      ValueError: If there is no such scenario.
    """
    if name not in self.REGISTRY:
      raise ValueError(
          f'Unknown scenario {name!r}.'
          + profiles.suggest_keyword(name, self.names())
      )
    return self.REGISTRY[name]
