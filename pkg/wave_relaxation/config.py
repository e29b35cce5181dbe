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

"""Run configurations: INI files with the sections run, problem, partition,
iteration and output.

Values are coerced through a field table and then validated with a JSON
schema. Problems and partitions are built here as well, so CFL violations and
misaligned grids surface as configuration errors. See docs/config_format.md.
"""

import configparser
import dataclasses
import math
import os
from typing import Any, Mapping

import immutabledict
import jsonschema
from wave_relaxation import profiles
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.methods import dnwr
from wave_relaxation.methods import guesses
from wave_relaxation.methods import nnwr
from wave_relaxation.oracle import oracle_steps

RUN = 'run'
PROBLEM = 'problem'
PARTITION = 'partition'
ITERATION = 'iteration'
OUTPUT = 'output'
SECTIONS = (RUN, PROBLEM, PARTITION, ITERATION, OUTPUT)

SWR_CLASSICAL = 'swr-classical'
SWR_OPTIMIZED = 'swr-optimized'
METHODS = (nnwr.NAME, dnwr.NAME, SWR_CLASSICAL, SWR_OPTIMIZED,
           oracle_steps.NAME)

# Default relaxation parameter per method.
DEFAULT_THETA = immutabledict.immutabledict({
    nnwr.NAME: 0.25,
    dnwr.NAME: 0.5,
    oracle_steps.NAME: 0.25,
})

_STR = 'str'
_INT = 'int'
_OPTIONAL_INT = 'optional_int'
_FLOAT = 'float'
_OPTIONAL_FLOAT = 'optional_float'
_NUMBERS = 'numbers'
_BOOL = 'bool'

_REQUIRED = object()


@dataclasses.dataclass(frozen=True)
class _Field:
  section: str
  kind: str
  default: Any = _REQUIRED


# Field name -> how it is read. Field names are unique across sections.
_FIELDS = immutabledict.immutabledict({
    'name': _Field(RUN, _STR, 'run'),
    'method': _Field(RUN, _STR),
    'seed': _Field(RUN, _INT, 0),
    'dimension': _Field(PROBLEM, _INT, 1),
    'domain': _Field(PROBLEM, _NUMBERS),
    'y_domain': _Field(PROBLEM, _NUMBERS, (0.0, math.pi)),
    'speed': _Field(PROBLEM, _STR, '1'),
    'u0': _Field(PROBLEM, _STR, 'zero'),
    'v0': _Field(PROBLEM, _STR, 'zero'),
    'g_lo': _Field(PROBLEM, _STR, 'zero'),
    'g_hi': _Field(PROBLEM, _STR, 'zero'),
    'g_left': _Field(PROBLEM, _STR, 'zero'),
    'g_right': _Field(PROBLEM, _STR, 'zero'),
    'g_bottom': _Field(PROBLEM, _STR, 'zero'),
    'g_top': _Field(PROBLEM, _STR, 'zero'),
    'source': _Field(PROBLEM, _STR, profiles.NONE),
    'interfaces': _Field(PARTITION, _NUMBERS),
    'dx': _Field(PARTITION, _FLOAT),
    'dt': _Field(PARTITION, _NUMBERS),
    'dy': _Field(PARTITION, _OPTIONAL_FLOAT, None),
    'overlap': _Field(PARTITION, _FLOAT, 0.0),
    'time_window': _Field(ITERATION, _FLOAT),
    'theta': _Field(ITERATION, _OPTIONAL_FLOAT, None),
    'p': _Field(ITERATION, _FLOAT, 0.0),
    'max_iterations': _Field(ITERATION, _INT, 20),
    'tolerance': _Field(ITERATION, _FLOAT, 1e-12),
    'guess': _Field(ITERATION, _STR, guesses.POLY_T2),
    'track_solution': _Field(ITERATION, _BOOL, False),
    'flux_weighting': _Field(ITERATION, _STR, nnwr.SPEED_WEIGHTED),
    'num_modes': _Field(ITERATION, _OPTIONAL_INT, None),
    'curve': _Field(OUTPUT, _STR, ''),
})

# Keys that only exist for one dimension.
_ONE_D_ONLY = ('g_lo', 'g_hi')
_TWO_D_ONLY = ('y_domain', 'g_left', 'g_right', 'g_bottom', 'g_top', 'dy')

_NUMBER = {'type': 'number'}
_POSITIVE = {'type': 'number', 'exclusiveMinimum': 0}
_NON_NEGATIVE = {'type': 'number', 'minimum': 0}
_PROFILE = {'type': 'string', 'minLength': 1}
_NAME = {'type': 'string', 'pattern': r'^[A-Za-z0-9_.+\-]*$'}

_SCHEMA = immutabledict.immutabledict({
    'type': 'object',
    'properties': {
        RUN: {
            'type': 'object',
            'properties': {
                'name': _NAME | {'minLength': 1},
                'method': {'enum': list(METHODS)},
                'seed': {'type': 'integer', 'minimum': 0},
            },
        },
        PROBLEM: {
            'type': 'object',
            'properties': {
                'dimension': {'enum': [1, 2]},
                'domain': {
                    'type': 'array',
                    'items': _NUMBER,
                    'minItems': 2,
                    'maxItems': 2,
                },
                'y_domain': {
                    'type': 'array',
                    'items': _NUMBER,
                    'minItems': 2,
                    'maxItems': 2,
                },
                'speed': _PROFILE,
                'u0': _PROFILE,
                'v0': _PROFILE,
                'g_lo': _PROFILE,
                'g_hi': _PROFILE,
                'g_left': _PROFILE,
                'g_right': _PROFILE,
                'g_bottom': _PROFILE,
                'g_top': _PROFILE,
                'source': _PROFILE,
            },
        },
        PARTITION: {
            'type': 'object',
            'properties': {
                'interfaces': {
                    'type': 'array', 'items': _NUMBER, 'minItems': 1
                },
                'dx': _POSITIVE,
                'dt': {'type': 'array', 'items': _POSITIVE, 'minItems': 1},
                'dy': {'type': ['number', 'null'], 'exclusiveMinimum': 0},
                'overlap': _NON_NEGATIVE,
            },
        },
        ITERATION: {
            'type': 'object',
            'properties': {
                'time_window': _POSITIVE,
                'theta': {'type': ['number', 'null']},
                'p': _NON_NEGATIVE,
                'max_iterations': {'type': 'integer', 'minimum': 0},
                'tolerance': _NON_NEGATIVE,
                'guess': {'enum': list(guesses.GUESS_KINDS)},
                'track_solution': {'type': 'boolean'},
                'flux_weighting': {'enum': list(nnwr.FLUX_WEIGHTINGS)},
                'num_modes': {'type': ['integer', 'null'], 'minimum': 1},
            },
        },
        OUTPUT: {
            'type': 'object',
            'properties': {'curve': _NAME},
        },
    },
})


class ConfigError(ValueError):
  """A configuration that cannot be parsed or does not validate.

  Attributes:
    section: Offending section, if known.
    key: Offending key, if known.
    line: Offending line of the file, for parse errors.
  """

  def __init__(
      self,
      message: str,
      section: str | None = None,
      key: str | None = None,
      line: int | None = None,
  ):
    self.section = section
    self.key = key
    self.line = line
    if line is not None:
      where = f'line {line}: '
    elif key is not None and section is not None:
      where = f'[{section}] {key}: '
    elif key is not None:
      where = f'{key}: '
    elif section is not None:
      where = f'[{section}]: '
    else:
      where = ''
    super().__init__(where + message)


@dataclasses.dataclass(frozen=True)
class RunConfig:
  """One validated run.

  The attributes mirror the keys of docs/config_format.md. Profile specs are
  kept as text, so a config can be written back and shows up verbatim in the
  sidecars.

  Attributes:
    base_dir: Directory relative table paths are resolved against. Not part of
      the serialized config.
  """

  name: str
  method: str
  seed: int
  dimension: int
  domain: tuple[float, ...]
  y_domain: tuple[float, ...]
  speed: str
  u0: str
  v0: str
  g_lo: str
  g_hi: str
  g_left: str
  g_right: str
  g_bottom: str
  g_top: str
  source: str
  interfaces: tuple[float, ...]
  dx: float
  dt: tuple[float, ...]
  dy: float | None
  overlap: float
  time_window: float
  theta: float | None
  p: float
  max_iterations: int
  tolerance: float
  guess: str
  track_solution: bool
  flux_weighting: str
  num_modes: int | None
  curve: str
  base_dir: str = ''

  @property
  def curve_name(self) -> str:
    return self.curve or self.name

  @property
  def resolved_theta(self) -> float | None:
    """theta, or the method's default; None for Schwarz methods."""
    if self.theta is not None:
      return self.theta
    return DEFAULT_THETA.get(self.method)

  def to_dict(self) -> dict[str, dict[str, Any]]:
    """Section -> key -> value, limited to the keys of the dimension."""
    result = {section: {} for section in SECTIONS}
    for key, field in _FIELDS.items():
      if key in _skipped_keys(self.dimension):
        continue
      value = getattr(self, key)
      if isinstance(value, tuple):
        value = list(value)
      result[field.section][key] = value
    return result


def _skipped_keys(dimension: int) -> tuple[str, ...]:
  return _TWO_D_ONLY if dimension == 1 else _ONE_D_ONLY


def _coerce(kind: str, text: str) -> Any:
  text = text.strip()
  if kind == _STR:
    return text
  if kind in (_INT, _OPTIONAL_INT):
    if kind == _OPTIONAL_INT and text.lower() in ('', 'none'):
      return None
    return int(text)
  if kind in (_FLOAT, _OPTIONAL_FLOAT):
    if kind == _OPTIONAL_FLOAT and text.lower() in ('', 'none'):
      return None
    return profiles.parse_number(text)
  if kind == _NUMBERS:
    return profiles.parse_numbers(text)
  if kind == _BOOL:
    states = configparser.ConfigParser.BOOLEAN_STATES
    if text.lower() not in states:
      raise ValueError(f'Not a boolean: {text!r}.')
    return states[text.lower()]
  raise ValueError(f'Unknown field kind {kind}.')


def _collect(
    sections: Mapping[str, Mapping[str, str]],
) -> dict[str, dict[str, Any]]:
  """Checks names and coerces values, filling in defaults."""
  for section in sections:
    if section not in SECTIONS:
      raise ConfigError(
          'Unknown section.'
          + profiles.suggest_keyword(section, list(SECTIONS)),
          section=section,
      )
  document = {section: {} for section in SECTIONS}
  for section, values in sections.items():
    for key, text in values.items():
      field = _FIELDS.get(key)
      if field is None or field.section != section:
        known = [k for k, f in _FIELDS.items() if f.section == section]
        raise ConfigError(
            'Unknown key.' + profiles.suggest_keyword(key, known),
            section=section,
            key=key,
        )
      try:
        document[section][key] = _coerce(field.kind, text)
      except ValueError as e:
        raise ConfigError(str(e), section=section, key=key) from e
  for key, field in _FIELDS.items():
    if key in document[field.section]:
      continue
    if field.default is _REQUIRED:
      raise ConfigError('Missing required key.', section=field.section, key=key)
    document[field.section][key] = field.default
  return document


def _validate_schema(document: dict[str, dict[str, Any]]) -> None:
  schema = dict(_SCHEMA)
  validator_cls = jsonschema.validators.validator_for(schema)
  error = jsonschema.exceptions.best_match(
      validator_cls(schema).iter_errors(_jsonable(document))
  )
  if error is None:
    return
  path = list(error.absolute_path)
  section = path[0] if path else None
  key = path[1] if len(path) > 1 else None
  raise ConfigError(error.message, section=section, key=key)


def _jsonable(document: dict[str, dict[str, Any]]) -> dict[str, Any]:
  return {
      section: {
          k: list(v) if isinstance(v, tuple) else v for k, v in values.items()
      }
      for section, values in document.items()
  }


def _check_consistency(
    config: RunConfig, sections: Mapping[str, Mapping[str, str]]
) -> None:
  """Rejects knobs that contradict each other."""
  given = {
      key for values in sections.values() for key in values
  }
  for key in _skipped_keys(config.dimension):
    if key in given:
      raise ConfigError(
          f'Not available for {config.dimension}D problems.',
          section=_FIELDS[key].section,
          key=key,
      )
  if config.dimension == 2 and config.dy is None:
    raise ConfigError('2D problems need dy.', section=PARTITION, key='dy')
  theta = config.theta
  if theta is not None:
    if config.method in (SWR_CLASSICAL, SWR_OPTIMIZED):
      raise ConfigError(
          f'Schwarz methods have no relaxation parameter ({config.method}).',
          section=ITERATION,
          key='theta',
      )
    if not 0 < theta <= 1:
      raise ConfigError(
          f'theta out of (0,1], got {theta}.', section=ITERATION, key='theta'
      )
  if config.overlap > 0 and config.method not in (SWR_CLASSICAL, SWR_OPTIMIZED):
    raise ConfigError(
        f'overlap only applies to Schwarz methods, not {config.method}.',
        section=PARTITION,
        key='overlap',
    )
  if config.p != 0 and config.method != SWR_OPTIMIZED:
    raise ConfigError(
        f'p only applies to {SWR_OPTIMIZED}, not {config.method}.',
        section=ITERATION,
        key='p',
    )
  if config.num_modes is not None and (
      config.method != oracle_steps.NAME or config.dimension != 2
  ):
    raise ConfigError(
        f'num_modes only applies to 2D {oracle_steps.NAME} runs.',
        section=ITERATION,
        key='num_modes',
    )
  if config.track_solution and config.method != nnwr.NAME:
    raise ConfigError(
        f'track_solution only applies to {nnwr.NAME}, not {config.method}.',
        section=ITERATION,
        key='track_solution',
    )
  if (
      config.flux_weighting != nnwr.SPEED_WEIGHTED
      and config.method != nnwr.NAME
  ):
    raise ConfigError(
        f'flux_weighting only applies to {nnwr.NAME}, not {config.method}.',
        section=ITERATION,
        key='flux_weighting',
    )
  if config.guess == guesses.T_SIN_Y and config.dimension != 2:
    raise ConfigError(
        f'The {guesses.T_SIN_Y} guess needs a 2D problem.',
        section=ITERATION,
        key='guess',
    )
  if config.method == oracle_steps.NAME and config.guess == guesses.RANDOM:
    raise ConfigError(
        'Oracle runs need a deterministic smooth guess.',
        section=ITERATION,
        key='guess',
    )


def from_sections(
    sections: Mapping[str, Mapping[str, str]], base_dir: str = ''
) -> RunConfig:
  """Builds and validates a config from raw text values.

  Args:
    sections: Section -> key -> text, as read from an INI file.
    base_dir: Directory relative table paths are resolved against.

  Returns:
    The validated config. Its problem and partition can be built.

  Raises:
    ConfigError: Naming the offending section and key.
  """
  document = _collect(sections)
  _validate_schema(document)
  flat = {
      key: value
      for values in document.values()
      for key, value in values.items()
  }
  config = RunConfig(base_dir=base_dir, **flat)
  _check_consistency(config, sections)
  # Surfaces grid and CFL errors.
  build_partition(config, build_problem(config))
  return config


def parse_config_text(text: str, base_dir: str = '') -> RunConfig:
  """Parses INI text; parse errors carry line numbers."""
  parser = configparser.ConfigParser(
      interpolation=None, inline_comment_prefixes=('#',)
  )
  try:
    parser.read_string(text)
  except (
      configparser.MissingSectionHeaderError,
      configparser.DuplicateSectionError,
      configparser.DuplicateOptionError,
  ) as e:
    raise ConfigError(e.message, line=e.lineno) from e
  except configparser.ParsingError as e:
    line, _ = e.errors[0]
    raise ConfigError(
        "Expected 'key = value' or a [section] header.", line=line
    ) from e
  sections = {name: dict(parser[name]) for name in parser.sections()}
  return from_sections(sections, base_dir)


def load_config(path: str) -> RunConfig:
  """Reads and validates a config file."""
  try:
    with open(path) as f:
      text = f.read()
  except OSError as e:
    raise ConfigError(f'Cannot read config file {path}: {e}') from e
  return parse_config_text(text, os.path.dirname(os.path.abspath(path)))


def _format(value: Any) -> str:
  if isinstance(value, bool):
    return 'true' if value else 'false'
  if isinstance(value, tuple):
    return ', '.join(_format(v) for v in value)
  if value is None:
    return 'none'
  return str(value)


def section_of(key: str) -> str:
  """The section a key belongs to."""
  if key not in _FIELDS:
    raise ConfigError(
        'Unknown key.' + profiles.suggest_keyword(key, list(_FIELDS)), key=key
    )
  return _FIELDS[key].section


def to_sections(config: RunConfig) -> dict[str, dict[str, str]]:
  """The config as raw text values, ready for from_sections."""
  return {
      section: {key: _format(getattr(config, key)) for key in values}
      for section, values in config.to_dict().items()
  }


def replace(config: RunConfig, **changes: Any) -> RunConfig:
  """A revalidated copy of `config` with some keys changed.

  Args:
    config: The config to start from.
    **changes: Key -> new value, as text or as a typed value.

  Returns:
    The new config.
  """
  sections = to_sections(config)
  for key, value in changes.items():
    text = value if isinstance(value, str) else _format(value)
    sections[section_of(key)][key] = text
  return from_sections(sections, config.base_dir)


def render(config: RunConfig) -> str:
  """Writes a config back in the INI format."""
  blocks = []
  for section, values in to_sections(config).items():
    lines = [f'[{section}]'] + [f'{k} = {v}' for k, v in values.items()]
    blocks.append('\n'.join(lines))
  return '\n\n'.join(blocks) + '\n'


def _profile(config: RunConfig, key: str, variables: str):
  try:
    return profiles.parse_profile(getattr(config, key), variables)
  except ValueError as e:
    raise ConfigError(str(e), section=PROBLEM, key=key) from e


def build_problem(config: RunConfig) -> problems.WaveProblem:
  """The problem a config describes."""
  x_lo, x_hi = config.domain
  try:
    source = profiles.parse_source(
        config.source,
        profiles.TIME_X if config.dimension == 1 else profiles.TIME_XY,
        config.base_dir,
    )
  except ValueError as e:
    raise ConfigError(str(e), section=PROBLEM, key='source') from e
  try:
    if config.dimension == 1:
      speed = profiles.parse_speed(config.speed)
    else:
      speed = profiles.parse_constant_speed(config.speed)
  except ValueError as e:
    raise ConfigError(str(e), section=PROBLEM, key='speed') from e
  try:
    if config.dimension == 1:
      return problems.WaveProblem1D(
          x_lo=x_lo,
          x_hi=x_hi,
          time_window=config.time_window,
          speed=speed,
          u0=_profile(config, 'u0', profiles.SPACE),
          v0=_profile(config, 'v0', profiles.SPACE),
          g_lo=_profile(config, 'g_lo', profiles.TIME),
          g_hi=_profile(config, 'g_hi', profiles.TIME),
          source=source,
      )
    y_lo, y_hi = config.y_domain
    return problems.WaveProblem2D(
        x_lo=x_lo,
        x_hi=x_hi,
        y_lo=y_lo,
        y_hi=y_hi,
        time_window=config.time_window,
        speed=speed,
        u0=_profile(config, 'u0', profiles.SPACE_XY),
        v0=_profile(config, 'v0', profiles.SPACE_XY),
        g_left=_profile(config, 'g_left', profiles.TIME_Y),
        g_right=_profile(config, 'g_right', profiles.TIME_Y),
        g_bottom=_profile(config, 'g_bottom', profiles.TIME_X),
        g_top=_profile(config, 'g_top', profiles.TIME_X),
        source=source,
    )
  except ConfigError:
    raise
  except ValueError as e:
    raise ConfigError(str(e), section=PROBLEM) from e


def build_partition(
    config: RunConfig, problem: problems.WaveProblem
) -> partition_lib.Partition:
  """The partition a config describes; CFL violations are config errors."""
  try:
    return partition_lib.build_partition(
        problem, config.interfaces, config.dx, config.dt, config.dy
    )
  except ValueError as e:
    raise ConfigError(str(e), section=PARTITION) from e
