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

"""Named data profiles and the small grammar run configurations use.

A profile spec is `name` or `name:arg1,arg2,...`. Numbers may be written as
decimals, as fractions such as `1/6`, or as `pi`. Every profile declares the
variables it takes, so a boundary profile cannot be used as an initial
condition by mistake.

Wave speeds use `constant:<c>` (or just `<c>`), `piecewise:<c1>,<c2>,...`,
`profile:<profile spec>` and `table:<x1>:<c1>,<x2>:<c2>,...`.
"""

import dataclasses
import fractions
import math
import os
from typing import Callable

from fuzzywuzzy import process
import immutabledict
import numpy as np
import pandas as pd
from scipy import interpolate
from wave_relaxation.core import problems

ANY = '*'
TIME = 't'
SPACE = 'x'
TIME_X = 't,x'
TIME_Y = 't,y'
SPACE_XY = 'x,y'
TIME_XY = 't,x,y'

NONE = 'none'


def suggest_keyword(
    typo: str, keywords: list[str], threshold: int = 80
) -> str:
  """Suggests a keyword."""
  if not keywords:
    return ''
  suggestion, score = process.extractOne(typo, keywords)
  if score >= threshold:
    return f" Did you mean '{suggestion}'?"
  else:
    return ''


def parse_number(text: str) -> float:
  """Reads a decimal, a fraction like `1/6`, or `pi`."""
  text = text.strip()
  sign = 1.0
  if text.startswith('-'):
    sign, text = -1.0, text[1:].strip()
  if text == 'pi':
    return sign * math.pi
  try:
    return sign * float(text)
  except ValueError:
    pass
  try:
    return sign * float(fractions.Fraction(text))
  except (ValueError, ZeroDivisionError) as e:
    raise ValueError(f'Not a number: {text!r}.') from e


def parse_numbers(text: str) -> tuple[float, ...]:
  """Reads a comma-separated list of numbers; empty text gives ()."""
  if not text.strip():
    return ()
  return tuple(parse_number(part) for part in text.split(','))


@dataclasses.dataclass(frozen=True)
class Profile:
  """A family of closed-form data.

  Attributes:
    variables: Comma-separated argument names, or ANY.
    factory: Builds the function from the numeric arguments of the spec.
    num_args: Number of numeric arguments the factory takes.
    description: One line for listings.
  """

  variables: str
  factory: Callable[..., problems.ArrayFunction]
  num_args: int
  description: str


def _zero():
  return problems.zero


def _power(p):
  return lambda t: np.asarray(t, dtype=float) ** p


def _power_decay(p, rate):
  return lambda t: t**p * np.exp(-rate * t)


def _ramp_x_exp(x0):
  return lambda t: t * x0 * math.exp(-x0)


def _x_exp():
  return lambda x: x * np.exp(-x)


def _affine(slope, intercept):
  return lambda x: slope * np.asarray(x, dtype=float) + intercept


def _sine(k, length):
  return lambda x: np.sin(k * np.pi * np.asarray(x, dtype=float) / length)


def _power_sin(p):
  return lambda t, y: t**p * np.sin(y)


def _parabola_power(p):
  return lambda t, y: y * (y - np.pi) * t**p


def _strip_polynomial():
  return lambda x, y: (
      x * y * (x - 1) * (y - np.pi) * (5 * x - 2) * (4 * x - 3)
  )


PROFILES = immutabledict.immutabledict({
    'zero': Profile(ANY, _zero, 0, 'Zero everywhere.'),
    'power': Profile(TIME, _power, 1, 't**p.'),
    'power-decay': Profile(TIME, _power_decay, 2, 't**p * exp(-rate t).'),
    'ramp-x-exp': Profile(
        TIME, _ramp_x_exp, 1, 't * x0 exp(-x0), the x exp(-x) ramp at x0.'
    ),
    'x-exp': Profile(SPACE, _x_exp, 0, 'x exp(-x).'),
    'affine': Profile(SPACE, _affine, 2, 'slope * x + intercept.'),
    'sine': Profile(SPACE, _sine, 2, 'sin(k pi x / length).'),
    'power-sin': Profile(TIME_Y, _power_sin, 1, 't**p sin(y).'),
    'parabola-power': Profile(
        TIME_Y, _parabola_power, 1, 'y (y - pi) t**p.'
    ),
    'strip-polynomial': Profile(
        SPACE_XY,
        _strip_polynomial,
        0,
        'x y (x - 1)(y - pi)(5x - 2)(4x - 3), zero on x = 2/5 and x = 3/4.',
    ),
})


def parse_profile(spec: str, variables: str) -> problems.ArrayFunction:
  """Builds the function a profile spec describes.

  Args:
    spec: `name` or `name:args`.
    variables: The arguments the caller will pass, e.g. TIME_Y.

  Returns:
    The function.

  Raises:
    ValueError: For an unknown name, a profile over other variables or a
      wrong number of arguments.
  """
  name, _, args = spec.strip().partition(':')
  if name not in PROFILES:
    raise ValueError(
        f'Unknown profile {name!r}.'
        + suggest_keyword(name, list(PROFILES))
    )
  profile = PROFILES[name]
  if profile.variables not in (ANY, variables):
    raise ValueError(
        f'Profile {name!r} is a function of ({profile.variables}), but'
        f' ({variables}) is needed here.'
    )
  values = parse_numbers(args)
  if len(values) != profile.num_args:
    raise ValueError(
        f'Profile {name!r} takes {profile.num_args} arguments, got'
        f' {len(values)}.'
    )
  return profile.factory(*values)


class TabulatedSource:
  """Forcing f(t, x) interpolated from a table, zero outside of it."""

  def __init__(self, t: np.ndarray, x: np.ndarray, values: np.ndarray):
    self._interpolator = interpolate.RegularGridInterpolator(
        (np.asarray(t, dtype=float), np.asarray(x, dtype=float)),
        np.asarray(values, dtype=float),
        bounds_error=False,
        fill_value=0.0,
    )

  def __call__(self, t: np.ndarray, x: np.ndarray) -> np.ndarray:
    t, x = np.broadcast_arrays(
        np.asarray(t, dtype=float), np.asarray(x, dtype=float)
    )
    points = np.stack([t, x], axis=-1)
    return self._interpolator(points.reshape(-1, 2)).reshape(t.shape)


def load_source_table(path: str) -> TabulatedSource:
  """Reads a forcing table.

  The CSV has a `t` column followed by one column per x node, headed by the
  node coordinate.

  Args:
    path: CSV file.

  Returns:
    The interpolated forcing.
  """
  if not os.path.exists(path):
    raise ValueError(f'Source table {path} does not exist.')
  frame = pd.read_csv(path)
  if frame.columns[0] != 't' or len(frame.columns) < 3:
    raise ValueError(
        f'Source table {path} needs a t column and at least two x columns.'
    )
  try:
    x = np.array([parse_number(c) for c in frame.columns[1:]])
  except ValueError as e:
    raise ValueError(f'Bad x header in source table {path}: {e}') from e
  return TabulatedSource(
      frame['t'].to_numpy(), x, frame.iloc[:, 1:].to_numpy()
  )


def parse_source(
    spec: str, variables: str, base_dir: str = ''
) -> problems.ArrayFunction | None:
  """None for `none`, a table for `table:<path>`, else a profile."""
  spec = spec.strip()
  if spec == NONE:
    return None
  if spec.startswith('table:'):
    if variables != TIME_X:
      raise ValueError('Tabulated sources are only supported in 1D.')
    return load_source_table(os.path.join(base_dir, spec[len('table:'):]))
  return parse_profile(spec, variables)


def parse_speed(spec: str) -> problems.WaveSpeed:
  """Builds a 1D wave speed from its spec."""
  kind, sep, rest = spec.strip().partition(':')
  if not sep:
    return problems.WaveSpeed(constant=parse_number(kind))
  if kind == problems.CONSTANT:
    return problems.WaveSpeed(constant=parse_number(rest))
  if kind == problems.PIECEWISE:
    return problems.WaveSpeed(pieces=parse_numbers(rest))
  if kind == problems.PROFILE:
    return problems.WaveSpeed(profile=parse_profile(rest, SPACE))
  if kind == problems.TABLE:
    pairs = []
    for item in rest.split(','):
      x, sep, c = item.partition(':')
      if not sep:
        raise ValueError(f'Speed table entries are x:c pairs, got {item!r}.')
      pairs.append((parse_number(x), parse_number(c)))
    return problems.WaveSpeed(
        table_x=tuple(x for x, _ in pairs), table_c=tuple(c for _, c in pairs)
    )
  kinds = [problems.CONSTANT, problems.PIECEWISE, problems.PROFILE,
           problems.TABLE]
  raise ValueError(
      f'Unknown wave speed kind {kind!r}.' + suggest_keyword(kind, kinds)
  )


def parse_constant_speed(spec: str) -> float:
  """The speed of a 2D problem, which has to be constant."""
  speed = parse_speed(spec)
  if not speed.is_constant:
    raise ValueError(f'2D problems need a constant speed, got {spec!r}.')
  return speed.value()
