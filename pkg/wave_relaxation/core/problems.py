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

"""Problem statements for the wave equation on an interval or a rectangle.

Every function attached to a problem is vectorized over numpy arrays. Functions
of time take the time argument first, so a Dirichlet datum of the 1D problem
is `g(t)`, a Dirichlet datum on a vertical side of the 2D problem is
`g(t, y)` and a 1D source is `f(t, x)`.
"""

import dataclasses
from typing import Callable

import numpy as np

ArrayFunction = Callable[..., np.ndarray]

CONSTANT = 'constant'
PIECEWISE = 'piecewise'
TABLE = 'table'
PROFILE = 'profile'


def zero(*args: np.ndarray) -> np.ndarray:
  """Returns zeros broadcast to the shape of the arguments."""
  return np.zeros(np.broadcast(*[np.asarray(a) for a in args]).shape)


@dataclasses.dataclass(frozen=True)
class WaveSpeed:
  """Wave speed of a 1D problem.

  Exactly one of the descriptions is set.

  Attributes:
    constant: The speed everywhere.
    pieces: One constant per subdomain, left to right. The speed may jump at
      the subdomain interfaces only.
    table_x: Abscissae of a sampled speed, strictly increasing.
    table_c: Samples matching `table_x`, linearly interpolated in between.
    profile: Closed form c(x).
    floor: Lower bound every sampled speed has to respect.
  """

  constant: float | None = None
  pieces: tuple[float, ...] | None = None
  table_x: tuple[float, ...] | None = None
  table_c: tuple[float, ...] | None = None
  profile: ArrayFunction | None = None
  floor: float = 1e-12

  def __post_init__(self):
    given = [
        self.constant is not None,
        self.pieces is not None,
        self.table_x is not None or self.table_c is not None,
        self.profile is not None,
    ]
    if sum(given) != 1:
      raise ValueError('Exactly one wave speed description must be given.')
    if self.constant is not None and self.constant <= self.floor:
      raise ValueError(f'Wave speed must be positive, got {self.constant}.')
    if self.pieces is not None:
      if not self.pieces:
        raise ValueError('Piecewise wave speed needs at least one piece.')
      if min(self.pieces) <= self.floor:
        raise ValueError(f'Wave speed must be positive, got {self.pieces}.')
    if self.kind == TABLE:
      if (
          self.table_x is None
          or self.table_c is None
          or len(self.table_x) != len(self.table_c)
          or len(self.table_x) < 2
      ):
        raise ValueError('A speed table needs matching abscissae and values.')
      if np.any(np.diff(self.table_x) <= 0):
        raise ValueError('Speed table abscissae must be strictly increasing.')
      if min(self.table_c) <= self.floor:
        raise ValueError('Speed table values must be positive.')

  @property
  def kind(self) -> str:
    if self.constant is not None:
      return CONSTANT
    if self.pieces is not None:
      return PIECEWISE
    if self.profile is not None:
      return PROFILE
    return TABLE

  @property
  def is_constant(self) -> bool:
    """Whether the speed is the same everywhere."""
    if self.kind == CONSTANT:
      return True
    return self.kind == PIECEWISE and len(set(self.pieces)) == 1

  def value(self) -> float:
    """Returns the speed of a constant-speed problem."""
    if not self.is_constant:
      raise ValueError(f'A {self.kind} wave speed has no single value.')
    if self.constant is not None:
      return float(self.constant)
    return float(self.pieces[0])

  def sample(self, x: np.ndarray, subdomain: int | None = None) -> np.ndarray:
    """Samples the speed on the nodes x.

    Args:
      x: Node coordinates.
      subdomain: Index of the subdomain that owns the nodes. Required for a
        piecewise speed, where it selects the piece.

    Returns:
      The speed at every node.

    Raises:
      ValueError: If a sampled speed is not above the floor.
    """
    x = np.asarray(x, dtype=float)
    if self.kind == CONSTANT:
      return np.full(x.shape, float(self.constant))
    if self.kind == PIECEWISE:
      if subdomain is None:
        if len(set(self.pieces)) == 1:
          return np.full(x.shape, float(self.pieces[0]))
        raise ValueError('A piecewise speed is sampled per subdomain.')
      return np.full(x.shape, float(self.pieces[subdomain]))
    if self.kind == TABLE:
      c = np.interp(x, self.table_x, self.table_c)
    else:
      c = np.broadcast_to(
          np.asarray(self.profile(x), dtype=float), x.shape
      ).copy()
    if np.any(c <= self.floor):
      raise ValueError(
          f'Wave speed drops to {c.min():.6g}, below the floor {self.floor}.'
      )
    return c


@dataclasses.dataclass(frozen=True)
class WaveProblem1D:
  """u_tt = c(x)^2 u_xx + f on (x_lo, x_hi) x (0, time_window).

  Attributes:
    x_lo: Left end of the domain.
    x_hi: Right end of the domain.
    time_window: Final time T.
    speed: Wave speed.
    u0: Initial displacement u0(x).
    v0: Initial velocity v0(x).
    g_lo: Dirichlet datum g(t) at x_lo.
    g_hi: Dirichlet datum g(t) at x_hi.
    source: Forcing f(t, x), or None for no forcing.
  """

  x_lo: float
  x_hi: float
  time_window: float
  speed: WaveSpeed
  u0: ArrayFunction = zero
  v0: ArrayFunction = zero
  g_lo: ArrayFunction = zero
  g_hi: ArrayFunction = zero
  source: ArrayFunction | None = None

  def __post_init__(self):
    if not self.x_hi > self.x_lo:
      raise ValueError(f'Empty domain ({self.x_lo}, {self.x_hi}).')
    if not self.time_window > 0:
      raise ValueError(f'Time window must be positive, got {self.time_window}.')

  @property
  def dimension(self) -> int:
    return 1

  @property
  def length(self) -> float:
    return self.x_hi - self.x_lo

  def with_time_window(self, time_window: float) -> 'WaveProblem1D':
    return dataclasses.replace(self, time_window=time_window)

  def homogeneous(self) -> 'WaveProblem1D':
    """Returns the problem with all data set to zero."""
    return dataclasses.replace(
        self, u0=zero, v0=zero, g_lo=zero, g_hi=zero, source=None
    )


@dataclasses.dataclass(frozen=True)
class WaveProblem2D:
  """u_tt = c^2 (u_xx + u_yy) + f on a rectangle, constant c.

  Attributes:
    x_lo: Left side of the rectangle.
    x_hi: Right side of the rectangle.
    y_lo: Bottom side of the rectangle.
    y_hi: Top side of the rectangle.
    time_window: Final time T.
    speed: Constant wave speed.
    u0: Initial displacement u0(x, y).
    v0: Initial velocity v0(x, y).
    g_left: Dirichlet datum g(t, y) on x = x_lo.
    g_right: Dirichlet datum g(t, y) on x = x_hi.
    g_bottom: Dirichlet datum g(t, x) on y = y_lo.
    g_top: Dirichlet datum g(t, x) on y = y_hi.
    source: Forcing f(t, x, y), or None for no forcing.
  """

  x_lo: float
  x_hi: float
  y_lo: float
  y_hi: float
  time_window: float
  speed: float = 1.0
  u0: ArrayFunction = zero
  v0: ArrayFunction = zero
  g_left: ArrayFunction = zero
  g_right: ArrayFunction = zero
  g_bottom: ArrayFunction = zero
  g_top: ArrayFunction = zero
  source: ArrayFunction | None = None

  def __post_init__(self):
    if not self.x_hi > self.x_lo or not self.y_hi > self.y_lo:
      raise ValueError('Empty rectangle.')
    if not self.time_window > 0:
      raise ValueError(f'Time window must be positive, got {self.time_window}.')
    if not self.speed > 0:
      raise ValueError(f'Wave speed must be positive, got {self.speed}.')

  @property
  def dimension(self) -> int:
    return 2

  @property
  def length(self) -> float:
    return self.x_hi - self.x_lo

  def with_time_window(self, time_window: float) -> 'WaveProblem2D':
    return dataclasses.replace(self, time_window=time_window)

  def homogeneous(self) -> 'WaveProblem2D':
    """Returns the problem with all data set to zero."""
    return dataclasses.replace(
        self,
        u0=zero,
        v0=zero,
        g_left=zero,
        g_right=zero,
        g_bottom=zero,
        g_top=zero,
        source=None,
    )


WaveProblem = WaveProblem1D | WaveProblem2D
