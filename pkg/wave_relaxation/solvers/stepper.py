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

"""Explicit leapfrog solvers for a single subdomain.

The 1D scheme advances

  u^{m+1}_j = 2 u^m_j - u^{m-1}_j
              + (dt/dx)^2 [a_j (u_{j-1} - u_j) + b_j (u_{j+1} - u_j)]
              + dt^2 f^m_j

where a_j and b_j are the couplings to the left and right neighbor. A
subdomain with speed c uses a_j = b_j = c_j^2. Neumann and first-order
conditions act through a ghost node beyond the boundary; the first step is a
second-order Taylor step.
"""

import dataclasses

import numpy as np
from wave_relaxation.core import traces

DIRICHLET = 'dirichlet'
NEUMANN = 'neumann'
FIRST_ORDER = 'first_order'

LEFT = 'left'
RIGHT = 'right'

ONE_SIDED = 'one_sided'
CONSISTENT = 'consistent'

_CFL_SLACK = 1e-12


@dataclasses.dataclass(frozen=True, eq=False)
class BoundaryCondition:
  """Condition imposed on one x-side of a subdomain.

  Attributes:
    kind: DIRICHLET, NEUMANN or FIRST_ORDER.
    trace: Data on the subdomain's own time grid. Neumann data is the outward
      normal derivative; first-order data is the value of
      d/dn u + (1/c) u_t + p u.
    p: Zeroth-order coefficient of a first-order condition.
    initial_ghost: Ghost value (column in 2D) used by the first step of a
      first-order condition. When None the ghost follows from the data.
  """

  kind: str
  trace: traces.SpaceTimeTrace
  p: float = 0.0
  initial_ghost: float | np.ndarray | None = None

  def __post_init__(self):
    if self.kind not in (DIRICHLET, NEUMANN, FIRST_ORDER):
      raise ValueError(f'Unknown boundary condition {self.kind!r}.')
    if self.p < 0:
      raise ValueError(f'p must be non-negative, got {self.p}.')


@dataclasses.dataclass(frozen=True, eq=False)
class BoundarySpec:
  left: BoundaryCondition
  right: BoundaryCondition


def dirichlet(trace: traces.SpaceTimeTrace) -> BoundaryCondition:
  return BoundaryCondition(DIRICHLET, trace)


def neumann(trace: traces.SpaceTimeTrace) -> BoundaryCondition:
  return BoundaryCondition(NEUMANN, trace)


def first_order(
    trace: traces.SpaceTimeTrace,
    p: float = 0.0,
    initial_ghost: float | np.ndarray | None = None,
) -> BoundaryCondition:
  return BoundaryCondition(FIRST_ORDER, trace, p, initial_ghost)


@dataclasses.dataclass(frozen=True, eq=False)
class SubdomainField1D:
  """Discrete solution on one 1D subdomain.

  Attributes:
    x: Nodes, boundary nodes included.
    time_grid: Uniform time levels.
    values: Shape (M+1, J+1).
    left_coupling: Coupling of every node to its left neighbor.
    right_coupling: Coupling of every node to its right neighbor.
    v0: Initial velocity on the nodes.
    source: Forcing on the space-time grid, or None.
  """

  x: np.ndarray
  time_grid: np.ndarray
  values: np.ndarray
  left_coupling: np.ndarray
  right_coupling: np.ndarray
  v0: np.ndarray
  source: np.ndarray | None = None

  @property
  def dx(self) -> float:
    return float(self.x[1] - self.x[0])

  @property
  def dt(self) -> float:
    return float(self.time_grid[1] - self.time_grid[0])

  @property
  def is_2d(self) -> bool:
    return False

  def speed_at(self, side: str) -> float:
    j = 0 if side == LEFT else -1
    return float(np.sqrt(self.left_coupling[j]))

  def boundary_trace(self, side: str) -> traces.SpaceTimeTrace:
    j = 0 if side == LEFT else -1
    return traces.SpaceTimeTrace(self.time_grid, self.values[:, j])


@dataclasses.dataclass(frozen=True, eq=False)
class SubdomainField2D:
  """Discrete solution on one strip of a 2D problem.

  Attributes:
    x: Nodes across the strip.
    y: Nodes along the strip.
    time_grid: Uniform time levels.
    values: Shape (M+1, J+1, ny+1).
    speed: Constant wave speed.
    v0: Initial velocity on the nodes.
    source: Forcing on the space-time grid, or None.
  """

  x: np.ndarray
  y: np.ndarray
  time_grid: np.ndarray
  values: np.ndarray
  speed: float
  v0: np.ndarray
  source: np.ndarray | None = None

  @property
  def dx(self) -> float:
    return float(self.x[1] - self.x[0])

  @property
  def dy(self) -> float:
    return float(self.y[1] - self.y[0])

  @property
  def dt(self) -> float:
    return float(self.time_grid[1] - self.time_grid[0])

  @property
  def is_2d(self) -> bool:
    return True

  def speed_at(self, side: str) -> float:
    del side
    return float(self.speed)

  def boundary_trace(self, side: str) -> traces.SpaceTimeTrace:
    j = 0 if side == LEFT else -1
    return traces.SpaceTimeTrace(self.time_grid, self.values[:, j, :])


SubdomainField = SubdomainField1D | SubdomainField2D


def _uniform_step(grid: np.ndarray, what: str) -> float:
  grid = np.asarray(grid, dtype=float)
  if grid.ndim != 1 or grid.size < 2:
    raise ValueError(f'The {what} grid needs at least two points.')
  steps = np.diff(grid)
  if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * steps[0]:
    raise ValueError(f'The {what} grid must be uniform and increasing.')
  return float(grid[-1] - grid[0]) / (grid.size - 1)


def _check_trace(
    condition: BoundaryCondition, time_grid: np.ndarray, shape: tuple[int, ...]
) -> np.ndarray:
  trace = condition.trace
  if trace.time_grid.size != time_grid.size or not np.allclose(
      trace.time_grid, time_grid, rtol=0.0, atol=1e-12 * max(time_grid[-1], 1)
  ):
    raise ValueError(
        'Boundary trace is not sampled on the subdomain time grid;'
        ' project it first.'
    )
  if trace.values.shape[1:] != shape:
    raise ValueError(
        f'Boundary trace of shape {trace.values.shape} does not fit the'
        ' subdomain side.'
    )
  return np.asarray(trace.values)


def _ghost(
    condition: BoundaryCondition,
    data: np.ndarray,
    inner: np.ndarray,
    dx: float,
) -> np.ndarray | None:
  """Neumann ghost value: mirror of the inner neighbor plus 2 dx g."""
  if condition.kind == NEUMANN:
    return inner + 2.0 * dx * data
  return None


def _first_order_initial_ghost(
    condition: BoundaryCondition,
    data0: np.ndarray,
    u0: np.ndarray,
    inner0: np.ndarray,
    v0: np.ndarray,
    speed: float,
    dx: float,
) -> np.ndarray:
  if condition.initial_ghost is not None:
    return np.asarray(condition.initial_ghost, dtype=float)
  return inner0 + 2.0 * dx * (data0 - condition.p * u0 - v0 / speed)


def _first_order_update(
    condition: BoundaryCondition,
    data: np.ndarray,
    now: np.ndarray,
    before: np.ndarray,
    inner: np.ndarray,
    forcing: np.ndarray,
    speed: float,
    dt: float,
    dx: float,
) -> np.ndarray:
  """Boundary value at the next level under a first-order condition.

  The ghost is eliminated with the centered form of
  d/dn u + (1/c) u_t + p u = g. `forcing` collects dt^2 times every
  contribution to the node update that does not involve the x direction.
  """
  lam = speed * dt / dx
  return (
      2.0 * now
      - (1.0 - lam) * before
      + 2.0 * lam**2 * (inner - now)
      + 2.0 * lam**2 * dx * (data - condition.p * now)
      + forcing
  ) / (1.0 + lam)


def _laplacian_1d(
    u: np.ndarray,
    left: np.ndarray,
    right: np.ndarray,
    ghost_left: np.ndarray | None,
    ghost_right: np.ndarray | None,
) -> np.ndarray:
  """Coupled second difference, without the 1/dx^2 factor."""
  lap = np.empty_like(u)
  lap[1:-1] = left[1:-1] * (u[:-2] - u[1:-1]) + right[1:-1] * (u[2:] - u[1:-1])
  lap[0] = right[0] * (u[1] - u[0])
  if ghost_left is not None:
    lap[0] += left[0] * (ghost_left - u[0])
  lap[-1] = left[-1] * (u[-2] - u[-1])
  if ghost_right is not None:
    lap[-1] += right[-1] * (ghost_right - u[-1])
  return lap


def solve_subdomain_1d(
    x: np.ndarray,
    time_grid: np.ndarray,
    speed: float | np.ndarray,
    u0: np.ndarray,
    v0: np.ndarray,
    bc: BoundarySpec,
    source: np.ndarray | None = None,
    couplings: tuple[np.ndarray, np.ndarray] | None = None,
) -> SubdomainField1D:
  """Solves the wave equation on one interval.

  Args:
    x: Uniform nodes x_0 < ... < x_J, J >= 1.
    time_grid: Uniform time levels 0 = t_0 < ... < t_M.
    speed: Wave speed, scalar or one value per node.
    u0: Initial displacement on the nodes.
    v0: Initial velocity on the nodes.
    bc: Conditions at x_0 and x_J, sampled on `time_grid`.
    source: Forcing of shape (M+1, J+1), or None.
    couplings: Left and right neighbor couplings per node. Defaults to c^2 on
      both sides.

  Returns:
    The field on all levels. Dirichlet data is imposed on every level, the
    initial one included.

  Raises:
    ValueError: On grid/trace mismatches or a CFL violation.
  """
  x = np.asarray(x, dtype=float)
  time_grid = np.asarray(time_grid, dtype=float)
  dx = _uniform_step(x, 'space')
  dt = _uniform_step(time_grid, 'time')
  num_steps = time_grid.size - 1
  speed = np.broadcast_to(np.asarray(speed, dtype=float), x.shape)
  if couplings is None:
    left_c = right_c = speed**2
  else:
    left_c = np.asarray(couplings[0], dtype=float)
    right_c = np.asarray(couplings[1], dtype=float)
  courant = float(np.sqrt(np.max(np.maximum(left_c, right_c)))) * dt / dx
  if courant > 1 + _CFL_SLACK:
    raise ValueError(f'CFL condition violated: Courant number {courant:.6g}.')
  left_data = _check_trace(bc.left, time_grid, ())
  right_data = _check_trace(bc.right, time_grid, ())
  if source is not None:
    source = np.asarray(source, dtype=float)
    if source.shape != (num_steps + 1, x.size):
      raise ValueError(f'Source of shape {source.shape} does not fit the grid.')
  v0 = np.broadcast_to(np.asarray(v0, dtype=float), x.shape)
  r2 = (dt / dx) ** 2
  c_left, c_right = float(speed[0]), float(speed[-1])

  u = np.empty((num_steps + 1, x.size))
  u[0] = np.broadcast_to(np.asarray(u0, dtype=float), x.shape)
  _impose_dirichlet_1d(u, 0, bc, left_data, right_data)

  ghost_left = _ghost(bc.left, left_data[0], u[0, 1], dx)
  ghost_right = _ghost(bc.right, right_data[0], u[0, -2], dx)
  if bc.left.kind == FIRST_ORDER:
    ghost_left = _first_order_initial_ghost(
        bc.left, left_data[0], u[0, 0], u[0, 1], v0[0], c_left, dx
    )
  if bc.right.kind == FIRST_ORDER:
    ghost_right = _first_order_initial_ghost(
        bc.right, right_data[0], u[0, -1], u[0, -2], v0[-1], c_right, dx
    )
  lap = _laplacian_1d(u[0], left_c, right_c, ghost_left, ghost_right)
  u[1] = u[0] + dt * v0 + 0.5 * r2 * lap
  if source is not None:
    u[1] += 0.5 * dt**2 * source[0]
  _impose_dirichlet_1d(u, 1, bc, left_data, right_data)

  for m in range(1, num_steps):
    now, before = u[m], u[m - 1]
    ghost_left = _ghost(bc.left, left_data[m], now[1], dx)
    ghost_right = _ghost(bc.right, right_data[m], now[-2], dx)
    lap = _laplacian_1d(now, left_c, right_c, ghost_left, ghost_right)
    u[m + 1] = 2.0 * now - before + r2 * lap
    forcing = np.zeros(x.shape) if source is None else dt**2 * source[m]
    u[m + 1] += forcing
    if bc.left.kind == FIRST_ORDER:
      u[m + 1, 0] = _first_order_update(
          bc.left, left_data[m], now[0], before[0], now[1], forcing[0],
          c_left, dt, dx,
      )
    if bc.right.kind == FIRST_ORDER:
      u[m + 1, -1] = _first_order_update(
          bc.right, right_data[m], now[-1], before[-1], now[-2], forcing[-1],
          c_right, dt, dx,
      )
    _impose_dirichlet_1d(u, m + 1, bc, left_data, right_data)

  return SubdomainField1D(
      x=x,
      time_grid=time_grid,
      values=u,
      left_coupling=np.array(left_c),
      right_coupling=np.array(right_c),
      v0=np.array(v0),
      source=source,
  )


def _impose_dirichlet_1d(u, m, bc, left_data, right_data) -> None:
  if bc.left.kind == DIRICHLET:
    u[m, 0] = left_data[m]
  if bc.right.kind == DIRICHLET:
    u[m, -1] = right_data[m]


def solve_subdomain_2d(
    x: np.ndarray,
    y: np.ndarray,
    time_grid: np.ndarray,
    speed: float,
    u0: np.ndarray,
    v0: np.ndarray,
    bc: BoundarySpec,
    y_data: tuple[np.ndarray, np.ndarray],
    source: np.ndarray | None = None,
) -> SubdomainField2D:
  """Solves the wave equation on a strip [x_0, x_J] x [y_lo, y_hi].

  Args:
    x: Uniform nodes across the strip, J >= 1.
    y: Uniform nodes along the strip.
    time_grid: Uniform time levels.
    speed: Constant wave speed.
    u0: Initial displacement, shape (J+1, ny+1).
    v0: Initial velocity, shape (J+1, ny+1).
    bc: Conditions on x = x_0 and x = x_J; traces have shape (M+1, ny+1).
    y_data: Dirichlet data on y = y_lo and y = y_hi, each (M+1, J+1). They
      take precedence at the corners.
    source: Forcing of shape (M+1, J+1, ny+1), or None.

  Returns:
    The field on all levels.

  Raises:
    ValueError: On grid/trace mismatches or a CFL violation.
  """
  x = np.asarray(x, dtype=float)
  y = np.asarray(y, dtype=float)
  time_grid = np.asarray(time_grid, dtype=float)
  dx = _uniform_step(x, 'space')
  dy = _uniform_step(y, 'y')
  dt = _uniform_step(time_grid, 'time')
  num_steps = time_grid.size - 1
  speed = float(speed)
  courant = speed * dt * np.sqrt(1 / dx**2 + 1 / dy**2)
  if courant > 1 + _CFL_SLACK:
    raise ValueError(f'CFL condition violated: Courant number {courant:.6g}.')
  shape = (x.size, y.size)
  left_data = _check_trace(bc.left, time_grid, (y.size,))
  right_data = _check_trace(bc.right, time_grid, (y.size,))
  bottom, top = (np.asarray(d, dtype=float) for d in y_data)
  if bottom.shape != (num_steps + 1, x.size) or top.shape != bottom.shape:
    raise ValueError('y-boundary data does not fit the grid.')
  if source is not None:
    source = np.asarray(source, dtype=float)
    if source.shape != (num_steps + 1,) + shape:
      raise ValueError(f'Source of shape {source.shape} does not fit the grid.')
  v0 = np.broadcast_to(np.asarray(v0, dtype=float), shape)
  c2 = speed**2

  u = np.empty((num_steps + 1,) + shape)
  u[0] = np.broadcast_to(np.asarray(u0, dtype=float), shape)
  _impose_dirichlet_2d(u, 0, bc, left_data, right_data, bottom, top)

  ghost_left = _ghost(bc.left, left_data[0], u[0, 1], dx)
  ghost_right = _ghost(bc.right, right_data[0], u[0, -2], dx)
  if bc.left.kind == FIRST_ORDER:
    ghost_left = _first_order_initial_ghost(
        bc.left, left_data[0], u[0, 0], u[0, 1], v0[0], speed, dx
    )
  if bc.right.kind == FIRST_ORDER:
    ghost_right = _first_order_initial_ghost(
        bc.right, right_data[0], u[0, -1], u[0, -2], v0[-1], speed, dx
    )
  lap = c2 * _laplacian_2d(u[0], dx, dy, ghost_left, ghost_right)
  u[1] = u[0] + dt * v0 + 0.5 * dt**2 * lap
  if source is not None:
    u[1] += 0.5 * dt**2 * source[0]
  _impose_dirichlet_2d(u, 1, bc, left_data, right_data, bottom, top)

  for m in range(1, num_steps):
    now, before = u[m], u[m - 1]
    ghost_left = _ghost(bc.left, left_data[m], now[1], dx)
    ghost_right = _ghost(bc.right, right_data[m], now[-2], dx)
    lap = c2 * _laplacian_2d(now, dx, dy, ghost_left, ghost_right)
    u[m + 1] = 2.0 * now - before + dt**2 * lap
    if source is not None:
      u[m + 1] += dt**2 * source[m]
    for side, condition, data in (
        (0, bc.left, left_data),
        (-1, bc.right, right_data),
    ):
      if condition.kind != FIRST_ORDER:
        continue
      inner = 1 if side == 0 else -2
      forcing = dt**2 * c2 * _second_difference_y(now[side], dy)
      if source is not None:
        forcing = forcing + dt**2 * source[m, side]
      u[m + 1, side] = _first_order_update(
          condition, data[m], now[side], before[side], now[inner], forcing,
          speed, dt, dx,
      )
    _impose_dirichlet_2d(u, m + 1, bc, left_data, right_data, bottom, top)

  return SubdomainField2D(
      x=x,
      y=y,
      time_grid=time_grid,
      values=u,
      speed=speed,
      v0=np.array(v0),
      source=source,
  )


def _second_difference_y(column: np.ndarray, dy: float) -> np.ndarray:
  """u_yy along one x column; zero on the y-boundary rows."""
  d2y = np.zeros_like(column)
  d2y[1:-1] = (column[2:] - 2.0 * column[1:-1] + column[:-2]) / dy**2
  return d2y


def _laplacian_2d(
    u: np.ndarray,
    dx: float,
    dy: float,
    ghost_left: np.ndarray | None,
    ghost_right: np.ndarray | None,
) -> np.ndarray:
  padded = np.empty((u.shape[0] + 2, u.shape[1]))
  padded[1:-1] = u
  padded[0] = u[0] if ghost_left is None else ghost_left
  padded[-1] = u[-1] if ghost_right is None else ghost_right
  lap = (padded[2:] - 2.0 * u + padded[:-2]) / dx**2
  if ghost_left is None:
    lap[0] = (u[1] - u[0]) / dx**2
  if ghost_right is None:
    lap[-1] = (u[-2] - u[-1]) / dx**2
  lap[:, 1:-1] += (u[:, 2:] - 2.0 * u[:, 1:-1] + u[:, :-2]) / dy**2
  return lap


def _impose_dirichlet_2d(u, m, bc, left_data, right_data, bottom, top) -> None:
  if bc.left.kind == DIRICHLET:
    u[m, 0] = left_data[m]
  if bc.right.kind == DIRICHLET:
    u[m, -1] = right_data[m]
  u[m, :, 0] = bottom[m]
  u[m, :, -1] = top[m]


def _one_sided(values: np.ndarray, side: str, dx: float) -> np.ndarray:
  """Second-order one-sided outward derivative along axis 1."""
  if values.shape[1] < 3:
    raise ValueError('A one-sided derivative needs at least three nodes.')
  if side == RIGHT:
    return (3.0 * values[:, -1] - 4.0 * values[:, -2] + values[:, -3]) / (
        2.0 * dx
    )
  return (3.0 * values[:, 0] - 4.0 * values[:, 1] + values[:, 2]) / (2.0 * dx)


def _time_residual(field: SubdomainField, j: int) -> np.ndarray:
  """u^{m+1} - 2u^m + u^{m-1} - dt^2 f^m on node column j.

  Level 0 uses the Taylor step, 2 (u^1 - u^0 - dt v0) - dt^2 f^0. The last
  level has no residual and is left at zero.
  """
  u = field.values[:, j]
  dt = field.dt
  residual = np.zeros_like(u)
  residual[1:-1] = u[2:] - 2.0 * u[1:-1] + u[:-2]
  residual[0] = 2.0 * (u[1] - u[0] - dt * field.v0[j])
  if field.source is not None:
    residual[:-1] -= dt**2 * field.source[:-1, j]
  return residual


def extract_normal_derivative(
    field: SubdomainField, side: str, stencil: str = ONE_SIDED
) -> traces.SpaceTimeTrace:
  """Outward normal derivative of a field at one x-side.

  Args:
    field: A solved subdomain.
    side: LEFT or RIGHT.
    stencil: ONE_SIDED for the second-order one-sided difference, CONSISTENT
      for the flux that, imposed as Neumann data, makes the Neumann solve
      reproduce the field. CONSISTENT falls back to ONE_SIDED on the last
      level and, in 2D, on the y-boundary rows.

  Returns:
    A FLUX trace on the field's time grid; shape (M+1,) or (M+1, ny+1).
  """
  if side not in (LEFT, RIGHT):
    raise ValueError(f'Unknown side {side!r}.')
  if stencil not in (ONE_SIDED, CONSISTENT):
    raise ValueError(f'Unknown stencil {stencil!r}.')
  values = field.values
  if values.shape[1] < 3:
    raise ValueError('A normal derivative needs at least three nodes.')
  dx = field.dx
  one_sided = _one_sided(values, side, dx)
  if stencil == ONE_SIDED:
    return traces.SpaceTimeTrace(field.time_grid, one_sided, traces.FLUX)

  b, nb = (0, 1) if side == LEFT else (-1, -2)
  dt = field.dt
  if field.is_2d:
    residual = _time_residual(field, b)
    d2y = np.stack([_second_difference_y(level, field.dy)
                    for level in values[:, b]])
    flux = (
        dx**2 * (residual / (dt**2 * field.speed**2) - d2y)
        - 2.0 * (values[:, nb] - values[:, b])
    ) / (2.0 * dx)
    flux[:, 0] = one_sided[:, 0]
    flux[:, -1] = one_sided[:, -1]
  else:
    residual = _time_residual(field, b)
    own = field.left_coupling[b] + field.right_coupling[b]
    ghost_side = field.left_coupling[0] if side == LEFT else (
        field.right_coupling[-1]
    )
    flux = (
        residual * dx**2 / dt**2 - own * (values[:, nb] - values[:, b])
    ) / (2.0 * dx * ghost_side)
  flux[-1] = one_sided[-1]
  return traces.SpaceTimeTrace(field.time_grid, flux, traces.FLUX)
