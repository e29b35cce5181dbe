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

"""Writes convergence curves and their sidecars to disk."""

import abc
import datetime
import json
import os
from typing import Any, Sequence

from absl import logging
import numpy as np
import pandas as pd
from wave_relaxation import constants

CSV_SUFFIX = '.csv'
SIDECAR_SUFFIX = '.json'
FLOAT_FORMAT = '%.17g'

Sidecar = dict[str, Any]


def _to_json(value: Any) -> Any:
  """Converts numpy values that `json` cannot serialize."""
  if isinstance(value, np.generic):
    return value.item()
  if isinstance(value, np.ndarray):
    return value.tolist()
  raise TypeError(f'Object of type {type(value).__name__} is not serializable.')


def curve_frame(errors: Sequence[float]) -> pd.DataFrame:
  """One row per iteration, starting with the initial guess."""
  return pd.DataFrame({
      constants.ITERATION: np.arange(len(errors), dtype=int),
      constants.ERROR: np.asarray(errors, dtype=float),
  })


def write_curve_csv(errors: Sequence[float], filename: str) -> None:
  curve_frame(errors).to_csv(
      filename, index=False, float_format=FLOAT_FORMAT, lineterminator='\n'
  )


def write_sidecar(sidecar: Sidecar, filename: str) -> None:
  with open(filename, 'w') as f:
    json.dump(sidecar, f, sort_keys=True, indent=2, default=_to_json)
    f.write('\n')


class Checkpointer(abc.ABC):
  """Saves and loads the curves of an experiment run."""

  @abc.abstractmethod
  def save_curve(
      self, name: str, errors: Sequence[float], sidecar: Sidecar
  ) -> list[str]:
    """Saves one curve and its sidecar; returns the written paths."""

  @abc.abstractmethod
  def load(self, fields: list[str] | None = None) -> list[Sidecar]:
    """Loads all sidecars."""


class IncrementalCheckpointer(Checkpointer):
  """Writes every curve as soon as it is computed.

  Attributes:
    directory: The directory the CSV and JSON files go to.
  """

  def __init__(self, directory: str) -> None:
    self.directory = directory
    os.makedirs(directory, exist_ok=True)

  def save_curve(
      self, name: str, errors: Sequence[float], sidecar: Sidecar
  ) -> list[str]:
    """Writes `<name>.csv` and `<name>.json`.

    Args:
      name: Curve name, used as the file stem.
      errors: errors[k] is the error after iteration k.
      sidecar: JSON-serializable description of the run.

    Returns:
      The CSV and sidecar paths.
    """
    if not name or os.sep in name:
      raise ValueError(f'Invalid curve name {name!r}.')
    csv_path = os.path.join(self.directory, name + CSV_SUFFIX)
    sidecar_path = os.path.join(self.directory, name + SIDECAR_SUFFIX)
    write_curve_csv(errors, csv_path)
    write_sidecar(sidecar, sidecar_path)
    print(f'Wrote curve {name} to {csv_path}')
    return [csv_path, sidecar_path]

  def load(self, fields: list[str] | None = None) -> list[Sidecar]:
    """Loads the sidecars in file name order."""
    data = []
    for filename in sorted(os.listdir(self.directory)):
      if not filename.endswith(SIDECAR_SUFFIX):
        continue
      try:
        sidecar = self._load_sidecar(filename)
        if fields is not None:
          sidecar = {field: sidecar.get(field) for field in fields}
        data.append(sidecar)
      except Exception as e:  # pylint: disable=broad-exception-caught
        print(f'Unable to load {filename} with exception: {e}')
    return data

  def load_curve(self, name: str) -> pd.DataFrame:
    """Reads back the CSV of one curve."""
    return pd.read_csv(
        os.path.join(self.directory, name + CSV_SUFFIX),
        float_precision='round_trip',
    )

  def _load_sidecar(self, filename: str) -> Sidecar:
    path = os.path.join(self.directory, filename)
    try:
      with open(path) as f:
        return json.load(f)
    except FileNotFoundError:
      logging.info('Sidecar not readable: %s.', path)
      return {}


class NullCheckpointer(Checkpointer):
  """Checkpointer that keeps nothing."""

  def __init__(self) -> None:
    """Constructor."""

  def save_curve(
      self, name: str, errors: Sequence[float], sidecar: Sidecar
  ) -> list[str]:
    del name, errors, sidecar
    return []

  def load(self, fields: list[str] | None = None) -> list[Sidecar]:
    del fields
    return []


def create_run_directory(location: str) -> str:
  """Returns a timestamped directory name for a run.

  Args:
    location: Parent directory.

  Returns:
    The path of the new run directory; it is not created.
  """
  timestamp = datetime.datetime.now().strftime('%Y%m%dT%H%M%S%f')
  return os.path.join(location, f'run_{timestamp}')
