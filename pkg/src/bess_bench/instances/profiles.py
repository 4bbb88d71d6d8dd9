"""
Normalized daily renewable profiles.

CSV layout: header ``day,h1,...,h24``, one row per daily profile, values in
``[0, 1]``.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .rng import child_rng

logger = logging.getLogger(__name__)

HOURS = 24
COLUMNS = ["day"] + [f"h{h}" for h in range(1, HOURS + 1)]

# Solar output is nonzero for hours 6..21 (1-based).
SOLAR_FIRST_HOUR = 6
SOLAR_LAST_HOUR = 21
SOLAR_PEAK = (0.6, 1.0)
SOLAR_NOISE = 0.1
WIND_START = (0.2, 0.8)
WIND_STEP_SD = 0.08
WIND_MAX_STEP = 0.15

PROFILE_KINDS = ("solar", "wind")


class ProfileError(ValueError):
    """Malformed or out-of-range profile data."""


class EmptyPoolError(ValueError):
    """No profile available to draw from."""


@dataclass(frozen=True)
class Profile:
    """24 hourly values in ``[0, 1]`` (output per unit of installed capacity)."""

    values: tuple
    day: int = 0
    kind: str = ""

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if len(values) != HOURS:
            raise ProfileError(f"Profile (day {self.day}) has {len(values)} values, expected {HOURS}")
        for h, v in enumerate(values, start=1):
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise ProfileError(f"Profile (day {self.day}) value {v} at h{h} outside [0, 1]")
        object.__setattr__(self, "values", values)

    def as_array(self):
        return np.array(self.values)


def load_profiles(path, kind=""):
    """
    Read and validate a profile CSV.

    Parameters:
    -----------
    path : str or Path
        CSV file with header ``day,h1,...,h24``
    kind : str, optional
        Label attached to every profile (``"solar"``, ``"wind"``)

    Returns:
    --------
    list of Profile
    """
    try:
        frame = pd.read_csv(path, dtype=str, skipinitialspace=True)
    except FileNotFoundError as e:
        raise ProfileError(f"Profile file not found: {path}") from e
    except pd.errors.ParserError as e:
        raise ProfileError(f"Wrong column count in {path}: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise ProfileError(f"Profile file {path} is empty") from e

    columns = [c.strip() for c in frame.columns]
    if len(columns) != len(COLUMNS):
        raise ProfileError(
            f"{path}: expected {len(COLUMNS)} columns ({COLUMNS[0]},...,{COLUMNS[-1]}), "
            f"got {len(columns)}"
        )
    if columns != COLUMNS:
        raise ProfileError(f"{path}: header must be {','.join(COLUMNS)}")
    frame.columns = columns

    profiles = []
    for row, record in enumerate(frame.itertuples(index=False), start=1):
        raw = list(record)
        numbers = pd.to_numeric(pd.Series(raw), errors="coerce")
        missing = [COLUMNS[i] for i, ok in enumerate(numbers.notna()) if not ok]
        if missing:
            raise ProfileError(f"{path}: row {row} has malformed value in column {missing[0]}")
        day = numbers.iloc[0]
        if day != int(day):
            raise ProfileError(f"{path}: row {row} has non-integer day {raw[0]!r}")
        values = numbers.iloc[1:].to_numpy(dtype=float)
        for col, v in zip(COLUMNS[1:], values):
            if not 0.0 <= v <= 1.0:
                raise ProfileError(f"{path}: row {row} column {col} value {v} outside [0, 1]")
        profiles.append(Profile(tuple(values), int(day), kind))
    logger.debug("Loaded %d profiles from %s", len(profiles), path)
    return profiles


def profiles_frame(profiles):
    """Profiles as a DataFrame with the CSV columns."""
    data = [[p.day, *p.values] for p in profiles]
    frame = pd.DataFrame(data, columns=COLUMNS)
    frame["day"] = frame["day"].astype(int)
    return frame


def write_profiles(path, profiles):
    """Write ``profiles`` in the CSV layout read by :func:`load_profiles`."""
    profiles_frame(profiles).to_csv(path, index=False)


def _solar(rng):
    hours = np.arange(1, HOURS + 1)
    daylight = (hours >= SOLAR_FIRST_HOUR) & (hours <= SOLAR_LAST_HOUR)
    shape = np.where(daylight, np.sin(np.pi * (hours - SOLAR_FIRST_HOUR + 1) / 17.0), 0.0)
    peak = rng.uniform(*SOLAR_PEAK)
    noise = 1.0 + rng.uniform(-SOLAR_NOISE, SOLAR_NOISE, size=HOURS)
    return np.clip(np.maximum(shape, 0.0) * peak * noise, 0.0, 1.0)


def _wind(rng):
    values = np.empty(HOURS)
    values[0] = rng.uniform(*WIND_START)
    steps = np.clip(rng.normal(0.0, WIND_STEP_SD, size=HOURS - 1), -WIND_MAX_STEP, WIND_MAX_STEP)
    for h in range(1, HOURS):
        values[h] = min(1.0, max(0.0, values[h - 1] + steps[h - 1]))
    return values


def synth_profile(rng, kind, day=0):
    """
    Synthetic daily profile.

    ``solar``: raised sine over hours 6..21 scaled by a random peak with
    multiplicative noise, zero at night. ``wind``: bounded random walk with
    hourly steps of at most ``WIND_MAX_STEP``.
    """
    if kind == "solar":
        values = _solar(rng)
    elif kind == "wind":
        values = _wind(rng)
    else:
        raise ProfileError(f"Unknown profile kind {kind!r}. Available: {list(PROFILE_KINDS)}")
    return Profile(tuple(values), day, kind)


def synth_pool(seed, n_solar, n_wind):
    """Deterministic pool of ``n_solar`` solar then ``n_wind`` wind profiles."""
    pool = [synth_profile(child_rng(seed, i, tag="solar"), "solar", i + 1) for i in range(n_solar)]
    pool += [
        synth_profile(child_rng(seed, i, tag="wind"), "wind", n_solar + i + 1) for i in range(n_wind)
    ]
    return pool


def select_pool(profiles, kind="all"):
    """
    Profiles of ``kind``; unlabelled pools (loaded from file) are used whole.

    Raises EmptyPoolError when nothing is left to draw from.
    """
    profiles = list(profiles)
    if kind != "all" and any(p.kind for p in profiles):
        profiles = [p for p in profiles if p.kind == kind]
    if not profiles:
        raise EmptyPoolError(f"No {kind} profiles in the pool")
    return profiles
