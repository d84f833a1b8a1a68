"""
Utility functions for the Gaussian squeezing-metrology toolkit
"""

import numpy as np

import config
from models import ConfigError


def format_number(value, digits=12):
    """Locale-independent scientific notation with `digits` significant digits"""
    return f"{value:.{digits - 1}e}"


def parse_range(text):
    """Parse 'start:stop:count' (inclusive, linear) or a single number into an array"""
    parts = text.split(':')
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
        else:
            raise ValueError
    except ValueError:
        raise ConfigError(f"range must be a number or 'start:stop:count', got {text!r}") from None
    if count < 1:
        raise ConfigError(f"range {text!r} is empty")
    return np.linspace(start, stop, count)


def parse_scalar(text, name):
    """Parse a single number, rejecting range syntax"""
    values = parse_range(str(text))
    if values.size != 1:
        raise ConfigError(f"--{name} takes a single number here, got {text!r}")
    return float(values[0])


def max_relative_deviation(reference, candidate):
    """max |candidate - reference| / max(1, |reference|)"""
    reference = np.atleast_1d(np.asarray(reference, dtype=float))
    candidate = np.atleast_1d(np.asarray(candidate, dtype=float))
    if reference.size == 0:
        return 0.0
    return float(np.max(np.abs(candidate - reference) / np.maximum(1.0, np.abs(reference))))


def validate_rows(df, columns):
    """Check a table against a column contract

    Returns:
        (success, message)
    """
    if list(df.columns) != list(columns):
        return False, f"Expected columns {list(columns)}, found {list(df.columns)}"
    numeric = [column for column in columns if column not in config.TEXT_COLUMNS]
    bad = [column for column in numeric if not np.issubdtype(df[column].dtype, np.number)]
    if bad:
        return False, f"Non-numeric values in columns: {', '.join(bad)}"
    return True, f"{len(df)} rows match the declared schema"
