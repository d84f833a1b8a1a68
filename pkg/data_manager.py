"""
Data loading, saving, and table formatting functions
"""

import io
import json
import logging
import os
import sys

import numpy as np
import pandas as pd

import config
from gaussian_core import GaussianState
from models import ConfigError, ThetaPrior

logger = logging.getLogger(__name__)

FORMATS = ['csv', 'json']


def load_state(source):
    """Load a state from inline JSON or from a JSON file path"""
    text = source
    if not source.lstrip().startswith('{'):
        try:
            with open(source, 'r') as f:
                text = f.read()
        except OSError as e:
            logger.error(f"Error loading state file {source}: {e}")
            raise ConfigError(f"cannot read state file {source!r}: {e.strerror or e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        logger.error(f"Error parsing state JSON: {e}")
        raise ConfigError(f"malformed state JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("state JSON must be an object with 'modes', 'gamma' and 'xi'")
    return GaussianState.from_dict(data)


def save_state(state, file_path):
    """Save a state as indented JSON"""
    _ensure_parent(file_path)
    try:
        with open(file_path, 'w') as f:
            json.dump(state.to_dict(), f, indent=2)
    except OSError as e:
        logger.error(f"Error saving state to {file_path}: {e}")
        raise ConfigError(f"cannot write state file {file_path!r}") from e
    logger.info(f"Saved state to {file_path}")


def load_prior(file_path):
    """Load a tabulated theta prior (columns theta, density); 'uniform' gives the uniform prior"""
    if file_path is None or file_path == 'uniform':
        return ThetaPrior.uniform()
    try:
        df = pd.read_csv(file_path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        logger.error(f"Error loading prior table {file_path}: {e}")
        raise ConfigError(f"cannot read prior table {file_path!r}") from e
    missing = {'theta', 'density'} - set(df.columns)
    if missing:
        raise ConfigError(f"prior table is missing columns: {', '.join(sorted(missing))}")
    try:
        theta = df['theta'].astype(float).to_numpy()
        density = df['density'].astype(float).to_numpy()
    except ValueError as e:
        raise ConfigError(f"prior table has non-numeric entries: {e}") from e
    return ThetaPrior(theta=theta, density=density)


def records_to_frame(records, comparison_mode):
    """Sweep records as a table with the declared column contract"""
    columns = [config.BUDGET_COLUMN[comparison_mode]] + config.SWEEP_COLUMNS
    return pd.DataFrame([record.to_row() for record in records], columns=columns)


def samples_to_frame(rows):
    return pd.DataFrame(rows, columns=config.SAMPLE_COLUMNS)


def _ensure_parent(file_path):
    parent = os.path.dirname(file_path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def _write_text(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    _ensure_parent(out)
    try:
        with open(out, 'w', newline='') as f:
            f.write(text)
    except OSError as e:
        logger.error(f"Error writing {out}: {e}")
        raise ConfigError(f"cannot write output file {out!r}") from e
    logger.info(f"Wrote {out}")


def format_table(df, fmt='csv'):
    """Render a table as CSV (12 significant digits) or JSON records"""
    if fmt == 'csv':
        buffer = io.StringIO()
        df.to_csv(buffer, index=False, float_format=config.CSV_FLOAT_FORMAT)
        return buffer.getvalue()
    if fmt == 'json':
        return df.to_json(orient='records', double_precision=15) + '\n'
    raise ConfigError(f"unknown output format {fmt!r}")


def write_table(df, out=None, fmt='csv'):
    """Write a table to `out`, or to stdout when no path is given"""
    _write_text(format_table(df, fmt), out)


def _flatten(report, prefix=''):
    row = {}
    for key, value in report.items():
        if isinstance(value, dict):
            row.update(_flatten(value, f"{prefix}{key}."))
        elif isinstance(value, (list, tuple)):
            row[prefix + key] = config.FLAG_SEPARATOR.join(str(item) for item in value)
        else:
            row[prefix + key] = value
    return row


def write_report(report, out=None, fmt='json'):
    """Write a report mapping as indented JSON or a single-row CSV

    Nested mappings become dotted CSV columns (closed_form.mean).
    """
    if fmt == 'json':
        _write_text(json.dumps(report, indent=2, default=_json_default) + '\n', out)
    elif fmt == 'csv':
        write_table(pd.DataFrame([_flatten(report)]), out, 'csv')
    else:
        raise ConfigError(f"unknown output format {fmt!r}")


def metadata_path(out):
    return f"{out}{config.METADATA_SUFFIX}"


def write_metadata(metadata, out=None):
    """Sidecar JSON next to a table written to `out`; logged instead for stdout"""
    if out is None:
        logger.info(f"Table metadata: {json.dumps(metadata, default=_json_default)}")
        return None
    path = metadata_path(out)
    _write_text(json.dumps(metadata, indent=2, default=_json_default) + '\n', path)
    return path


def _json_default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def read_table(file_path, columns):
    """Read a CSV table and check it against a column contract"""
    try:
        df = pd.read_csv(file_path, dtype={column: str for column in config.TEXT_COLUMNS},
                         keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        logger.error(f"Error reading table {file_path}: {e}")
        raise ConfigError(f"cannot read table {file_path!r}") from e
    if list(df.columns) != list(columns):
        raise ConfigError(f"table columns {list(df.columns)} do not match {list(columns)}")
    for column in columns:
        if column not in config.TEXT_COLUMNS:
            df[column] = pd.to_numeric(df[column].replace('', np.nan))
    return df
