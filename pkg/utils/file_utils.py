"""
File utilities for matrix documents and JSON reports
Handles parsing, validation, serialization and directory creation
"""
import json
import logging
import os

import numpy as np

from config import Config
from services.hermitian import HermitianMatrix

logger = logging.getLogger(__name__)


class MatrixFileError(ValueError):
    """Malformed or unacceptable matrix document"""


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _read_grid(document, key, dim):
    rows = document[key]
    if not isinstance(rows, list) or len(rows) != dim:
        raise MatrixFileError(f"'{key}' must be a list of {dim} rows")
    for index, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise MatrixFileError(f"'{key}' row {index} must have {dim} entries")
        if not all(_is_number(value) for value in row):
            raise MatrixFileError(f"'{key}' row {index} contains a non-numeric entry")
    return np.array(rows, dtype=float)


def asymmetry(array):
    """Largest absolute entry of H - H^dagger"""
    return float(np.max(np.abs(array - array.conj().T)))


def parse_matrix(text, source='<document>'):
    """Parse a {"dim", "real", "imag"?} document into a Hermitian matrix"""
    try:
        document = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise MatrixFileError(f"{source}: not a valid JSON document ({e})") from e

    if not isinstance(document, dict) or 'dim' not in document or 'real' not in document:
        raise MatrixFileError(f"{source}: document needs 'dim' and 'real' fields")

    dim = document['dim']
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise MatrixFileError(f"{source}: 'dim' must be a positive integer, got {dim!r}")

    array = _read_grid(document, 'real', dim).astype(complex)
    if document.get('imag') is not None:
        array = array + 1j * _read_grid(document, 'imag', dim)

    if not np.all(np.isfinite(array)):
        raise MatrixFileError(f"{source}: entries must be finite")

    skew = asymmetry(array)
    if skew > Config.ASYMMETRY_LIMIT:
        raise MatrixFileError(f"{source}: matrix is not Hermitian (asymmetry {skew:.3g} > {Config.ASYMMETRY_LIMIT:g})")
    if skew > Config.ASYMMETRY_WARNING:
        logger.warning(f"⚠️  {source}: asymmetry {skew:.3g} exceeds {Config.ASYMMETRY_WARNING:g}, symmetrizing")

    return HermitianMatrix(array)


def matrix_to_document(H):
    """Serialize a Hermitian matrix; 'imag' is present only when nonzero"""
    document = {
        'dim': H.dim,
        'real': np.real(H.entries).tolist()
    }
    if np.any(np.imag(H.entries) != 0):
        document['imag'] = np.imag(H.entries).tolist()
    return document


def serialize_matrix(H):
    return json.dumps(matrix_to_document(H))


def read_matrix_file(filepath):
    """Load a matrix document from disk"""
    try:
        with open(filepath, 'rb') as f:
            text = f.read()
    except OSError as e:
        raise MatrixFileError(f"Cannot read matrix file {filepath}: {e}") from e

    matrix = parse_matrix(text, source=filepath)
    logger.debug(f"✅ Matrix loaded from: {filepath} (dim {matrix.dim})")
    return matrix


def ensure_directory_exists(directory_path):
    """Ensure a directory exists, creating it if necessary"""
    if directory_path:
        os.makedirs(directory_path, exist_ok=True)


def _jsonable(value):
    # numpy scalars become Python values; non-finite floats become strings
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return 'Infinity' if value > 0 else ('-Infinity' if value < 0 else 'NaN')
    return value


def render_report(report):
    return json.dumps(_jsonable(report), indent=2, ensure_ascii=False, allow_nan=False) + '\n'


def write_report(report, filepath=None, stream=None):
    """Write a report to a file, or to the given stream when no path is set"""
    text = render_report(report)

    if filepath is None:
        stream.write(text)
        return None

    ensure_directory_exists(os.path.dirname(filepath))
    with open(filepath, 'w', encoding='utf-8') as f:
        f.write(text)

    logger.info(f"✅ Report saved to: {filepath}")
    return filepath
