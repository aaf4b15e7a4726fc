"""
Result file emission: CSV tables and their JSON metadata sidecars
"""
import json
from pathlib import Path
from typing import Any, Dict

import pandas as pd

from .. import __version__
from ..utils.logger import get_logger

logger = get_logger(__name__)

SOFTWARE = 'walklab'
# %.17g round-trips every double
FLOAT_FORMAT = '%.17g'


def sidecar_path(path: Path) -> Path:
    return Path(path).with_suffix('.json')


def write_table(frame: pd.DataFrame, path: Path) -> Path:
    """Write a CSV with full-precision floats, '.' decimals and empty cells for NaN"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep='', lineterminator='\n')
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_metadata(path: Path, metadata: Dict[str, Any]) -> Path:
    """Write the JSON sidecar of a result file; software and version are always recorded"""
    record = {'software': SOFTWARE, 'version': __version__, **metadata}
    target = sidecar_path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(record, indent=2, sort_keys=True, default=str), encoding='utf-8')
    logger.debug(f"Wrote metadata to {target}")
    return target


def read_table(path: Path) -> pd.DataFrame:
    path = Path(path)
    if not path.is_file():
        raise ValueError(f"result file not found: {path}")
    return pd.read_csv(path)
