"""
Compare a result CSV with a reference density (KS) or with another result CSV (TV)
"""
from pathlib import Path
from typing import Any, Dict, Optional

from ..analysis.distance import Metric, distribution_distance
from ..analysis.distribution import Distribution, rescale
from ..analysis.reference import ReferenceDensity
from ..utils.logger import get_logger
from .output import read_table

logger = get_logger(__name__)


def load_distribution(path: Path) -> Distribution:
    return Distribution.from_frame(read_table(path))


def run_compare(result_path: Path, reference: Optional[str] = None, other_path: Optional[Path] = None,
                gamma: float = 1.0) -> Dict[str, Any]:
    """
    Distance record for a result file

    Exactly one of reference (e.g. 'beta:0.7', 'konno') or other_path must be given.
    """
    if (reference is None) == (other_path is None):
        raise ValueError("compare needs exactly one of a reference density or a second result file")

    dist = load_distribution(result_path)
    if reference is not None:
        density = ReferenceDensity.parse(reference)
        value = distribution_distance(rescale(dist, gamma), density, Metric.KS)
        record = {'metric': Metric.KS.value, 'reference': density.describe(), 'gamma': gamma}
    else:
        other = load_distribution(other_path)
        value = distribution_distance(dist, other, Metric.TV)
        record = {'metric': Metric.TV.value, 'other': str(other_path)}

    record.update({'result': str(result_path), 't': dist.horizon, 'value': value})
    logger.info(f"{record['metric'].upper()} distance of {result_path}: {value:.6g}")
    return record
