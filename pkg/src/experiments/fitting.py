"""
Decay-model fits of statistic series and the coefficient tables built from them
"""
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from ..analysis.regression import DecayModel, FitResult, fit_decay
from ..utils.logger import get_logger
from .output import read_table, write_metadata, write_table

logger = get_logger(__name__)

COEFFICIENT_COLUMNS = ['lambda', 'zeta', 'p', 'model', 'c', 'r', 'r_squared', 'rmse', 'converged']
POINT_KEYS = ['lambda', 'zeta', 'p']


def fit_models(series: Sequence[Tuple[float, float]]) -> Dict[DecayModel, FitResult]:
    """Fit both decay models to one (t, value) series"""
    fits = {model: fit_decay(series, model) for model in DecayModel}
    rational, exponential = fits[DecayModel.RATIONAL], fits[DecayModel.EXPONENTIAL]
    logger.debug(
        f"Fits: rational c={rational.c:.4g} r={rational.r:.4g} R2={rational.r_squared:.4f}; "
        f"exponential c={exponential.c:.4g} r={exponential.r:.4g} R2={exponential.r_squared:.4f}"
    )
    return fits


def coefficient_rows(lam: float, zeta: float, p: float, fits: Dict[DecayModel, FitResult]) -> List[dict]:
    return [
        {'lambda': lam, 'zeta': zeta, 'p': p, 'model': model.value, 'c': fit.c, 'r': fit.r,
         'r_squared': fit.r_squared, 'rmse': fit.rmse, 'converged': fit.converged}
        for model, fit in fits.items()
    ]


def rate_ranges(coefficients: pd.DataFrame, model: DecayModel = DecayModel.RATIONAL) -> Dict[float, Tuple[float, float]]:
    """Smallest and largest fitted rate r per decoherence strength p"""
    rows = coefficients[(coefficients['model'] == DecayModel(model).value) & coefficients['converged'].astype(bool)]
    grouped = rows.groupby('p')['r'].agg(['min', 'max'])
    return {float(p): (float(row['min']), float(row['max'])) for p, row in grouped.iterrows()}


def run_fit(series_path: Path, out_path: Optional[Path] = None) -> pd.DataFrame:
    """
    Fit both decay models to a CSV with columns t,value

    A sweep statistics table (with lambda, zeta, p columns) is fitted per grid point;
    rows carrying an error are skipped.
    """
    table = read_table(series_path)
    missing = {'t', 'value'} - set(table.columns)
    if missing:
        raise ValueError(f"{series_path} lacks columns {sorted(missing)} (need t,value)")
    if 'error' in table:
        table = table[table['error'].isna()]

    if set(POINT_KEYS) <= set(table.columns):
        groups = table.groupby(POINT_KEYS, sort=True)
    else:
        groups = [((float('nan'),) * 3, table)]

    rows = []
    for (lam, zeta, p), group in groups:
        series = list(group.sort_values('t')[['t', 'value']].itertuples(index=False, name=None))
        rows.extend(coefficient_rows(lam, zeta, p, fit_models(series)))
    coefficients = pd.DataFrame(rows, columns=COEFFICIENT_COLUMNS)

    if out_path is not None:
        write_table(coefficients, out_path)
        write_metadata(out_path, {'source': str(series_path), 'rmse_dof': 'N-2', 'columns': COEFFICIENT_COLUMNS})
    return coefficients
