"""
s2shock: utils/parse_utils.py

Implements functions filling result objects from persisted dicts.

License: MIT
"""

from ..exceptions import make_exception

__all__ = ['parse_run_record', 'parse_summary', 'parse_sweep_row', 'parse_sweep_rows', 'exception_from_row']

_SWEEP_FLOATS = ('gamma', 'tau0', 'xi0', 't_star', 't_star_error', 'rate_exponent', 'drift_max', 'min_sigma',
                 'holder_seminorm_max', 'bootstrap_min_margin', 'oracle_error')


def parse_run_record(result, lines):
    """Fill a RunRecord from the objects of a run.jsonl file; the summary line closes it."""
    for dct in lines:
        if dct.get('kind') == 'summary':
            parse_summary(result, dct)
        else:
            result.append(dct)


def parse_summary(result, dct):
    result.status = dct.get('status')
    result.stop_reason = dct.get('stop_reason')
    result.t_star = dct.get('t_star')
    result.counters.update(dct.get('counters') or {})
    result.checks.update(dct.get('checks') or {})
    if dct.get('config'):
        result.config = dct['config']


def _number(value, convert):
    if value is None or value == '':
        return None
    return convert(value)


def parse_sweep_row(row):
    """Typed sweep row from a csv.DictReader row."""
    out = dict(row)
    for key in _SWEEP_FLOATS:
        if key in out:
            out[key] = _number(out[key], float)
    if 'n_cells' in out:
        out['n_cells'] = _number(out['n_cells'], int)
    for key in ('flat_mode', 'passed'):
        if key in out and out[key] not in (None, ''):
            out[key] = out[key] in (True, 'True', 'true', '1')
    for key in ('error_code', 'error_message', 'status', 'stop_reason'):
        if out.get(key) == '':
            out[key] = None
    return out


def exception_from_row(row):
    """Rebuild the exception recorded in a sweep row, None for successful rows."""
    if not row.get('error_code'):
        return None
    return make_exception(row['error_code'], row.get('error_message'))


def parse_sweep_rows(result, rows):
    """Fill a SweepResult from csv.DictReader rows."""
    for row in rows:
        result.add_row(parse_sweep_row(row))
