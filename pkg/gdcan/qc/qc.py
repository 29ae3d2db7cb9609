import numpy as np
import pandas as pd

"""
Library for compression quality figures.
"""

def compression_gain(raw_bytes, compressed_bytes):
    """
    raw / compressed, nan when either side is empty.
    """
    if not raw_bytes or not compressed_bytes:
        return np.nan
    return raw_bytes / compressed_bytes

def format_gain(gain):
    if gain is None or np.isnan(gain):
        return 'n/a'
    return '%.3f' % gain

def summarize_gains(df,
                    group_columns=('method',),
                    gain_column='gain'):
    """
    Average, min and max gain per group, ignoring undefined gains.
    """
    df = df.dropna(subset=[gain_column])
    if df.empty:
        return pd.DataFrame(columns=list(group_columns) + ['avg', 'min', 'max', 'files'])
    summary = df.groupby(list(group_columns))[gain_column].agg(['mean', 'min', 'max', 'count'])
    summary = summary.rename(columns={'mean': 'avg', 'count': 'files'})
    return summary.reset_index()

def report_lines(report):
    """
    key=value lines of a compressed size report.
    """
    lines = []
    for key, value in report.items():
        if key == 'gain':
            value = format_gain(value)
        lines.append('%s=%s' % (key, value))
    return lines
