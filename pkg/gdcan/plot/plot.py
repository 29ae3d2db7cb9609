import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np
import pathlib

import gdcan.io

"""
Library for benchmark plots.
"""

def summary_label(row):
    method = row['method']
    if method.startswith('external:'):
        return method
    if row.get('transform'):
        method = '%s %s' % (method, row['transform'])
    if row['method'] == 'ram_only':
        return '%s\nram=%d' % (method, row['ram_budget'])
    if row['method'] == 'flash_only':
        return '%s\nflash=%d' % (method, row['flash_budget'])
    return '%s\nram=%d\nflash=%d' % (method, row['ram_budget'], row['flash_budget'])

def plot_bench_gains(summary,
                     figsize=(12, 5),
                     title='Compression gain',
                     output_file_name=None):
    """
    Average gain per configuration with min / max error bars.
    """
    labels = [summary_label(row) for _, row in summary.iterrows()]
    avg = summary['avg'].to_numpy(dtype=float)
    yerr = np.vstack([avg - summary['min'].to_numpy(dtype=float),
                      summary['max'].to_numpy(dtype=float) - avg])
    x = np.arange(len(labels))

    fig, ax = plt.subplots(figsize=figsize)
    ax.bar(x, avg, color='lightsteelblue')
    ax.errorbar(x, avg, yerr=yerr, fmt='none', ecolor='black', capsize=4)
    ax.set_xticks(x)
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel('gain (raw / compressed)')
    ax.set_title(title)
    plt.tight_layout()

    if isinstance(output_file_name, str):
        file_path, file_name, file_extension = gdcan.io.split_file(output_file_name)
        if file_path:
            pathlib.Path(file_path).mkdir(parents=True, exist_ok=True)
        fig.savefig(output_file_name)
    plt.close(fig)
    return output_file_name

def plot_repetitions(stats,
                     figsize=(8, 4),
                     title='Average repetitions per training file',
                     output_file_name=None):
    """
    Average repetitions of preset entries against their rank.
    """
    fig, ax = plt.subplots(figsize=figsize)
    ax.plot(stats['rank'].to_numpy(), stats['avg_repetitions'].to_numpy(dtype=float), color='steelblue')
    ax.set_xlabel('rank (implicit ID)')
    ax.set_ylabel('repetitions')
    ax.set_yscale('log')
    ax.set_title(title)
    plt.tight_layout()

    if isinstance(output_file_name, str):
        file_path, file_name, file_extension = gdcan.io.split_file(output_file_name)
        if file_path:
            pathlib.Path(file_path).mkdir(parents=True, exist_ok=True)
        fig.savefig(output_file_name)
    plt.close(fig)
    return output_file_name
