import logging

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt
import numpy as np

log = logging.getLogger(__name__)

# fixed ids and no date, so the same data always renders the same bytes
matplotlib.rcParams['svg.hashsalt'] = 'property-audit'


def _save(fig, path):
    fig.savefig(path, format='svg', metadata={'Date': None})
    plt.close(fig)
    log.info('wrote %s', path)
    return path


def render_trend(curve, path, title=''):
    """ window means with a one-std band against the window centres """

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.fill_between(curve.window_centers, curve.means - curve.stds, curve.means + curve.stds, alpha=0.3)
    ax.plot(curve.window_centers, curve.means)
    ax.set_xlabel('property value')
    ax.set_ylabel('logit')
    ax.set_title(title)
    return _save(fig, path)


def render_groups(summaries, path, title=''):
    """ mirrored density outlines per manifestation with quartile ticks """

    fig, ax = plt.subplots(figsize=(4, 4))
    for i, summary in enumerate(summaries):
        width = summary.densities / max(summary.densities.max(), np.finfo(float).tiny) * 0.4
        ax.fill_betweenx(summary.positions, i - width, i + width, alpha=0.5)
        ax.hlines([summary.q1, summary.median, summary.q3], i - 0.1, i + 0.1, colors='k')

    ax.set_xticks(range(len(summaries)))
    ax.set_xticklabels([f'{s.label} (n={s.count})' for s in summaries])
    ax.set_ylabel('logit')
    ax.set_title(title)
    return _save(fig, path)


def render_significance(table, path):
    """ the check/cross grid as a heat map, skipped cells left blank """

    grid = np.full((len(table.classes), len(table.properties)), np.nan)
    for i, name in enumerate(table.classes):
        for j, abbreviation in enumerate(table.properties):
            cell = table.cell(abbreviation, name)
            if not cell.skipped:
                grid[i, j] = float(cell.significant)

    fig, ax = plt.subplots(figsize=(1 + 0.5 * len(table.properties), 1 + 0.4 * len(table.classes)))
    ax.imshow(grid, cmap='Greens', vmin=0, vmax=1)
    ax.set_xticks(range(len(table.properties)))
    ax.set_xticklabels(table.properties, rotation=90)
    ax.set_yticks(range(len(table.classes)))
    ax.set_yticklabels(table.classes)
    ax.set_title(table.run_label)
    fig.tight_layout()
    return _save(fig, path)
