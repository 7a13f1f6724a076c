"""Scatter plots of exported surface meshes and sweep polylines.

Usage: python experiments/plot_datasets.py FILE.csv [FILE.csv ...]
"""
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

from reegeom.cli.io import read_csv


def plot_surface(ax, rows):
    for sheet, color in (('mu', 'tab:blue'), ('nu', 'tab:orange')):
        pts = [(float(r['q1']), float(r['q2']), float(r['q3']))
               for r in rows if r['sheet'] == sheet]
        if pts:
            ax.scatter(*zip(*pts), s=1, color=color, label=sheet)


def plot_sweep(ax, rows):
    lines = defaultdict(list)
    for r in rows:
        lines[r['family_id']].append(
            (float(r['t1']), float(r['t2']), float(r['t3'])))
    for points in lines.values():
        ax.plot(*zip(*points), linewidth=1)
        ax.scatter(*points[0], s=8, color='k')


def main(paths):
    for path in paths:
        rows = read_csv(path)
        fig = plt.figure(figsize=(6, 6))
        ax = fig.add_subplot(projection='3d')
        if rows and 'sheet' in rows[0]:
            plot_surface(ax, rows)
        else:
            plot_sweep(ax, rows)
        ax.set_xlabel('t1')
        ax.set_ylabel('t2')
        ax.set_zlabel('t3')
        ax.set_title(path)
    plt.show()


if __name__ == '__main__':
    main(sys.argv[1:])
