#!/usr/bin/env python3
"""Run every example experiment config in sequence.

Heavy: the full set takes on the order of an hour.  Pass config names
(without .json) to run a subset, e.g.:

    python scripts/run_all_experiments.py quadrature_table rule_dump
"""

import pathlib
import sys

from slenderflow.cli import main

CONFIG_DIR = pathlib.Path(__file__).parent / "configs"

COMMANDS = {
    "torus_drag": "torus-drag",
    "quadrature_table": "quadrature-table",
    "kr_circle": "kr-compare",
    "kr_trefoil": "kr-compare",
    "near_intersection_family": "near-intersection",
    "near_intersection_fixed": "near-intersection",
    "condition_table": "condition-table",
    "rule_dump": "rule-dump",
}

if __name__ == "__main__":
    names = sys.argv[1:] or list(COMMANDS)
    status = 0
    for name in names:
        cfg = CONFIG_DIR / f"{name}.json"
        print(f"== {name} ({cfg}) ==", flush=True)
        status |= main([COMMANDS[name], "--config", str(cfg)])
    sys.exit(status)
