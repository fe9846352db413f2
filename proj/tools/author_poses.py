#!/usr/bin/env python3
"""Regenerates data/poses.json from per-digit flexion values.

Each preset is written as driven-joint angles (thumb MP, index/middle/ring/pinky MCP)
plus the thumb CMC angle. The CLI solves the matching servo command with only the
driven joints weighted, and the model-achieved posture becomes the stored preset, so
every generated preset lies exactly on the compensated coupling manifold of the
geometry it was authored against.

usage: author_poses.py path/to/thand [--config data/default_hand.json] [--out data/poses.json]
"""

import argparse
import json
import subprocess
import sys

DRIVEN_ROWS = [1, 4, 7, 10, 13]  # thumb MP, index/middle/ring/pinky MCP (0-based)
CMC_ROW = 14

# name, category, (thumb, index, middle, ring, pinky driven angles), cmc, description
AUTHORED = [
    ("opposition-index", "opposition", (0.55, 0.75, 0.05, 0.05, 0.05), 1.20, "thumb tip meets index tip"),
    ("opposition-middle", "opposition", (0.60, 0.10, 0.80, 0.10, 0.10), 1.35, "thumb tip meets middle tip"),
    ("opposition-ring", "opposition", (0.70, 0.10, 0.15, 0.85, 0.15), 1.50, "thumb tip meets ring tip"),
    ("point", "gesture", (0.90, 0.00, 1.20, 1.20, 1.20), 0.90, "index extended, others curled"),
    ("rock-horns", "gesture", (0.80, 0.00, 1.20, 1.20, 0.00), 1.00, "index and pinky extended"),
    ("call-me", "gesture", (0.00, 1.20, 1.20, 1.20, 0.00), 0.00, "thumb and pinky extended"),
    ("thumbs-up", "gesture", (0.00, 1.22, 1.22, 1.22, 1.20), 0.20, "fingers curled, thumb up"),
    ("digit-0", "digit", (0.70, 0.90, 0.90, 0.90, 0.90), 1.30, "fingers and thumb form a ring"),
    ("digit-1", "digit", (1.00, 0.00, 1.20, 1.20, 1.20), 1.00, "one finger raised"),
    ("digit-2", "digit", (1.00, 0.00, 0.00, 1.20, 1.20), 1.00, "two fingers raised"),
    ("digit-3", "digit", (1.00, 0.00, 0.00, 0.00, 1.20), 1.00, "three fingers raised"),
    ("digit-4", "digit", (1.00, 0.00, 0.00, 0.00, 0.00), 1.40, "four fingers raised, thumb folded"),
    ("digit-8", "digit", (0.00, 0.00, 1.20, 1.20, 1.20), 0.00, "thumb and index extended"),
    ("large-cylinder", "power-grasp", (0.60, 0.70, 0.70, 0.70, 0.70), 1.10, "wide enveloping wrap"),
    ("medium-wrap", "power-grasp", (0.80, 0.95, 0.95, 0.95, 0.95), 1.20, "bottle-sized wrap"),
    ("power-sphere", "power-grasp", (0.60, 0.80, 0.75, 0.70, 0.65), 1.40, "ball enclosure"),
    ("stick-handle", "power-grasp", (0.90, 1.15, 1.15, 1.15, 1.15), 0.90, "thin handle wrap"),
    ("hook", "power-grasp", (0.00, 1.00, 1.00, 1.00, 1.00), 0.00, "bag-handle hook, thumb idle"),
    ("tip-pinch", "precision-grasp", (0.50, 0.70, 0.20, 0.20, 0.20), 1.25, "thumb-index fingertip pinch"),
    ("tripod", "precision-grasp", (0.55, 0.70, 0.75, 0.20, 0.20), 1.35, "three-finger pinch"),
    ("lateral-key-pinch", "precision-grasp", (0.35, 1.10, 1.15, 1.15, 1.10), 0.35, "thumb pad on index side"),
    ("wire-pinch", "precision-grasp", (0.45, 0.65, 0.10, 0.10, 0.10), 1.20, "light pinch of a thin wire"),
    ("precision-disk", "precision-grasp", (0.40, 0.50, 0.50, 0.50, 0.50), 1.45, "fingertips around a lid"),
    ("scissors", "tool-grasp", (0.50, 0.60, 0.90, 1.20, 1.20), 1.00, "thumb and middle in scissor rings"),
    ("screwdriver", "tool-grasp", (0.85, 1.05, 1.10, 1.10, 1.10), 1.00, "handle wrap with thumb along shaft"),
    ("tape-roll", "tool-grasp", (0.45, 0.60, 0.60, 0.60, 0.60), 1.50, "fingers inside a ring-like roll"),
    ("tweezers", "tool-grasp", (0.50, 0.72, 0.30, 1.00, 1.00), 1.20, "tweezers held between thumb and index"),
    ("spray-press", "tool-grasp", (0.70, 0.35, 1.10, 1.10, 1.10), 1.10, "index free to press a trigger"),
    ("pen", "tool-grasp", (0.60, 0.75, 0.85, 1.00, 1.00), 1.25, "writing grip"),
]

TABLE_MAX = [0.99, 1.25, 1.31, 1.61, 1.27, 1.28, 1.58, 1.24, 1.29, 1.59, 1.25, 1.25, 1.55, 1.23, 1.57]


def fixed(name, category, q, description):
    return {"name": name, "category": category, "q_d_rad": q, "description": description}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("thand")
    ap.add_argument("--config")
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    weights = [0.0] * 15
    for r in DRIVEN_ROWS + [CMC_ROW]:
        weights[r] = 1.0

    presets = [
        fixed("open", "gesture", [0.0] * 15, "full extension"),
        fixed("fist", "gesture", list(TABLE_MAX), "every joint at its workspace maximum"),
        fixed("cmc-abduct", "gesture", [0.0] * 14 + [1.0], "thumb CMC swing only"),
    ]
    for name, category, driven, cmc, description in AUTHORED:
        q = [0.0] * 15
        for row, value in zip(DRIVEN_ROWS, driven):
            q[row] = value
        q[CMC_ROW] = cmc
        cmd = [args.thand, "ik", "--format", "json", "--q", ",".join(map(repr, q)),
               "--weights", ",".join(map(repr, weights))]
        if args.config:
            cmd += ["--config", args.config]
        plan = json.loads(subprocess.run(cmd, check=True, capture_output=True, text=True).stdout)
        if plan["clipped"]:
            sys.exit(f"{name}: authored values leave the workspace ({plan['clipped']})")
        presets.append(fixed(name, category, plan["achieved"], description))

    text = json.dumps(presets, indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as f:
            f.write(text)


if __name__ == "__main__":
    main()
