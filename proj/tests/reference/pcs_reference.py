#!/usr/bin/env python3
"""Standalone PCS calculator for a labels JSONL file and a directory of
detection JSON files. Written without reference to the C++ sources; uses
only numpy. Prints the PCS (percent) on stdout."""

import argparse
import glob
import json
import math
import os
import sys

import numpy as np

ORDER = [20, 1, 18, 4, 13, 6, 10, 15, 2, 17, 3, 19, 7, 16, 8, 11, 14, 9, 12, 5]
RADII_MM = dict(db=6.35, b=15.9, ti=99.4, to=107.4, di=162.0, do=170.0)
CAL_ANGLES = [-9.0, 81.0, 171.0, 261.0]
IOU_THRESHOLD = 0.3
CONF_THRESHOLD = 0.25
MAX_DARTS = 3


def token_value(tok):
    if tok == "0":
        return 0
    if tok == "B":
        return 25
    if tok == "DB":
        return 50
    mult = {"S": 1, "D": 2, "T": 3}[tok[0]]
    return mult * int(tok[1:])


def iou(a, b):
    ax0, ax1 = a["cx"] - a["w"] / 2, a["cx"] + a["w"] / 2
    ay0, ay1 = a["cy"] - a["h"] / 2, a["cy"] + a["h"] / 2
    bx0, bx1 = b["cx"] - b["w"] / 2, b["cx"] + b["w"] / 2
    by0, by1 = b["cy"] - b["h"] / 2, b["cy"] + b["h"] / 2
    iw = max(0.0, min(ax1, bx1) - max(ax0, bx0))
    ih = max(0.0, min(ay1, by1) - max(ay0, by0))
    inter = iw * ih
    union = a["w"] * a["h"] + b["w"] * b["h"] - inter
    return inter / union if union > 0 else 0.0


def suppress(boxes):
    ranked = sorted(
        (b for b in enumerate(boxes) if b[1]["conf"] >= CONF_THRESHOLD),
        key=lambda ib: (-ib[1]["conf"], ib[0]),
    )
    kept = []
    for _, b in ranked:
        if all(k["class"] != b["class"] or iou(k, b) <= IOU_THRESHOLD for k in kept):
            kept.append(b)
    return kept


def homography(src, dst):
    rows, rhs = [], []
    for (x, y), (u, v) in zip(src, dst):
        rows.append([x, y, 1, 0, 0, 0, -u * x, -u * y])
        rhs.append(u)
        rows.append([0, 0, 0, x, y, 1, -v * x, -v * y])
        rhs.append(v)
    h = np.linalg.solve(np.array(rows, float), np.array(rhs, float))
    return np.append(h, 1.0).reshape(3, 3)


def project(h, p):
    q = h @ np.array([p[0], p[1], 1.0])
    return q[:2] / q[2]


def classify(d, radius):
    r = math.hypot(d[0], d[1]) / radius
    k = RADII_MM["do"]
    if r < RADII_MM["db"] / k:
        return 50
    if r < RADII_MM["b"] / k:
        return 25
    if r > 1.0:
        return 0
    theta = math.degrees(math.atan2(d[0], -d[1]))
    sector = ORDER[int(math.floor(((theta + 9.0) % 360.0) / 18.0)) % 20]
    if RADII_MM["ti"] / k <= r < RADII_MM["to"] / k:
        return 3 * sector
    if r >= RADII_MM["di"] / k:
        return 2 * sector
    return sector


def predicted_total(det):
    kept = suppress(det["boxes"])
    cal = [None] * 4
    darts = []
    for b in kept:
        if b["class"] < 4:
            if cal[b["class"]] is None:
                cal[b["class"]] = (b["cx"], b["cy"])
        elif len(darts) < MAX_DARTS:
            darts.append((b["cx"], b["cy"]))
    missing = [i for i in range(4) if cal[i] is None]
    if len(missing) > 1:
        return 0
    if missing:
        i = missing[0]
        p, n, o = cal[(i - 1) % 4], cal[(i + 1) % 4], cal[(i + 2) % 4]
        cal[i] = (p[0] + n[0] - o[0], p[1] + n[1] - o[1])
    targets = [(math.sin(math.radians(a)), -math.cos(math.radians(a))) for a in CAL_ANGLES]
    try:
        h = homography(cal, targets)
    except np.linalg.LinAlgError:
        return 0
    mapped = [project(h, c) for c in cal]
    center = np.mean(mapped, axis=0)
    radius = float(np.mean([np.linalg.norm(m - center) for m in mapped]))
    total = 0
    for d in darts:
        q = h @ np.array([d[0], d[1], 1.0])
        if abs(q[2]) <= 1e-12:
            continue
        total += classify(q[:2] / q[2] - center, radius)
    return total


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--labels", required=True)
    ap.add_argument("--detections", required=True)
    args = ap.parse_args()

    by_image = {}
    for path in sorted(glob.glob(os.path.join(args.detections, "*.json"))):
        with open(path) as f:
            det = json.load(f)
        by_image[det["image"]] = det

    n = correct = 0
    with open(args.labels) as f:
        for line in f:
            if not line.strip():
                continue
            rec = json.loads(line)
            label = sum(token_value(t) for t in rec["scores"])
            det = by_image.get(rec["image"])
            if det is None:
                print("missing detections for " + rec["image"], file=sys.stderr)
                return 1
            n += 1
            correct += int(predicted_total(det) == label)
    if n == 0:
        print("no samples", file=sys.stderr)
        return 1
    print(f"{100.0 * correct / n:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
