#!/usr/bin/env python3
"""Generate the annotation fixture under data/annotations/.

Builds a 200-instance annotation set whose aggregates hit fixed targets: the
human column of the pair-type breakdown (C+E 100, C+{C,I} 89, C+C 84,
L+{U,I} 100, overall 90) and the plausibility label distributions
(actual 81/10/5/2/3, alternative 15/21/16/41/8, whole percent, halves up).
A 75-instance second round gives choice agreement with kappa 0.79.

Writes instances.jsonl (gold labels, placeholder text) and annotations.csv.
"""

import argparse
import csv
import json
from pathlib import Path

import numpy as np

# (actual, alternative, count, incorrect)
PAIR_TYPES = [
    ("L", "E", 70, 0),
    ("U", "E", 6, 0),
    ("L", "U", 40, 0),
    ("L", "I", 20, 0),
    ("U", "I", 8, 0),
    ("L", "L", 20, 7),
    ("U", "L", 4, 3),
    ("L", "G", 12, 3),
    ("U", "G", 2, 1),
    ("I", "E", 3, 1),
    ("I", "L", 3, 1),
    ("I", "I", 3, 1),
    ("E", "L", 2, 1),
    ("E", "U", 1, 0),
    ("E", "G", 1, 1),
    ("G", "E", 3, 0),
    ("G", "I", 1, 1),
    ("G", "G", 1, 0),
]
SECOND_ROUND = 75
TARGET_KAPPA = 0.79


def kappa(a, b):
    n = len(a)
    po = sum(x == y for x, y in zip(a, b)) / n
    pe = sum((a.count(l) / n) * (b.count(l) / n) for l in set(a) | set(b))
    return (po - pe) / (1 - pe)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/annotations")
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for actual, alt, count, wrong in PAIR_TYPES:
        for i in range(count):
            rows.append({"actual": actual, "alt": alt, "correct": i >= wrong})
    assert len(rows) == 200
    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]

    instances, annotations = [], []
    for idx, row in enumerate(rows):
        iid = f"ann{idx:03d}"
        label = "a" if rng.random() < 0.5 else "b"
        other = "b" if label == "a" else "a"
        row["choice"] = label if row["correct"] else other
        row["id"] = iid
        instances.append(
            {
                "instance_id": iid,
                "narrative": f"Placeholder narrative {idx}.",
                "question_a": f"Placeholder question {idx}a?",
                "question_b": f"Placeholder question {idx}b?",
                "label": label,
                "source_post_id": f"{iid}-src",
                "alternative_post_id": f"{iid}-alt",
            }
        )
        annotations.append([iid, f"r{idx % 3 + 1}", row["choice"], row["actual"], row["alt"]])

    # Second round: flip the fewest choices that bring kappa to the target.
    picked = sorted(rng.choice(len(rows), SECOND_ROUND, replace=False))
    first = [rows[i]["choice"] for i in picked]
    for flips in range(SECOND_ROUND + 1):
        second = [("b" if c == "a" else "a") if j < flips else c for j, c in enumerate(first)]
        if round(kappa(first, second), 2) == TARGET_KAPPA:
            break
    else:
        raise SystemExit("no flip count reaches the target kappa")
    for j, i in enumerate(picked):
        row = rows[i]
        annotations.append([row["id"], f"r{(i + 1) % 3 + 1}", second[j], row["actual"], row["alt"]])

    with open(out / "instances.jsonl", "w", encoding="utf-8") as f:
        for inst in instances:
            f.write(json.dumps(inst) + "\n")
    with open(out / "annotations.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["instance_id", "annotator_id", "choice", "plausibility_actual", "plausibility_alternative"])
        w.writerows(annotations)
    print(f"second round: {flips} disagreements, kappa {kappa(first, second):.4f}")


if __name__ == "__main__":
    main()
