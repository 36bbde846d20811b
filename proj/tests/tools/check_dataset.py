"""Integrity check for data/heart-disease.csv against the published
summary statistics of the public 303-row heart-disease file: exact value
counts for every coded column, 6-decimal means and sample stds,
min/quartiles/max of the continuous columns, per-class group means, and
the single known duplicated row. Run after touching the data file.

    python3 tests/tools/check_dataset.py [path-to-csv]
"""
import sys
from collections import Counter

import pandas as pd

EXPECT_VALUE_COUNTS = {
    "sex": {1: 207, 0: 96},
    "cp": {0: 143, 1: 50, 2: 87, 3: 23},
    "fbs": {0: 258, 1: 45},
    "restecg": {0: 147, 1: 152, 2: 4},
    "exang": {0: 204, 1: 99},
    "slope": {0: 21, 1: 140, 2: 142},
    "ca": {0: 175, 1: 65, 2: 38, 3: 20, 4: 5},
    "thal": {0: 2, 1: 18, 2: 166, 3: 117},
    "target": {0: 138, 1: 165},
}
EXPECT_MEANS = {
    "age": 54.366337, "sex": 0.683168, "cp": 0.966997, "trestbps": 131.623762,
    "chol": 246.264026, "fbs": 0.148515, "restecg": 0.528053, "thalach": 149.646865,
    "exang": 0.326733, "oldpeak": 1.039604, "slope": 1.399340, "ca": 0.729373,
    "thal": 2.313531, "target": 0.544554,
}
EXPECT_STDS = {
    "age": 9.082101, "sex": 0.466011, "cp": 1.032052, "trestbps": 17.538143,
    "chol": 51.830751, "fbs": 0.356198, "restecg": 0.525860, "thalach": 22.905161,
    "exang": 0.469794, "oldpeak": 1.161075, "slope": 0.616226, "ca": 1.022606,
    "thal": 0.612277, "target": 0.498835,
}
EXPECT_QUARTILES = {
    "age": (29, 47.5, 55, 61, 77),
    "trestbps": (94, 120, 130, 140, 200),
    "chol": (126, 211, 240, 274.5, 564),
    "thalach": (71, 133.5, 153, 166, 202),
    "oldpeak": (0.0, 0.0, 0.8, 1.6, 6.2),
}
EXPECT_GROUP_MEANS = {
    0: {"age": 56.601449, "chol": 251.086957, "thalach": 139.101449, "oldpeak": 1.585507},
    1: {"age": 52.496970, "chol": 242.230303, "thalach": 158.466667, "oldpeak": 0.583030},
}
DUPLICATE_ROW = [38, 1, 2, 138, 175, 0, 1, 173, 0, 0.0, 2, 4, 2, 1]


def main(path):
    df = pd.read_csv(path)
    failures = []

    def check(name, got, want):
        if got != want:
            failures.append(f"{name}: got {got}, want {want}")

    check("rows", len(df), 303)
    for col, want in EXPECT_VALUE_COUNTS.items():
        check(f"value_counts[{col}]", dict(Counter(df[col])), want)
    for col, want in EXPECT_MEANS.items():
        check(f"mean[{col}]", round(float(df[col].mean()), 6), want)
    for col, want in EXPECT_STDS.items():
        check(f"std[{col}]", round(float(df[col].std(ddof=1)), 6), want)
    for col, (mn, q1, q2, q3, mx) in EXPECT_QUARTILES.items():
        check(f"min[{col}]", float(df[col].min()), float(mn))
        check(f"q25[{col}]", float(df[col].quantile(.25)), float(q1))
        check(f"q50[{col}]", float(df[col].quantile(.50)), float(q2))
        check(f"q75[{col}]", float(df[col].quantile(.75)), float(q3))
        check(f"max[{col}]", float(df[col].max()), float(mx))
    for target, cols in EXPECT_GROUP_MEANS.items():
        sub = df[df.target == target]
        for col, want in cols.items():
            check(f"groupmean[target={target}][{col}]", round(float(sub[col].mean()), 6), want)

    dups = df[df.duplicated()]
    check("duplicate_rows", len(dups), 1)
    if len(dups) == 1:
        check("duplicate_row", [float(v) for v in dups.iloc[0]],
              [float(v) for v in DUPLICATE_ROW])

    if failures:
        print(f"{len(failures)} checks FAILED")
        for failure in failures:
            print(" ", failure)
        return 1
    print("dataset matches the published statistics")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else "data/heart-disease.csv"))
