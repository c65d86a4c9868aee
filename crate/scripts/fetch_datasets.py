#!/usr/bin/env python3
"""Materialise the six benchmark datasets as CSV files under datasets/.

Three datasets ship with scikit-learn and are generated locally; the other
three are downloaded from the UCI repository. Every CSV gets a header row,
numeric feature columns and a final string `label` column, which is the
schema the `pdt` CLI loads.

Usage:
    python3 scripts/fetch_datasets.py [--out-dir datasets] [--only NAME ...]

Integrity: datasets/MANIFEST.json pins row/feature/class counts for all six
datasets and SHA-256 hashes where known. Hashes of downloaded raw files are
verified when pinned and reported for pinning when not.
"""

import argparse
import hashlib
import io
import json
import os
import sys
import urllib.request

EXPECTED = {
    "iris": {"rows": 150, "features": 4, "classes": 3},
    "wine": {"rows": 178, "features": 13, "classes": 3},
    "breast_cancer_wisconsin": {"rows": 569, "features": 30, "classes": 2},
    "haberman": {"rows": 306, "features": 3, "classes": 2},
    "ionosphere": {"rows": 351, "features": 34, "classes": 2},
    "seeds": {"rows": 210, "features": 7, "classes": 3},
}

UCI = {
    "haberman": "https://archive.ics.uci.edu/ml/machine-learning-databases/haberman/haberman.data",
    "ionosphere": "https://archive.ics.uci.edu/ml/machine-learning-databases/ionosphere/ionosphere.data",
    "seeds": "https://archive.ics.uci.edu/ml/machine-learning-databases/00236/seeds_dataset.txt",
}


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def write_csv(path, feature_names, rows, labels):
    """rows: list of float lists; labels: list of strings."""
    buf = io.StringIO()
    buf.write(",".join(list(feature_names) + ["label"]) + "\n")
    for values, label in zip(rows, labels):
        cells = [repr(float(v)) for v in values]
        buf.write(",".join(cells + [str(label)]) + "\n")
    data = buf.getvalue().encode("utf-8")
    with open(path, "wb") as f:
        f.write(data)
    return sha256(data)


def from_sklearn(name):
    from sklearn import datasets as skd

    loader = {
        "iris": skd.load_iris,
        "wine": skd.load_wine,
        "breast_cancer_wisconsin": skd.load_breast_cancer,
    }[name]
    bundle = loader()
    feature_names = [str(n).replace(",", " ") for n in bundle.feature_names]
    labels = [str(bundle.target_names[t]) for t in bundle.target]
    rows = [[float(v) for v in row] for row in bundle.data]
    return feature_names, rows, labels


def parse_haberman(raw: bytes):
    rows, labels = [], []
    for line in raw.decode("utf-8").strip().splitlines():
        parts = line.strip().split(",")
        if len(parts) != 4:
            continue
        rows.append([float(v) for v in parts[:3]])
        labels.append(parts[3])
    return ["age", "year", "positive_nodes"], rows, labels


def parse_ionosphere(raw: bytes):
    rows, labels = [], []
    for line in raw.decode("utf-8").strip().splitlines():
        parts = line.strip().split(",")
        if len(parts) != 35:
            continue
        rows.append([float(v) for v in parts[:34]])
        labels.append(parts[34])
    return [f"f{i}" for i in range(34)], rows, labels


def parse_seeds(raw: bytes):
    rows, labels = [], []
    for line in raw.decode("utf-8").strip().splitlines():
        parts = line.split()  # the file mixes single and double tabs
        if len(parts) != 8:
            continue
        rows.append([float(v) for v in parts[:7]])
        labels.append(str(int(float(parts[7]))))
    return [
        "area",
        "perimeter",
        "compactness",
        "kernel_length",
        "kernel_width",
        "asymmetry",
        "groove_length",
    ], rows, labels


PARSERS = {
    "haberman": parse_haberman,
    "ionosphere": parse_ionosphere,
    "seeds": parse_seeds,
}


def load_manifest(path):
    if os.path.exists(path):
        with open(path) as f:
            return json.load(f)
    return {}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="datasets")
    ap.add_argument("--only", nargs="*", choices=sorted(EXPECTED), default=None)
    args = ap.parse_args()

    os.makedirs(args.out_dir, exist_ok=True)
    manifest_path = os.path.join(args.out_dir, "MANIFEST.json")
    manifest = load_manifest(manifest_path)
    wanted = args.only or sorted(EXPECTED)
    failures = []

    for name in wanted:
        out_path = os.path.join(args.out_dir, f"{name}.csv")
        entry = manifest.setdefault(name, {})
        try:
            if name in UCI:
                url = UCI[name]
                print(f"{name}: downloading {url}")
                raw = urllib.request.urlopen(url, timeout=60).read()
                raw_digest = sha256(raw)
                pinned = entry.get("raw_sha256")
                if pinned and pinned != raw_digest:
                    raise RuntimeError(
                        f"raw sha256 mismatch: pinned {pinned}, got {raw_digest}"
                    )
                if not pinned:
                    print(f"{name}: recorded raw sha256 {raw_digest}")
                entry["raw_sha256"] = raw_digest
                entry["source"] = url
                feature_names, rows, labels = PARSERS[name](raw)
            else:
                print(f"{name}: generating from scikit-learn")
                entry["source"] = f"sklearn.datasets ({name})"
                feature_names, rows, labels = from_sklearn(name)

            exp = EXPECTED[name]
            got = {
                "rows": len(rows),
                "features": len(feature_names),
                "classes": len(set(labels)),
            }
            if got != exp:
                raise RuntimeError(f"shape mismatch: expected {exp}, got {got}")

            digest = write_csv(out_path, feature_names, rows, labels)
            pinned_csv = entry.get("csv_sha256")
            if pinned_csv and pinned_csv != digest:
                raise RuntimeError(
                    f"csv sha256 mismatch: pinned {pinned_csv}, got {digest}"
                )
            entry["csv_sha256"] = digest
            entry.update(exp)
            print(f"{name}: wrote {out_path} ({got['rows']} rows, sha256 {digest[:16]}...)")
        except Exception as e:  # noqa: BLE001 - report and continue
            failures.append(name)
            print(f"{name}: FAILED ({e})", file=sys.stderr)

    with open(manifest_path, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"manifest written to {manifest_path}")

    if failures:
        print(
            "incomplete: could not fetch " + ", ".join(failures),
            file=sys.stderr,
        )
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
