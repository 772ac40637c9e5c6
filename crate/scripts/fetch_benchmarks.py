#!/usr/bin/env python3
"""Fetch heart, sonar and ionosphere and write them as sparse text.

The raw tables come from the `keel-ds` wheel on PyPI. Each feature is
min-max scaled to [-1, 1] (constant features are dropped), the same
preprocessing the LIBSVM `*_scale` distributions use.

    python3 scripts/fetch_benchmarks.py [OUT_DIR]     # default: data/
"""

import io
import pathlib
import subprocess
import sys
import tempfile
import zipfile

DATASETS = {
    # name: label treated as +1
    "heart": "2",
    "sonar": "R",
    "ionosphere": "g",
}


def fetch_wheel(tmp):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "keel-ds==0.2.5", "--no-deps", "-q", "-d", tmp],
        check=True,
    )
    return next(pathlib.Path(tmp).glob("keel_ds-*.whl"))


def parse_keel(text):
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        fields = [f.strip() for f in line.split(",")]
        rows.append(([float(v) for v in fields[:-1]], fields[-1]))
    return rows


def scale(rows):
    m = len(rows[0][0])
    lo = [min(r[0][j] for r in rows) for j in range(m)]
    hi = [max(r[0][j] for r in rows) for j in range(m)]
    keep = [j for j in range(m) if hi[j] > lo[j]]
    out = []
    for feats, label in rows:
        out.append(([-1.0 + 2.0 * (feats[j] - lo[j]) / (hi[j] - lo[j]) for j in keep], label))
    return out


def write_sparse(rows, positive, path):
    buf = io.StringIO()
    for feats, label in rows:
        parts = ["+1" if label == positive else "-1"]
        parts += [f"{j + 1}:{v:.6g}" for j, v in enumerate(feats) if v != 0.0]
        buf.write(" ".join(parts) + "\n")
    path.write_text(buf.getvalue())


def main():
    out_dir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out_dir.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        wheel = zipfile.ZipFile(fetch_wheel(tmp))
        for name, positive in DATASETS.items():
            raw = wheel.read(f"keel_ds/data/balanced/raw/{name}.dat").decode()
            rows = scale(parse_keel(raw))
            target = out_dir / name
            write_sparse(rows, positive, target)
            print(f"{target}: {len(rows)} instances, {len(rows[0][0])} features")


if __name__ == "__main__":
    main()
