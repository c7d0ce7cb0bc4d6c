"""CSV and manifest writers.  Formatting is fixed so reruns are byte-identical."""
from __future__ import annotations

import csv
import hashlib
import json
import time
from pathlib import Path

from .. import __version__

SWEEP_COLUMNS = ["E", "mean", "stderr", "N", "samples", "lambda", "seed"]
RECUR_COLUMNS = ["point", "x0", "y0", "n", "distance", "defect"]
GREEN_COLUMNS = ["t", "site", "epsilon", "sites", "center_width", "boundary",
                 "re_g", "im_g", "abs_re_g"]
VALIDATE_COLUMNS = ["check", "observed", "tolerance", "passed"]


def fmt(x) -> str:
    """17 significant digits, round-trip safe."""
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return str(x)
    return "%.17g" % x


def write_csv(path, columns, rows, comments=()):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            for line in comments:
                fh.write(f"# {line}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def read_csv(path):
    """Return ``(comments, header, rows)``; rows are lists of strings."""
    comments, body = [], []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line[1:].strip())
            else:
                body.append(line)
    reader = list(csv.reader(body))
    return comments, reader[0], reader[1:]


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(command: str, echo: list[str], outputs, started: float):
    """Sidecar ``<first output>.manifest.json`` with checksums and timing."""
    outputs = [Path(p) for p in outputs]
    manifest = {
        "command": command,
        "version": __version__,
        "config": echo,
        "wall_clock_s": round(time.perf_counter() - started, 3),
        "outputs": {p.name: sha256(p) for p in outputs},
    }
    target = outputs[0].with_name(outputs[0].name + ".manifest.json")
    target.write_text(json.dumps(manifest, indent=2) + "\n")
    return target
