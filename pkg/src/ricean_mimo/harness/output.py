"""CSV serialization of experiment results."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

from .. import __version__
from .config import ExperimentConfig

HEADERS = {
    "terms": ("k", "l", "term1", "term2", "term3", "term4", "total", "mc_mean", "mc_se", "z"),
    "scaling": ("M", "c1", "c2", "c3"),
    "cdf": ("value", "prob"),
    "saturation": ("M", "mean_se", "se_stderr"),
    "gram": ("M", "max_entry_msd", "s1_var", "s2_var", "s3_var"),
}


def _fmt(v) -> str:
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def render_csv(cfg: ExperimentConfig, rows: Iterable[Sequence], notes: Sequence[str] = ()) -> str:
    """
    CSV text with ``#`` comment lines (tool version, config hash, seed and any
    ``notes``) followed by the fixed header of ``cfg.experiment``.
    """
    buf = io.StringIO()
    buf.write(f"# tool=ricean_mimo {__version__}\n")
    buf.write(f"# config_hash={cfg.config_hash()}\n")
    buf.write(f"# seed={cfg.seed}\n")
    for note in notes:
        buf.write(f"# {note}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADERS[cfg.experiment])
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def read_csv(path_or_text: str, from_text: bool = False) -> tuple[list[str], list[dict[str, str]]]:
    """Return ``(comment_lines, rows)`` from a file written by :func:`render_csv`."""
    text = path_or_text if from_text else open(path_or_text).read()
    lines = text.splitlines()
    comments = [ln[2:] for ln in lines if ln.startswith("# ")]
    body = [ln for ln in lines if not ln.startswith("#")]
    return comments, list(csv.DictReader(body))
