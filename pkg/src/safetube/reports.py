"""Plain-text report formatting and atomic file writing.

All artifact text is produced here so output bytes are deterministic:
fixed column orders, fixed float formats, no timestamps.  Writes go
through a temp-then-rename so readers never observe partial files.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from .community import CommunityComposition, Partition
from .detect import EcdfSummary, UploaderVerdict
from .learn import GridRow, VIEW_LABELS
from .netgraph import BEHAVIOR_RELATIONS, BehaviorStats


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_eval_grid(rows: Sequence[GridRow]) -> str:
    lines = ["Classifier Name\tFeature List\tPrecision\tRecall\tAccuracy"
             "\ttp\tfp\tfn\ttn"]
    for row in rows:
        r = row.report
        lines.append(
            f"{row.classifier}\t{VIEW_LABELS[row.view]}"
            f"\t{100 * r.precision:.2f}\t{100 * r.recall:.2f}"
            f"\t{100 * r.accuracy:.2f}\t{r.tp}\t{r.fp}\t{r.fn}\t{r.tn}")
    return "\n".join(lines) + "\n"


def format_verdicts(verdicts: Sequence[UploaderVerdict]) -> str:
    lines = ["user_id\tn_scored\tn_unsafe\tratio\tgrade"]
    for v in verdicts:
        lines.append(f"{v.user_id}\t{v.n_scored}\t{v.n_unsafe}"
                     f"\t{v.ratio:.6f}\t{v.grade}")
    return "\n".join(lines) + "\n"


def format_ecdf(summary: EcdfSummary) -> str:
    lines = ["x\tF"]
    for x, f_x in summary.table():
        lines.append(f"{x:.12g}\t{f_x:.6f}")
    return "\n".join(lines) + "\n"


def format_partition(partition: Partition) -> str:
    lines = [f"# modularity\t{partition.modularity:.6f}", "node_id\tcommunity_id"]
    for node_id in sorted(partition.assignment):
        lines.append(f"{node_id}\t{partition.assignment[node_id]}")
    return "\n".join(lines) + "\n"


def format_composition(rows: Iterable[CommunityComposition]) -> str:
    lines = ["community_id\tn_safe\tn_unsafe\tsize\tmixed"]
    for row in rows:
        lines.append(f"{row.community_id}\t{row.n_safe}\t{row.n_unsafe}"
                     f"\t{row.size}\t{int(row.mixed)}")
    return "\n".join(lines) + "\n"


def format_behavior_stats(stats: BehaviorStats) -> str:
    lines = ["relation\texternal_refs\tself_refs"]
    for relation in BEHAVIOR_RELATIONS:
        lines.append(f"{relation}\t{stats.external[relation]}"
                     f"\t{stats.self_refs[relation]}")
    return "\n".join(lines) + "\n"


def format_flagged_commenters(flags: set[str]) -> str:
    lines = sorted(flags)
    return "\n".join(lines) + ("\n" if lines else "")
