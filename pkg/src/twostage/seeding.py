"""Deterministic derivation of per-task training seeds.

Every training run gets its own seed derived from the master seed, the
series id, the pipeline stage, the future-context length, and the model
kind.  The rule is pure arithmetic, so results do not depend on scheduling
or worker count, and sweep rows differ only in what they should differ in.
"""

from __future__ import annotations

import hashlib

import numpy as np

STAGE_ONE = 1
STAGE_TWO = 2


def _text_entropy(text: str) -> int:
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "little")


def seed_for(master_seed: int, series_id: str, stage: int, future: int, kind: str) -> int:
    """Child seed for one (series, stage, future length, model kind) task."""
    pool = np.random.SeedSequence(
        [
            int(master_seed),
            _text_entropy(series_id),
            int(stage),
            int(future),
            _text_entropy(kind),
        ]
    )
    return int(pool.generate_state(1, dtype=np.uint64)[0])
