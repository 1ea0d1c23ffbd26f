"""Worker-count policy and named random substreams."""
from __future__ import annotations

import os
import zlib

import numpy as np

ENV_THREADS = "MYTHLAB_THREADS"


def worker_count(requested=None):
    """Workers to use: explicit request, else ``MYTHLAB_THREADS``, else 1."""
    if requested is None:
        env = os.environ.get(ENV_THREADS, "").strip()
        requested = int(env) if env else 1
    return max(1, int(requested))


def substream_seed(root_seed, name):
    """64-bit seed for the stream called ``name``; independent of call order."""
    ss = np.random.SeedSequence([int(root_seed), zlib.crc32(name.encode("utf-8"))])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
