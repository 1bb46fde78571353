"""On-disk cache for reference solutions, keyed by a content hash.

Layout: ``<root>/<digest>/snapshot-<i>.dat`` plus ``meta.txt``.  Entries are
written into a temporary directory and moved into place atomically, so
concurrent writers of the same key cannot corrupt each other.
"""

from __future__ import annotations

import hashlib
import os
import shutil
import tempfile

from .snapshots import load_complex_field, save_field

__all__ = ["reference_key", "key_digest", "SnapshotCache"]


def reference_key(
    *,
    equation: str,
    nl_tag: str,
    nl_params,
    potential: str,
    potential_params,
    dim: int,
    bounds,
    points: int,
    eps: float,
    dt: float,
    times,
    initial: str,
    initial_params,
) -> str:
    """Canonical key string for one reference run."""
    parts = [
        f"equation={equation}",
        f"nl={nl_tag}",
        f"nlparams={','.join(repr(float(p)) for p in nl_params)}",
        f"potential={potential}",
        f"potparams={','.join(repr(float(p)) for p in potential_params)}",
        f"dim={dim}",
        f"bounds={','.join(repr(float(b)) for b in bounds)}",
        f"points={points}",
        f"eps={float(eps)!r}",
        f"dt={float(dt)!r}",
        f"times={','.join(repr(float(t)) for t in times)}",
        f"initial={initial}",
        f"initparams={','.join(str(p) for p in initial_params)}",
    ]
    return ";".join(parts)


def key_digest(key: str) -> str:
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:20]


class SnapshotCache:
    """Content-addressed store of wavefunction snapshot sequences."""

    def __init__(self, root):
        self.root = str(root)

    def _entry_dir(self, key: str) -> str:
        return os.path.join(self.root, key_digest(key))

    def lookup(self, key: str):
        """Return the cached [(t, ComplexField), ...] or None on a miss."""
        entry = self._entry_dir(key)
        meta_path = os.path.join(entry, "meta.txt")
        if not os.path.isfile(meta_path):
            return None
        with open(meta_path, "r", encoding="utf-8") as fh:
            lines = dict(
                line.strip().split(" ", 1) for line in fh if " " in line.strip()
            )
        if lines.get("key") != key:
            return None  # digest collision or stale entry; recompute
        count = int(lines.get("snapshots", "0"))
        out = []
        for i in range(count):
            field, meta = load_complex_field(os.path.join(entry, f"snapshot-{i}.dat"))
            out.append((meta["time"], field))
        return out

    def store(self, key: str, eps: float, snapshots, extra_meta=()):
        """Write [(t, ComplexField), ...] under the key, atomically."""
        entry = self._entry_dir(key)
        if os.path.isdir(entry):
            return entry
        os.makedirs(self.root, exist_ok=True)
        tmp = tempfile.mkdtemp(prefix=".tmp-", dir=self.root)
        try:
            for i, (t, field) in enumerate(snapshots):
                save_field(os.path.join(tmp, f"snapshot-{i}.dat"), field, epsilon=eps, time=t)
            with open(os.path.join(tmp, "meta.txt"), "w", encoding="utf-8") as fh:
                fh.write(f"key {key}\n")
                fh.write(f"snapshots {len(snapshots)}\n")
                for k, v in extra_meta:
                    fh.write(f"{k} {v}\n")
            try:
                os.replace(tmp, entry)
            except OSError:
                # entry appeared concurrently; keep the existing one
                shutil.rmtree(tmp, ignore_errors=True)
        except BaseException:
            shutil.rmtree(tmp, ignore_errors=True)
            raise
        return entry
