"""On-disk workspace: per-site artifacts plus a manifest of what produced them."""

from __future__ import annotations

import contextlib
import fcntl
import hashlib
import json
import os
import re
from pathlib import Path
from typing import Iterable, Mapping

from .. import __version__

MANIFEST = "manifest.json"
LOCK = ".lock"
_SITE_NAME = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.-]*$")


class MissingStageError(Exception):
    def __init__(self, scope: str, stage: str, command: str):
        super().__init__(f"{scope}: stage '{stage}' has not been run; run `decaycascade {command}` first")
        self.stage = stage
        self.command = command


class WorkspaceBusy(Exception):
    pass


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def stage_key(stage: str, config: Mapping, inputs: Mapping) -> str:
    blob = json.dumps({"stage": stage, "config": config, "inputs": inputs}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def check_site_name(site: str) -> str:
    if not _SITE_NAME.match(site):
        raise ValueError(f"invalid site name {site!r}: use letters, digits, '.', '_' or '-'")
    return site


class Workspace:
    def __init__(self, root: Path):
        self.root = Path(root)

    @property
    def manifest_path(self) -> Path:
        return self.root / MANIFEST

    def site_dir(self, site: str) -> Path:
        return self.root / "sites" / site

    def load(self) -> dict:
        if not self.manifest_path.exists():
            return {"tool": "decaycascade", "version": __version__, "sites": {}, "analyses": {}}
        return json.loads(self.manifest_path.read_text())

    def _save(self, manifest: dict) -> None:
        manifest["version"] = __version__
        tmp = self.manifest_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        os.replace(tmp, self.manifest_path)

    @contextlib.contextmanager
    def lock(self):
        """Advisory single-writer lock; fails fast if another process holds it."""
        self.root.mkdir(parents=True, exist_ok=True)
        with open(self.root / LOCK, "w") as fh:
            try:
                fcntl.flock(fh, fcntl.LOCK_EX | fcntl.LOCK_NB)
            except BlockingIOError:
                raise WorkspaceBusy(f"workspace {self.root} is locked by another process") from None
            try:
                yield
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def _scope(self, manifest: dict, site: str | None) -> dict:
        if site is None:
            return manifest.setdefault("analyses", {})
        return manifest.setdefault("sites", {}).setdefault(site, {}).setdefault("stages", {})

    def entry(self, site: str | None, stage: str) -> dict | None:
        return self._scope(self.load(), site).get(stage)

    def sites(self) -> dict:
        return self.load().get("sites", {})

    def up_to_date(self, site: str | None, stage: str, key: str) -> bool:
        e = self.entry(site, stage)
        if not e or e.get("key") != key:
            return False
        for rel, digest in e["outputs"].items():
            p = self.root / rel
            if not p.exists() or sha256_file(p) != digest:
                return False
        return True

    def require(self, site: str | None, stage: str, command: str) -> dict:
        e = self.entry(site, stage)
        if not e or any(not (self.root / rel).exists() for rel in e["outputs"]):
            raise MissingStageError(site or "workspace", stage, command)
        return e

    def record(
        self,
        site: str | None,
        stage: str,
        key: str,
        config: Mapping,
        inputs: Mapping,
        outputs: Iterable[Path],
        **extra,
    ) -> None:
        manifest = self.load()
        scope = self._scope(manifest, site)
        scope[stage] = {
            "key": key,
            "config": dict(config),
            "inputs": dict(inputs),
            "outputs": {str(p.relative_to(self.root)): sha256_file(p) for p in sorted(outputs)},
            **extra,
        }
        if site is not None and "group" in extra:
            manifest["sites"][site]["group"] = extra["group"]
        self._save(manifest)

    def output_digests(self, site: str | None, stage: str) -> dict:
        e = self.entry(site, stage)
        return dict(e["outputs"]) if e else {}
