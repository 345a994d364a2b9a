"""Turn an image directory into a manifest of (image_id, path, label)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import IngestionError

IMAGE_SUFFIXES = {".ppm", ".png", ".jpg", ".jpeg"}
LABELINGS = ("subdirs", "wang_numeric", "none")

# Wang/SIMPLIcity test set: images 0-99 are class 0, 100-199 class 1, ...
WANG_CLASSES = (
    "African People and villages",
    "Beaches",
    "Buildings",
    "Buses",
    "Dinosaurs",
    "Elephants",
    "Flowers",
    "Horses",
    "Mountains and glaciers",
    "Food",
)

_WANG_NAME = re.compile(r"^(\d+)$")


@dataclass(frozen=True)
class ManifestEntry:
    image_id: str
    path: Path
    label: Optional[str] = None


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple

    def __post_init__(self):
        seen = set()
        dupes = []
        for e in self.entries:
            if e.image_id in seen:
                dupes.append(e.image_id)
            seen.add(e.image_id)
        if dupes:
            raise IngestionError(f"duplicate image ids: {', '.join(sorted(set(dupes)))}")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def labeled(self) -> bool:
        return bool(self.entries) and all(e.label is not None for e in self.entries)


def natural_key(s: str):
    """Sort key that orders embedded integers numerically ("2" < "10")."""
    return [(0, int(t), "") if t.isdigit() else (1, 0, t) for t in re.split(r"(\d+)", s) if t]


def wang_class(n: int) -> str:
    if not 0 <= n <= 999:
        raise IngestionError(f"Wang image number {n} is outside 0..999")
    return WANG_CLASSES[n // 100]


def _images_in(directory: Path):
    return [p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES]


def ingest(root, labeling: str = "subdirs") -> DatasetManifest:
    """Scan ``root`` and build a manifest sorted by image id.

    ``subdirs``: every image in an immediate subdirectory, labeled with that
    directory's name; ids are ``<dir>/<file>``.
    ``wang_numeric``: images ``<n>.<ext>`` directly under ``root`` with
    ``0 <= n <= 999``, labeled ``WANG_CLASSES[n // 100]``; ids are ``<n>``.
    ``none``: images directly under ``root``, unlabeled; ids are file names.
    """
    root = Path(root)
    if labeling not in LABELINGS:
        raise IngestionError(f"unknown labeling {labeling!r}; expected one of {LABELINGS}")
    if not root.is_dir():
        raise IngestionError(f"{root}: not a readable directory")

    entries = []
    if labeling == "subdirs":
        for sub in sorted(p for p in root.iterdir() if p.is_dir()):
            for path in _images_in(sub):
                entries.append(ManifestEntry(f"{sub.name}/{path.name}", path, sub.name))
    elif labeling == "wang_numeric":
        offenders = []
        for path in _images_in(root):
            m = _WANG_NAME.match(path.stem)
            if not m or int(m.group(1)) > 999:
                offenders.append(path.name)
                continue
            entries.append(ManifestEntry(path.stem, path, wang_class(int(m.group(1)))))
        if offenders:
            offenders.sort(key=natural_key)
            raise IngestionError(
                f"{root}: file names not of the form <0-999>.<ext>: {', '.join(offenders)}"
            )
    else:
        entries = [ManifestEntry(p.name, p, None) for p in _images_in(root)]

    if not entries:
        raise IngestionError(f"{root}: no images found (labeling={labeling})")
    entries.sort(key=lambda e: natural_key(e.image_id))
    return DatasetManifest(tuple(entries))
