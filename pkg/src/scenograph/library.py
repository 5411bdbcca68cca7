"""Module catalog: one definition file per revision, plus an index.

Layout: <catalog>/index (JSON) and <catalog>/modules/<name>/<revision>.
Revisions are content-addressed (sha256 prefix of the canonical document),
so re-saving identical content is a no-op and changed content gets a new
revision while the old one stays readable.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import List, Optional

from .errors import Conflict, NotFound
from .model import ModuleDef
from .serialize import _module_record, _parse_module

INDEX_NAME = "index"
MODULES_DIR = "modules"


def module_document(module: ModuleDef) -> dict:
    return _module_record(module)


def module_from_document(doc: dict) -> ModuleDef:
    return _parse_module(doc, "module")


def module_text(module: ModuleDef) -> str:
    return json.dumps(module_document(module), indent=2) + "\n"


def module_revision(module: ModuleDef) -> str:
    digest = hashlib.sha256(module_text(module).encode("utf-8")).hexdigest()
    return digest[:12]


def _read_index(catalog: Path) -> List[dict]:
    index_path = catalog / INDEX_NAME
    if not index_path.exists():
        return []
    with open(index_path, "r", encoding="utf-8") as handle:
        return json.load(handle)["modules"]


def _write_index(catalog: Path, entries: List[dict]) -> None:
    with open(catalog / INDEX_NAME, "w", encoding="utf-8", newline="\n") as handle:
        json.dump({"modules": entries}, handle, indent=2)
        handle.write("\n")


def library_save(module: ModuleDef, catalog) -> str:
    """Store a definition; returns its revision id."""
    catalog = Path(catalog)
    revision = module_revision(module)
    target_dir = catalog / MODULES_DIR / module.name
    target_dir.mkdir(parents=True, exist_ok=True)
    target = target_dir / revision
    text = module_text(module)
    if target.exists():
        if target.read_text(encoding="utf-8") != text:
            raise Conflict(f"revision {revision} of {module.name!r} exists with different content")
        return revision

    target.write_text(text, encoding="utf-8", newline="\n")
    entries = [e for e in _read_index(catalog)
               if not (e["name"] == module.name and e["revision"] == revision)]
    entries.append({
        "name": module.name,
        "revision": revision,
        "roles": list(module.roles),
    })
    _write_index(catalog, entries)
    return revision


def library_load(catalog, name: str, revision: Optional[str] = None) -> ModuleDef:
    """Load a definition by name; newest revision when none is given."""
    catalog = Path(catalog)
    if revision is None:
        matches = [e for e in _read_index(catalog) if e["name"] == name]
        if not matches:
            raise NotFound(f"no module {name!r} in catalog {catalog}")
        revision = matches[-1]["revision"]
    target = catalog / MODULES_DIR / name / revision
    if not target.exists():
        raise NotFound(f"module {name!r} revision {revision} not found in {catalog}")
    return module_from_document(json.loads(target.read_text(encoding="utf-8")))


def library_list(catalog) -> List[dict]:
    return list(_read_index(Path(catalog)))
