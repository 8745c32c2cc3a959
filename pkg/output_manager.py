# output_manager.py
import platform
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Optional, Sequence

import yaml
from rich.console import Console
from rich.table import Table

from core import __version__

PACKAGES = ("numpy", "scipy", "matplotlib", "rich", "PyYAML", "Jinja2", "python-dotenv")


def package_versions() -> dict[str, str]:
    versions = {"surrogate": __version__, "python": platform.python_version()}
    for name in PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "not installed"
    return versions


class OutputManager:
    """Owns the output directory: artifact paths, the artifact listing and the run manifest."""

    def __init__(self, root: Path, console: Optional[Console] = None):
        self.root = Path(root)
        self.console = console or Console()
        self.artifacts: list[Path] = []

    def path(self, name: str) -> Path:
        """Path for a new artifact; parent directories are created."""
        target = self.root / name
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def add(self, *paths: Path) -> None:
        self.artifacts.extend(Path(p) for p in paths)

    def write_manifest(
        self,
        command: str,
        exit_status: int,
        wall_seconds: float,
        config_hash: Optional[str] = None,
        seed: Optional[int] = None,
        message: Optional[str] = None,
        extra: Optional[dict] = None,
    ) -> Path:
        manifest = {
            "command": command,
            "exit_status": exit_status,
            "config_hash": config_hash,
            "seed": seed,
            "finished": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "wall_seconds": round(wall_seconds, 6),
            "versions": package_versions(),
            "artifacts": sorted(self._relative(p) for p in self.artifacts),
        }
        if message:
            manifest["message"] = message
        if extra:
            manifest.update(extra)
        target = self.path("manifest.yaml")
        target.write_text(yaml.safe_dump(manifest, sort_keys=False))
        return target

    def _relative(self, p: Path) -> str:
        try:
            return str(p.resolve().relative_to(self.root.resolve()))
        except ValueError:
            return str(p)

    def artifact_table(self, artifacts: Sequence[Path]) -> Table:
        table = Table.grid(padding=(0, 1))
        table.add_column("Artifact", style="artifact")
        for p in artifacts:
            table.add_row(self._relative(p))
        return table
