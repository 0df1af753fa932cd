# reprosamples/command/manifest.py
from dataclasses import dataclass, field
from datetime import datetime, timezone
import hashlib
from pathlib import Path
import time
from typing import Any, Dict, Iterable, List, Union

from reprosamples import __version__


def file_digest(path: Union[str, Path]) -> str:
    sha = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            sha.update(block)
    return sha.hexdigest()


@dataclass
class RunManifest:
    """Provenance attached to every output file

    Only the ``timing`` block changes between identical runs.
    """

    command: str
    config: Dict[str, Any]
    seed: int
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    version: str = __version__
    started: float = field(default_factory=time.perf_counter)
    created: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    wall_time: float = 0.0

    def add_inputs(self, paths: Iterable[Union[str, Path]]) -> None:
        for path in paths:
            self.inputs[Path(path).name] = file_digest(path)

    def attach(self, path: Union[str, Path]) -> Dict[str, Any]:
        """Record a side output file and return the manifest to store next to it"""
        name = Path(path).name
        if name not in self.outputs:
            self.outputs.append(name)
        return self.finish().to_dict()

    def finish(self) -> "RunManifest":
        self.wall_time = time.perf_counter() - self.started
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": self.version,
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": sorted(self.outputs),
            "timing": {"created": self.created, "wall_time": round(self.wall_time, 3)},
        }
