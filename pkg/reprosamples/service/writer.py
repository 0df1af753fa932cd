# reprosamples/service/writer.py
import json
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

from loguru import logger
import numpy as np
import pandas as pd


def _plain(value: Any) -> Any:
    """Convert numpy scalars/arrays and non-finite floats into JSON-safe values"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


class ResultWriter:
    """Service for emitting JSON and CSV artifacts with stable byte layout"""

    @staticmethod
    def dumps(payload: Any) -> str:
        return json.dumps(_plain(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @staticmethod
    def write_json(payload: Any, path: Optional[Union[str, Path]]) -> str:
        """
        Serialize ``payload`` with sorted keys

        Args:
            payload: nested dicts/lists, numpy values allowed
            path: target file, or None to only return the text

        Returns:
            the JSON text
        """
        text = ResultWriter.dumps(payload)
        if path is not None:
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
            logger.info(f"Wrote {path}")
        return text

    @staticmethod
    def manifest_path(path: Union[str, Path]) -> Path:
        """Sidecar file holding the manifest of a CSV output"""
        path = Path(path)
        return path.with_name(f"{path.stem}.manifest.json")

    @staticmethod
    def write_frame(frame: pd.DataFrame, path: Union[str, Path], manifest: Optional[Dict[str, Any]] = None) -> None:
        """
        Write a table as CSV with ten significant digits

        Args:
            frame: table to write, without its index
            path: target CSV file
            manifest: provenance written to the ``<stem>.manifest.json`` sidecar when given
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format="%.10g", lineterminator="\n")
        logger.info(f"Wrote {path}")
        if manifest is not None:
            ResultWriter.write_json(manifest, ResultWriter.manifest_path(path))
