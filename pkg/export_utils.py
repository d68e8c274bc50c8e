# export_utils.py
"""
Artifact writers: deterministic CSV tables, JSON run manifests and plain-text
reports, plus output-directory helpers
"""

import hashlib
import os
import time
from datetime import datetime
from pathlib import Path
from typing import List, Dict, Any, Optional

import orjson
import pandas as pd
from tabulate import tabulate

from config import Config

MANIFEST_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY


class ExportManager:
    """Write run artifacts in stable formats"""

    @staticmethod
    def frame_to_csv_bytes(frame: pd.DataFrame) -> bytes:
        """17 significant digits, no index, LF line endings"""
        text = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
        return text.encode("utf-8")

    @staticmethod
    def write_csv(frame: pd.DataFrame, path) -> str:
        """Write the frame and return the sha256 of the bytes written"""
        data = ExportManager.frame_to_csv_bytes(frame)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        return hashlib.sha256(data).hexdigest()

    @staticmethod
    def canonical_json(obj: Any) -> bytes:
        return orjson.dumps(obj, option=orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY)

    @staticmethod
    def content_hash(obj: Any) -> str:
        """git-style blob hash: sha1 over b"blob <len>\\0" + canonical JSON"""
        body = ExportManager.canonical_json(obj)
        return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()

    @staticmethod
    def write_manifest(path, config: Dict[str, Any], artifacts: Dict[str, str],
                       timings: Optional[Dict[str, float]] = None,
                       error_summary: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """JSON manifest with the config, its content hash, artifact hashes and timings"""
        manifest = {
            "app": Config.APP_NAME,
            "version": Config.APP_VERSION,
            "config": config,
            "config_hash": ExportManager.content_hash(config),
            "artifacts": artifacts,
            "timings": timings or {},
            "errors": error_summary or {},
        }
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(orjson.dumps(manifest, option=MANIFEST_OPTIONS) + b"\n")
        return manifest

    @staticmethod
    def export_to_text(frame: pd.DataFrame, path, title: str = "") -> str:
        """Plain-text table report"""
        content = []
        if title:
            content.append(title)
            content.append("=" * len(title))
        content.append(f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        content.append("")
        content.append(tabulate(frame, headers="keys", tablefmt="github", showindex=False, floatfmt=".10g"))
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(content) + "\n", encoding="utf-8")
        return str(path)


class FileManager:
    """Output directory helpers"""

    @staticmethod
    def ensure_output_dir(path: Optional[str] = None) -> Path:
        directory = Path(path or Config.OUTPUT_DIR)
        directory.mkdir(parents=True, exist_ok=True)
        return directory

    @staticmethod
    def artifact_path(directory, subcommand: str, suffix: str) -> Path:
        """<dir>/<subcommand>_<suffix>; suffix carries the extension"""
        return Path(directory) / f"{subcommand}_{suffix}"

    @staticmethod
    def get_file_stats(directory: str) -> Dict[str, Any]:
        """Get statistics about files in directory"""
        if not os.path.exists(directory):
            return {"exists": False}

        files = list(Path(directory).glob("*"))
        total_size = sum(f.stat().st_size for f in files if f.is_file())

        return {
            "exists": True,
            "file_count": len([f for f in files if f.is_file()]),
            "total_size_bytes": total_size,
        }


class PerformanceMonitor:
    """Wall-clock timings per stage of a run"""

    def __init__(self):
        self.stage_durations: List[Dict[str, Any]] = []

    def track(self, stage_name: str, start: float, end: Optional[float] = None):
        end = time.perf_counter() if end is None else end
        self.stage_durations.append({"stage": stage_name, "duration_seconds": end - start})

    def timings(self) -> Dict[str, float]:
        out: Dict[str, float] = {}
        for entry in self.stage_durations:
            out[entry["stage"]] = out.get(entry["stage"], 0.0) + entry["duration_seconds"]
        return out

    def get_performance_metrics(self) -> Dict[str, Any]:
        if not self.stage_durations:
            return {}
        total = sum(d["duration_seconds"] for d in self.stage_durations)
        return {
            "total_stages": len(self.stage_durations),
            "total_duration_seconds": total,
            "slowest_stage": max(self.stage_durations, key=lambda x: x["duration_seconds"])["stage"],
        }


__all__ = [
    'ExportManager',
    'FileManager',
    'PerformanceMonitor'
]
