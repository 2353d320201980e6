"""
Sidecar Formatter
JSON record accompanying every CSV: config hash, package versions, golden
results. Holds no timestamps so reruns stay byte-identical.
"""

import json
import platform
from typing import Any, Dict, List, Optional

import numpy as np
import scipy

from .. import __version__
from ..config.loader import ExperimentConfig


def package_versions() -> Dict[str, str]:
    return {
        "atma": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


class SidecarFormatter:
    def format(
        self,
        config: ExperimentConfig,
        columns: List[str],
        row_count: int,
        violation_count: int,
        golden: Optional[Dict[str, Any]] = None,
        extras: Optional[Dict[str, Any]] = None,
    ) -> str:
        record = {
            "experiment": config.experiment,
            "name": config.name,
            "config_file": config.source.name if config.source else None,
            "config_sha256": config.sha256,
            "seed": config.seed,
            "versions": package_versions(),
            "columns": columns,
            "rows": row_count,
            "violations": violation_count,
            "golden": golden or {},
            "extras": extras or {},
        }
        return json.dumps(record, indent=2, sort_keys=True, default=str) + "\n"
