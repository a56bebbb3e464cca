import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.config import Config, Output
from src.verifiers.results import CheckResult

PROJECT_ROOT = Path(__file__).absolute().parents[2]
import sys; sys.path.append(str(PROJECT_ROOT))  # noqa


class ReportWriter:
    """Writes field data as CSV and verification reports as JSON."""

    def __init__(self, *args, **kwargs):
        self.output_dir = Path(kwargs.get('output_dir') or Config.OUTPUT_DIR)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def _path(self, filename) -> Path:
        path = Path(filename)
        return path if path.is_absolute() else self.output_dir / path

    def write_csv(self, rows: Sequence[Sequence[float]], filename,
                  columns: Sequence[str] = Output.CSV_COLUMNS) -> Path:
        """Comma-separated values with a header row and '\\n' line endings."""
        path = self._path(filename)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = np.asarray(rows, dtype=float).reshape(-1, len(columns))
        np.savetxt(path, data, fmt=Output.FLOAT_FORMAT, delimiter=',',
                   header=','.join(columns), comments='', newline='\n')
        print(f'CSV saved to {path}')
        return path

    def write_json(self, data: Dict, filename) -> Optional[Path]:
        path = self._path(filename)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(data, f, indent=4, ensure_ascii=False)
                f.write('\n')
            print(f'Report saved to {path}')
            return path
        except OSError as e:
            print(f'Error saving report: {e}')
            return None


def build_report(scenario_name: str, scenario_hash: str, suite: str,
                 checks: List[CheckResult]) -> Dict:
    return {
        'tool_version': Config.VERSION,
        'scenario': scenario_name,
        'scenario_hash': scenario_hash,
        'suite': suite,
        'checks': [c.to_dict() for c in checks],
        'passed': all(c.passed for c in checks),
    }


def convergence_rows(study: Dict) -> List[List[float]]:
    """Rows (cells, dx, L1 r1, L1 r2, L1 r3, total) of a convergence study."""
    return [[row['cells'], row['dx'], *row['l1'], row['total']]
            for row in study['table']]


CONVERGENCE_COLUMNS = ('cells', 'dx', 'l1_r1', 'l1_r2', 'l1_r3', 'l1_total')
