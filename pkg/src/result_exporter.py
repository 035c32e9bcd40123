import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel

try:
    from .graph_core import INF
except ImportError:
    from graph_core import INF

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Render one report value; infinite distances print as 'inf'."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int) and value == INF:
        return "inf"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def format_report(record: BaseModel) -> List[str]:
    """key=value lines in field declaration order; unset (None) fields are left out."""
    return [f"{key}={format_value(value)}" for key, value in record.model_dump().items()
            if value is not None]


def records_to_frame(records: Sequence[BaseModel]) -> pd.DataFrame:
    rows = []
    for record in records:
        row = record.model_dump()
        rows.append({k: ("inf" if isinstance(v, int) and not isinstance(v, bool) and v == INF else v)
                     for k, v in row.items()})
    return pd.DataFrame(rows)


def create_metadata_sheet(metadata: Dict[str, Any]) -> pd.DataFrame:
    data = [{'Parameter': 'GeneratedAt', 'Value': datetime.now().strftime("%Y-%m-%d %H:%M:%S")}]
    data.extend({'Parameter': key, 'Value': format_value(value)} for key, value in metadata.items())
    return pd.DataFrame(data)


def export_records(records: Sequence[BaseModel], output_path: Path, sheet_name: str = 'Records',
                   metadata: Optional[Dict[str, Any]] = None) -> None:
    """Write records to .xlsx (with a Metadata sheet) or .csv, chosen by suffix."""
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    frame = records_to_frame(records)

    suffix = output_path.suffix.lower()
    if suffix == '.csv':
        frame.to_csv(output_path, index=False)
    elif suffix == '.xlsx':
        with pd.ExcelWriter(output_path, engine='openpyxl') as writer:
            frame.to_excel(writer, sheet_name=sheet_name, index=False)
            create_metadata_sheet(metadata or {}).to_excel(writer, sheet_name='Metadata', index=False)
    else:
        raise ValueError(f"unsupported export format {output_path.suffix!r} (use .xlsx or .csv)")

    logger.info(f"Exported {len(records)} records to: {output_path}")
