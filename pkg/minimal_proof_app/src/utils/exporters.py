import logging
from io import BytesIO
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from src.core.cost import CostModel
from src.core.proof import ProofTree, serialize_proof
from src.core.verification import CampaignResult

logger = logging.getLogger(__name__)


def export_campaign_to_excel(result: CampaignResult) -> BytesIO:
    """
    Exports a fuzz campaign into a single multi-sheet Excel file.

    Parameters:
    - result: The campaign to export.

    Returns:
    - BytesIO: A byte stream of the generated Excel file.
    """
    output = BytesIO()
    with pd.ExcelWriter(output, engine='openpyxl') as writer:
        # Sheet 1: One row per (case, cost model)
        result.table.to_excel(writer, sheet_name='Runs', index=False)

        # Sheet 2: Per-model summary
        if len(result.table):
            summary_df = result.table.groupby('model', sort=False).agg(
                runs=('case', 'size'),
                proved=('verdict', lambda v: int((v == 'proved').sum())),
                failures=('failure', lambda f: int((f != '').sum())),
                mean_expansions=('expansions', 'mean'),
                max_expansions=('expansions', 'max'),
            ).reset_index()
            summary_df.to_excel(writer, sheet_name='Summary', index=False)

        # Sheet 3: Aggregator axiom violations
        violations_df = pd.DataFrame(
            [(model, message) for model, messages in result.axiom_violations.items() for message in messages],
            columns=['Model', 'Violation'],
        )
        violations_df.to_excel(writer, sheet_name='Aggregator_Axioms', index=False)

    output.seek(0)
    return output


def write_campaign_report(result: CampaignResult, path: Union[str, Path]) -> Path:
    """Writes the campaign table as CSV, or as a workbook when the path ends in .xlsx."""
    path = Path(path)
    if path.suffix.lower() == '.xlsx':
        path.write_bytes(export_campaign_to_excel(result).getvalue())
    else:
        result.table.to_csv(path, index=False)
    logger.info("Wrote campaign report with %d rows to %s", len(result.table), path)
    return path


def write_proof(tree: ProofTree, path: Union[str, Path], fmt: str, model: Optional[CostModel] = None) -> Path:
    path = Path(path)
    path.write_text(serialize_proof(tree, fmt, model), encoding='utf-8')
    logger.info("Wrote %s %s with %d nodes to %s", fmt, tree.polarity.value, tree.node_count(), path)
    return path
