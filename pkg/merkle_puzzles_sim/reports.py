"""
Report serialization: CSV rows, JSON documents and a text summary
"""

import csv
import io
import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from tabulate import tabulate

from .analysis import ConfidenceInterval
from .exceptions import FileOperationError, UsageError
from .harness import AttackSummary, ExperimentReport

logger = logging.getLogger(__name__)

REPORT_FORMATS = ('csv', 'json', 'text')

CSV_HEADER = ('n,a,b,trials,seed,gamma,agree_rate,agree_lo,agree_hi,abort_rate,attack,success_rate,success_lo,'
              'success_hi,calls_mean,calls_max,unique_mean,unique_max,ref_agree,ref_success')


def _cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _ci_cells(ci: Optional[ConfidenceInterval]) -> List[str]:
    return ['', ''] if ci is None else [_cell(ci.low), _cell(ci.high)]


def csv_rows(report: ExperimentReport) -> List[List[str]]:
    """One row per attack; a single row with empty attack columns if none ran"""
    head = [str(report.n), str(report.a), str(report.b), str(report.trials), str(report.master_seed),
            str(report.gamma), _cell(report.agree_rate), *_ci_cells(report.agree_ci), _cell(report.abort_rate)]
    if not report.attack_results:
        return [head + [''] * 9 + [_cell(report.ref_agree), '']]

    rows = []
    for summary in report.attack_results:
        attempted = summary.attempts > 0
        rows.append(head + [
            summary.attack,
            _cell(summary.success_rate),
            *_ci_cells(summary.success_ci),
            _cell(summary.calls_mean),
            _cell(summary.calls_max) if attempted else '',
            _cell(summary.unique_mean),
            _cell(summary.unique_max) if attempted else '',
            _cell(report.ref_agree),
            _cell(summary.ref_success),
        ])
    return rows


def _ci_from_dict(data: Optional[Dict[str, float]]) -> Optional[ConfidenceInterval]:
    return None if data is None else ConfidenceInterval(**data)


def report_to_dict(report: ExperimentReport) -> Dict[str, Any]:
    """JSON-ready dict mirroring the report; wall-clock duration is left out"""
    data = asdict(report)
    data.pop('duration_seconds')
    data['attacks'] = list(report.attacks)
    return data


def report_from_dict(data: Dict[str, Any]) -> ExperimentReport:
    fields = dict(data)
    fields['attacks'] = tuple(fields['attacks'])
    fields['agree_ci'] = _ci_from_dict(fields['agree_ci'])
    fields['abort_ci'] = _ci_from_dict(fields['abort_ci'])
    summaries = []
    for item in fields['attack_results']:
        item = dict(item)
        item['success_ci'] = _ci_from_dict(item['success_ci'])
        item['coverage_ci'] = _ci_from_dict(item['coverage_ci'])
        summaries.append(AttackSummary(**item))
    fields['attack_results'] = tuple(summaries)
    return ExperimentReport(**fields)


def parse_report(payload: Union[bytes, str]) -> ExperimentReport:
    """Inverse of emit_report(report, 'json')"""
    if isinstance(payload, bytes):
        payload = payload.decode('utf-8')
    return report_from_dict(json.loads(payload))


def _ci_text(ci: Optional[ConfidenceInterval]) -> str:
    return '' if ci is None else f"[{ci.low:.4f}, {ci.high:.4f}]"


def _rate_text(value: Optional[float]) -> str:
    return '' if value is None else f"{value:.4f}"


def render_text(report: ExperimentReport) -> str:
    level = f"{report.confidence:.0%}"
    lines = [
        f"Merkle puzzle experiment: n={report.n} a={report.a} b={report.b} trials={report.trials} "
        f"seed={report.master_seed} gamma={report.gamma}",
        f"agree_rate   {report.agree_rate:.4f}  {level} CI {_ci_text(report.agree_ci)}  exact {report.ref_agree:.4f}",
        f"abort_rate   {report.abort_rate:.4f}  {level} CI {_ci_text(report.abort_ci)}",
        f"epsilon_hat  {report.epsilon_hat:.4f}",
        f"duration     {report.duration_seconds:.2f}s",
    ]
    if report.attack_results:
        table = [[
            s.attack, s.attempts, _rate_text(s.success_rate), _ci_text(s.success_ci), _rate_text(s.ref_success),
            _rate_text(s.calls_mean), s.calls_max, _rate_text(s.unique_mean), s.unique_max,
            _rate_text(s.coverage_rate), _rate_text(s.ref_coverage),
        ] for s in report.attack_results]
        headers = ['Attack', 'Non-abort', 'Success', 'CI', 'Exact', 'Calls mean', 'Calls max',
                   'Unique mean', 'Unique max', 'Coverage', 'Exact cov.']
        lines += ['', tabulate(table, headers=headers, tablefmt='grid')]
    return '\n'.join(lines) + '\n'


def emit_reports(reports: Sequence[ExperimentReport], format: str) -> bytes:
    """
    Serialize reports

    Args:
        reports: Reports to serialize, in order
        format: 'csv' (one header), 'json' (a list) or 'text'

    Returns:
        UTF-8 encoded payload
    """
    if format not in REPORT_FORMATS:
        raise UsageError(f"Unknown report format: {format}. Choose from {', '.join(REPORT_FORMATS)}")

    if format == 'csv':
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(CSV_HEADER.split(','))
        for report in reports:
            writer.writerows(csv_rows(report))
        return buffer.getvalue().encode('utf-8')

    if format == 'json':
        return (json.dumps([report_to_dict(r) for r in reports], indent=2, sort_keys=True) + '\n').encode('utf-8')

    return '\n'.join(render_text(r) for r in reports).encode('utf-8')


def emit_report(report: ExperimentReport, format: str) -> bytes:
    """Serialize a single report; JSON is one object rather than a list"""
    if format == 'json':
        return (json.dumps(report_to_dict(report), indent=2, sort_keys=True) + '\n').encode('utf-8')
    return emit_reports([report], format)


def write_report(payload: bytes, path: str) -> str:
    """Write a serialized report, creating parent directories"""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(payload)
        logger.info(f"Report written to {target}")
        return str(target)
    except (FileNotFoundError, PermissionError) as e:
        logger.error(f"File system error writing report to {target}: {e}")
        raise FileOperationError(f"Cannot write report file {target}: {e}") from e
    except OSError as e:
        logger.error(f"I/O error writing report to {target}: {e}")
        raise FileOperationError(f"I/O error writing report {target}: {e}") from e
