"""File writers for reports, curves, regions and problem dumps."""

from .report_writer import PERF_CURVE_COLUMNS
from .report_writer import REGION_COLUMNS
from .report_writer import SPT_COLUMNS
from .report_writer import TEP_COLUMNS
from .report_writer import ReportError
from .report_writer import dump_problem
from .report_writer import read_report
from .report_writer import write_perf_curve
from .report_writer import write_region
from .report_writer import write_report
