"""Suite orchestration, reporting and the command line."""

from .reports import VerificationReport, emit_report, load_reports
from .suites import SUITES, SuiteSpec, all_passed, list_suites, run_suite

__all__ = ["SUITES", "SuiteSpec", "VerificationReport", "all_passed", "emit_report",
           "list_suites", "load_reports", "run_suite"]
