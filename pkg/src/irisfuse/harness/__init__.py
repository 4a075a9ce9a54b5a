"""Dataset handling, exhaustive tests, reports and the CLI."""

from .codefile import CodeRecord, load_codes, save_codes
from .dataset import Dataset, Sample, SampleMeta, SynthSpec, load_manifest, synth_dataset
from .experiments import ExhaustiveResult, run_exhaustive_dual, run_exhaustive_single
from .report import ReportColumn, emit_report, roc_csv

__all__ = [
    "CodeRecord",
    "Dataset",
    "ExhaustiveResult",
    "ReportColumn",
    "Sample",
    "SampleMeta",
    "SynthSpec",
    "emit_report",
    "load_codes",
    "load_manifest",
    "roc_csv",
    "run_exhaustive_dual",
    "run_exhaustive_single",
    "save_codes",
    "synth_dataset",
]
