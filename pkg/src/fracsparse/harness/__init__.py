"""Experiment plumbing: configuration, capture files, Monte Carlo runs and reports."""
from .config import ExperimentConfig, load_config, parse_config
from .iqcsv import export_samples, ingest_capture
from .montecarlo import MonteCarloReport, TrialRecord, run_monte_carlo, run_trial
from .report import write_report

__all__ = [
    "ExperimentConfig",
    "MonteCarloReport",
    "TrialRecord",
    "export_samples",
    "ingest_capture",
    "load_config",
    "parse_config",
    "run_monte_carlo",
    "run_trial",
    "write_report",
]
