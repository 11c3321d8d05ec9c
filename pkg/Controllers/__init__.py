from .DatasetReader import load_manifest, load_dataset, export_dataset, write_manifest
from .WorkerPool import WorkerPool
from .KernelTests import median_heuristic_bandwidth, rbf_gram, hsic_statistic, chsic_statistic, permutation_pvalue, chsic_test
from .Cmiknn import local_permutation, cmi_knn_estimate, cmiknn_test
from .Rcot import random_fourier_features, residualize, rcot_statistic, hbe_pvalue, rcot_test
from .Committee import run_cell, run_audit, aggregate_usage, aggregate_properties, significance_table_from_grid
from .TableWriter import TableFormat, export_table, parse_table
from .FaceSymmetry import eye_level_deviation, midline_deviation, mirror_dissimilarity
from .TrendStats import subpopulation_accuracy, mean_accuracy, sliding_gaussian_trend, binary_group_summary
from .Synth import generate_scm_dataset, generate_pipeline_fixture, write_fixture
from .Calibration import calibration_run
from .cli import Cli, load_config
