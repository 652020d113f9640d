"""Abnormal component analysis: depth-based directions that expose anomalies."""

from .baselines import ComponentSet, auc, best_aligned, oracle_direction, pca_components
from .datagen import (SETTINGS, LabeledDataset, SimulationSpec, contaminate, hcn_cov,
                      huber_counts, ordered_importance_dataset, simulate, toeplitz_a09)
from .depth import (DepthNotion, DepthResult, dataset_depths, grid_depth_oracle,
                    min_depth_over_dataset, proj_depth)
from .errors import InvalidInputError
from .explain import LoadingReport, cell_scores, component_loadings, variable_importance
from .model import AcaModel, fit, transform
from .optimize import OptimizerConfig, nelder_mead_sphere, refined_random_search
from .robust_stats import depth1_apd, depth1_pd, mad, mad_plus, median
from .subspace import lift, orthonormal_complement, reorthonormalize

__all__ = [
    "AcaModel", "ComponentSet", "DepthNotion", "DepthResult", "InvalidInputError",
    "LabeledDataset", "LoadingReport", "OptimizerConfig", "SETTINGS", "SimulationSpec",
    "auc", "best_aligned", "cell_scores", "component_loadings", "contaminate",
    "dataset_depths", "depth1_apd", "depth1_pd", "fit", "grid_depth_oracle", "hcn_cov",
    "huber_counts", "lift", "mad", "mad_plus", "median", "min_depth_over_dataset",
    "nelder_mead_sphere", "oracle_direction", "ordered_importance_dataset",
    "orthonormal_complement", "pca_components", "proj_depth", "refined_random_search",
    "reorthonormalize", "simulate", "toeplitz_a09", "transform", "variable_importance",
]
