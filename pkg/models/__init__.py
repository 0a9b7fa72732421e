"""
ドメインモデルの定義
"""
from .schemas import (
    KernelFamily,
    KernelSpec,
    Integrator,
    TrajectorySpec,
    NoiseSpec,
    DatasetMeta,
    GridSpec,
    Box,
    OddErrorStats,
    HamiltonianStats,
    GridSearchResult,
    EvaluationReport,
    SYMPLECTIC_FAMILIES,
    CURL_FREE_FAMILIES,
)
from .domain import Dataset, Trajectory, TrainedModel

__all__ = [
    'KernelFamily',
    'KernelSpec',
    'Integrator',
    'TrajectorySpec',
    'NoiseSpec',
    'DatasetMeta',
    'GridSpec',
    'Box',
    'OddErrorStats',
    'HamiltonianStats',
    'GridSearchResult',
    'EvaluationReport',
    'SYMPLECTIC_FAMILIES',
    'CURL_FREE_FAMILIES',
    'Dataset',
    'Trajectory',
    'TrainedModel',
]
