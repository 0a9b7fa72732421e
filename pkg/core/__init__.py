"""
コア機能モジュール
"""
from .config import settings
from .errors import (
    HamKernelError,
    InvalidParameterError,
    DimensionMismatchError,
    SolveError,
    IntegrationError,
    FoldError,
    ContractViolationError,
    ArtifactError,
    StageError,
)
from .symplectic import symplectic_matrix, validate_phase_dim

__all__ = [
    'settings',
    'HamKernelError',
    'InvalidParameterError',
    'DimensionMismatchError',
    'SolveError',
    'IntegrationError',
    'FoldError',
    'ContractViolationError',
    'ArtifactError',
    'StageError',
    'symplectic_matrix',
    'validate_phase_dim',
]
