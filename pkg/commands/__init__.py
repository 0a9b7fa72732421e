"""
CLI サブコマンド
"""
from . import generate, tune, train, rollout, evaluate, field, repro

__all__ = ['generate', 'tune', 'train', 'rollout', 'evaluate', 'field', 'repro']
