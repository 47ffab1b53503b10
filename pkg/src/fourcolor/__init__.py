"""Reducibility and discharging checks for planar triangulations."""

from .cartwheel import Cartwheel, Part, extract_cartwheel, refine, trivial_part
from .configuration import Configuration, free_completion, validate_configuration
from .dispatch import run_presentation, tau_H, tau_R, tau_S, zeta_bound
from .formats import parse_configs, parse_presentation, parse_rules
from .graph import RotationGraph, parse_embedded
from .overcharge import max_edge_transfer, verify_overcharge_bound
from .reducibility import ColoringSet, is_consistent, is_d_reducible, max_consistent_subset
from .rules import DischargingRule, rule_transfer, vertex_charge

__all__ = [
    "Cartwheel", "ColoringSet", "Configuration", "DischargingRule", "Part", "RotationGraph",
    "extract_cartwheel", "free_completion", "is_consistent", "is_d_reducible",
    "max_consistent_subset", "max_edge_transfer", "parse_configs", "parse_embedded",
    "parse_presentation", "parse_rules", "refine", "rule_transfer", "run_presentation",
    "tau_H", "tau_R", "tau_S", "trivial_part", "validate_configuration",
    "verify_overcharge_bound", "vertex_charge", "zeta_bound",
]
