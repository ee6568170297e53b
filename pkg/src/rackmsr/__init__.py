"""Rack-aware minimum-storage regenerating codes.

Three array-code constructions (``code_c1``, ``code_oa``, ``code_c3``), a
scalar Reed-Solomon rack repair scheme (``code_rs``), closed-form bounds, and
a harness that meters repair bandwidth and access against those bounds.
"""
from .bounds import (
    BoundReport,
    access_bound,
    cutset_bound,
    homogeneous_decomposition,
    rack_cutset_bound,
    subpacketization_bound,
)
from .code_c1 import build_c1
from .code_c3 import build_c3
from .code_oa import build_c2
from .code_rs import build_repair_space, build_rs, rs_encode, rs_repair
from .families import Code, build_code
from .ffield import FieldCtx, FieldElement, make_extension_field, make_prime_field
from .harness import ExperimentConfig, Report, run_experiment

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "Code",
    "ExperimentConfig",
    "FieldCtx",
    "FieldElement",
    "Report",
    "access_bound",
    "build_c1",
    "build_c2",
    "build_c3",
    "build_code",
    "build_repair_space",
    "build_rs",
    "cutset_bound",
    "homogeneous_decomposition",
    "make_extension_field",
    "make_prime_field",
    "rack_cutset_bound",
    "rs_encode",
    "rs_repair",
    "run_experiment",
    "subpacketization_bound",
]
