"""Cycle-accurate model and verification harness for a pipelined 128-point NTT
accelerator built from shift-register memories."""

from .errors import SceNttError
from .modmath import ModulusContext, Order, Polynomial, make_context
from .pipesim import PipelineConfig, derive_output_permutation, latency_report, run_pipeline
from .reference import dft_bruteforce, intt, negacyclic_mul, ntt_ct

__all__ = [
    "ModulusContext", "Order", "PipelineConfig", "Polynomial", "SceNttError",
    "derive_output_permutation", "dft_bruteforce", "intt", "latency_report",
    "make_context", "negacyclic_mul", "ntt_ct", "run_pipeline",
]
__version__ = "0.1.0"
