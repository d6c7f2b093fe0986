"""Compile binary vector sets into Boolean threshold network decoders and verify them."""

from .approx import (
    PatternStats,
    build_approx_decoder,
    build_approx_decoder_b3,
    chi,
    count_patterns,
    predict_output,
    weight_fn,
)
from .bounds import BoundsReport, bounds_report, counting_inequality, lower_bound, width_formulas
from .codes import CodecBundle, VectorSet, assign_codes, build_encoder
from .core import (
    BitVec,
    LayeredNet,
    NetMetrics,
    ThresholdUnit,
    eval_net,
    eval_unit,
    make_equality_recognizer,
    make_vector_recognizer,
    metrics,
)
from .perfect import build_gamma_layer, build_perfect_decoder, optimal_B
from .verify import (
    ErrorReport,
    InstanceSpec,
    gen_random_set,
    measure_error,
    oracle_equivalence,
    verify_perfect,
)

__version__ = "0.1.0"
