# Graph neural features, their sampling distribution and GRNF maps
from src.features.distribution import (
    Activation,
    DistributionConfig,
    FeatureParams,
    log_density,
    sample_parameter,
)
from src.features.feature import psi
from src.features.grnf import (
    GrnfMap,
    build_grnf,
    build_weighted_grnf,
    embed,
    embed_centered,
    embed_many,
    weighted_embed,
)
from src.features.serialization import dump_map, load_map

__all__ = [
    "Activation",
    "DistributionConfig",
    "FeatureParams",
    "log_density",
    "sample_parameter",
    "psi",
    "GrnfMap",
    "build_grnf",
    "build_weighted_grnf",
    "embed",
    "embed_centered",
    "embed_many",
    "weighted_embed",
    "dump_map",
    "load_map",
]
