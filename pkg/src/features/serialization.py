"""
Versioned JSON documents for GRNF maps

Floats are written with Python's shortest round-trip repr, so loading a
dumped map reproduces every coefficient bit for bit.
"""

import json
import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from src.features.distribution import DistributionConfig, FeatureParams, theta_sizes
from src.features.grnf import GrnfMap
from src.layers.affine import EquivariantLayerParams, InvariantLayerParams
from src.utils.errors import DatasetFormatError

logger = logging.getLogger(__name__)

MAP_FORMAT_VERSION = 1


class FeatureDocument(BaseModel):
    k: int = Field(..., ge=1)
    theta_F: List[float] = Field(..., description="Equivariant coefficients, linear part then bias")
    theta_H: List[float] = Field(..., description="Invariant coefficients, linear part then bias")


class GrnfMapDocument(BaseModel):
    version: int = MAP_FORMAT_VERSION
    M: int = Field(..., ge=1)
    seed: int
    config: DistributionConfig
    proposal: Optional[DistributionConfig] = None
    params: List[FeatureDocument]
    weights: List[float]


def map_to_document(grnf: GrnfMap) -> GrnfMapDocument:
    params = [
        FeatureDocument(
            k=w.k,
            theta_F=[float(x) for x in np.concatenate([w.theta_F.theta_lin, w.theta_F.theta_bias])],
            theta_H=[float(x) for x in w.theta_H.theta] + [float(w.theta_H.bias)],
        )
        for w in grnf.params
    ]
    return GrnfMapDocument(
        M=grnf.M,
        seed=grnf.seed,
        config=grnf.config,
        proposal=grnf.proposal,
        params=params,
        weights=[float(x) for x in grnf.weights],
    )


def _feature_from_document(doc: FeatureDocument, channels: int) -> FeatureParams:
    lin, bias, hlin, _ = theta_sizes(doc.k, channels)
    if len(doc.theta_F) != lin + bias or len(doc.theta_H) != hlin + 1:
        raise DatasetFormatError(f"Feature of order {doc.k} has malformed coefficient lists")
    theta_F = EquivariantLayerParams(doc.k, np.array(doc.theta_F[:lin]), np.array(doc.theta_F[lin:]), channels)
    theta_H = InvariantLayerParams(doc.k, np.array(doc.theta_H[:hlin]), doc.theta_H[hlin])
    return FeatureParams(doc.k, theta_F, theta_H)


def map_from_document(doc: GrnfMapDocument) -> GrnfMap:
    if doc.version != MAP_FORMAT_VERSION:
        raise DatasetFormatError(f"Unsupported map document version {doc.version}")
    if len(doc.params) != doc.M:
        raise DatasetFormatError(f"Map document declares M={doc.M} but holds {len(doc.params)} features")
    params = [_feature_from_document(p, doc.config.channels) for p in doc.params]
    return GrnfMap(doc.M, params, np.array(doc.weights), doc.seed, doc.config, doc.proposal)


def dump_map(grnf: GrnfMap) -> str:
    return json.dumps(map_to_document(grnf).model_dump(mode="json", by_alias=True))


def load_map(text: str) -> GrnfMap:
    try:
        doc = GrnfMapDocument.model_validate(json.loads(text))
    except (json.JSONDecodeError, ValidationError) as e:
        raise DatasetFormatError(f"Invalid map document: {e}") from e
    return map_from_document(doc)


def save_map_file(grnf: GrnfMap, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_map(grnf))
    logger.info(f"✅ Map M={grnf.M} written to {path}")


def load_map_file(path: str) -> GrnfMap:
    with open(path, "r", encoding="utf-8") as f:
        return load_map(f.read())
