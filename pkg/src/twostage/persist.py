"""Binary persistence of trained stage pairs.

File layout (all integers little-endian):

    bytes 0-7    magic  b"TSFCPAIR"
    bytes 8-11   format version (u32)
    bytes 12-15  header length in bytes (u32)
    then         header: UTF-8 JSON describing the pair and its array shapes
    then         payload: the parameter arrays, float64, C order, concatenated
                 in header order
    last 4       CRC32 (u32) of everything before it

The header carries the window geometry, model descriptors, the Stage-1
evaluation MSE, and optionally the normalization statistics and series id of
the series the pair was trained on.  Parameters are stored byte-exact, so a
loaded pair reproduces predictions bitwise.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import HorizonSpec, NormStats
from .exceptions import ModelLoadError
from .models import (
    HybridModel,
    HybridParams,
    MarModel,
    MarParams,
    MlpModel,
)
from .nn import DenseLayer, IDENTITY, MlpStack, RELU
from .two_stage import StagePair

MAGIC = b"TSFCPAIR"
FORMAT_VERSION = 1


def _describe_mlp(stack: MlpStack) -> dict:
    return {
        "kind": "mlp",
        "dropout_rate": stack.dropout_rate,
        "use_layer_norm": stack.use_layer_norm,
        "layers": [
            {"activation": layer.activation, "norm": layer.norm_gain is not None}
            for layer in stack.layers
        ],
    }


def _describe_model(model) -> tuple[dict, list[np.ndarray]]:
    if isinstance(model, MarModel):
        return {"kind": "mar"}, model.parameters()
    if isinstance(model, MlpModel):
        return _describe_mlp(model.stack), model.parameters()
    if isinstance(model, HybridModel):
        desc = {"kind": "mlp_mar", "mlp": _describe_mlp(model.params.mlp)}
        return desc, model.parameters()
    raise ValueError(f"cannot serialize a model of type {type(model).__name__}")


def _rebuild_mlp(desc: dict, arrays: list[np.ndarray]) -> MlpStack:
    layers = []
    cursor = 0
    for entry in desc["layers"]:
        weights, bias = arrays[cursor], arrays[cursor + 1]
        cursor += 2
        norm_gain = norm_bias = None
        if entry["norm"]:
            norm_gain, norm_bias = arrays[cursor], arrays[cursor + 1]
            cursor += 2
        if entry["activation"] not in (RELU, IDENTITY):
            raise ModelLoadError(f"unknown activation {entry['activation']!r}")
        layers.append(
            DenseLayer(
                weights=weights,
                bias=bias,
                activation=entry["activation"],
                norm_gain=norm_gain,
                norm_bias=norm_bias,
            )
        )
    if cursor != len(arrays):
        raise ModelLoadError("parameter arrays do not match the layer description")
    return MlpStack(
        layers=layers,
        dropout_rate=desc["dropout_rate"],
        use_layer_norm=desc["use_layer_norm"],
    )


def _rebuild_model(desc: dict, arrays: list[np.ndarray]):
    kind = desc.get("kind")
    if kind == "mar":
        if len(arrays) != 2:
            raise ModelLoadError(f"a linear model stores 2 arrays, found {len(arrays)}")
        return MarModel(MarParams(weights=arrays[0], bias=arrays[1]))
    if kind == "mlp":
        return MlpModel(_rebuild_mlp(desc, arrays))
    if kind == "mlp_mar":
        if len(arrays) < 2:
            raise ModelLoadError("hybrid model payload is incomplete")
        mar = MarParams(weights=arrays[0], bias=arrays[1])
        return HybridModel(HybridParams(mar=mar, mlp=_rebuild_mlp(desc["mlp"], arrays[2:])))
    raise ModelLoadError(f"unknown model kind {kind!r}")


def save_models(
    pair: StagePair,
    path: str | Path,
    norm_stats: NormStats | None = None,
    series_id: str | None = None,
    period: int | None = None,
) -> None:
    """Serialize a trained pair (and optional provenance) to one file."""
    sections: list[tuple[str, list[np.ndarray]]] = []
    header: dict = {
        "spec": {
            "history": pair.spec.history,
            "horizon": pair.spec.horizon,
            "future": pair.spec.future,
        },
        "stage1_eval_mse": pair.stage1_eval_mse,
        "stage1": None,
        "norm_stats": None if norm_stats is None else {
            "mean": norm_stats.mean,
            "std": norm_stats.std,
        },
        "series_id": series_id,
        "period": period,
    }
    if pair.stage1 is not None:
        desc, arrays = _describe_model(pair.stage1)
        header["stage1"] = desc
        sections.append(("stage1", arrays))
    desc, arrays = _describe_model(pair.stage2)
    header["stage2"] = desc
    sections.append(("stage2", arrays))

    manifest = []
    payload = bytearray()
    for section, arrays in sections:
        for index, arr in enumerate(arrays):
            manifest.append(
                {"name": f"{section}/param{index}", "shape": list(arr.shape)}
            )
            payload += np.ascontiguousarray(arr, dtype="<f8").tobytes()
    header["arrays"] = manifest

    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    blob = bytearray()
    blob += MAGIC
    blob += FORMAT_VERSION.to_bytes(4, "little")
    blob += len(header_bytes).to_bytes(4, "little")
    blob += header_bytes
    blob += payload
    blob += (zlib.crc32(bytes(blob)) & 0xFFFFFFFF).to_bytes(4, "little")
    Path(path).write_bytes(bytes(blob))


@dataclass(frozen=True)
class PersistedBundle:
    """A loaded pair plus whatever provenance the file carried."""

    pair: StagePair
    norm_stats: NormStats | None
    series_id: str | None
    period: int | None


def load_bundle(path: str | Path) -> PersistedBundle:
    """Load a pair with its normalization statistics and series id.

    Raises
    ------
    ModelLoadError
        On a wrong magic number, unsupported version, truncation, checksum
        mismatch, or any inconsistency between header and payload.
    """
    blob = Path(path).read_bytes()
    if len(blob) < len(MAGIC) + 12:
        raise ModelLoadError(f"{path}: file is too short to be a model file")
    if blob[: len(MAGIC)] != MAGIC:
        raise ModelLoadError(f"{path}: bad magic number")
    stored_crc = int.from_bytes(blob[-4:], "little")
    if zlib.crc32(blob[:-4]) & 0xFFFFFFFF != stored_crc:
        raise ModelLoadError(f"{path}: checksum mismatch, file is corrupt")
    version = int.from_bytes(blob[8:12], "little")
    if version != FORMAT_VERSION:
        raise ModelLoadError(f"{path}: unsupported format version {version}")
    header_len = int.from_bytes(blob[12:16], "little")
    header_end = 16 + header_len
    if header_end > len(blob) - 4:
        raise ModelLoadError(f"{path}: header length overruns the file")
    try:
        header = json.loads(blob[16:header_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelLoadError(f"{path}: unreadable header ({exc})") from None

    try:
        spec = HorizonSpec(**header["spec"])
        payload = blob[header_end:-4]
        arrays: dict[str, list[np.ndarray]] = {"stage1": [], "stage2": []}
        offset = 0
        for entry in header["arrays"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            nbytes = count * 8
            if offset + nbytes > len(payload):
                raise ModelLoadError(f"{path}: payload is truncated")
            arr = np.frombuffer(payload, dtype="<f8", count=count, offset=offset)
            arrays[entry["name"].split("/")[0]].append(arr.reshape(shape).copy())
            offset += nbytes
        if offset != len(payload):
            raise ModelLoadError(f"{path}: {len(payload) - offset} trailing payload bytes")
        stage1 = None
        if header["stage1"] is not None:
            stage1 = _rebuild_model(header["stage1"], arrays["stage1"])
        stage2 = _rebuild_model(header["stage2"], arrays["stage2"])
        pair = StagePair(
            stage1=stage1,
            stage2=stage2,
            spec=spec,
            stage1_eval_mse=header["stage1_eval_mse"],
        )
        stats = None
        if header.get("norm_stats") is not None:
            stats = NormStats(**header["norm_stats"])
    except ModelLoadError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelLoadError(f"{path}: invalid model file ({exc})") from None
    return PersistedBundle(
        pair=pair,
        norm_stats=stats,
        series_id=header.get("series_id"),
        period=header.get("period"),
    )


def load_models(path: str | Path) -> StagePair:
    """Load just the trained pair from a model file."""
    return load_bundle(path).pair
