"""Versioned binary checkpoints

Layout (little-endian)::

    magic     4s   b"BXCK"
    version   u32  1
    epoch     u32
    config    u32 length + UTF-8 JSON (training configuration echo)
    rng       u32 length + UTF-8 JSON (bit generator state)
    n_blocks  u32
    blocks    n_blocks x (name_len u16, name UTF-8, ndim u8, ndim x u32 shape, f64 data)

Block names are "generator.<param>" and "discriminator.<param>", running batch-norm
statistics included.
"""

import json
import os
import struct
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np

from src.autodiff.modules import Module
from src.util.errors import CheckpointError, WriteError

PathLike = Union[str, os.PathLike]

MAGIC = b"BXCK"
VERSION = 1
PREAMBLE = struct.Struct("<4sII")

GENERATOR_PREFIX = "generator."
DISCRIMINATOR_PREFIX = "discriminator."


@dataclass
class Checkpoint:
    epoch: int
    blocks: "OrderedDict[str, np.ndarray]"
    config: Dict[str, Any] = field(default_factory=dict)
    rng_state: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def capture(
        cls, epoch: int, generator: Module, discriminator: Module, config: Dict[str, Any], rng: np.random.Generator
    ) -> "Checkpoint":
        blocks = OrderedDict()
        for name, value in generator.state_dict().items():
            blocks[GENERATOR_PREFIX + name] = value
        for name, value in discriminator.state_dict().items():
            blocks[DISCRIMINATOR_PREFIX + name] = value
        return cls(epoch=epoch, blocks=blocks, config=config, rng_state=rng.bit_generator.state)

    def section(self, prefix: str) -> "OrderedDict[str, np.ndarray]":
        return OrderedDict((name[len(prefix) :], value) for name, value in self.blocks.items() if name.startswith(prefix))

    def restore_generator(self, generator: Module) -> Module:
        generator.load_state_dict(self.section(GENERATOR_PREFIX))
        return generator

    def restore_discriminator(self, discriminator: Module) -> Module:
        discriminator.load_state_dict(self.section(DISCRIMINATOR_PREFIX))
        return discriminator

    def restore_rng(self) -> np.random.Generator:
        rng = np.random.default_rng()
        rng.bit_generator.state = self.rng_state
        return rng


def _json_bytes(value: Dict[str, Any]) -> bytes:
    return json.dumps(value, sort_keys=True, separators=(",", ":")).encode("utf-8")


def encode_checkpoint(ckpt: Checkpoint) -> bytes:
    parts = [PREAMBLE.pack(MAGIC, VERSION, ckpt.epoch)]
    for blob in (_json_bytes(ckpt.config), _json_bytes(ckpt.rng_state)):
        parts.append(struct.pack("<I", len(blob)))
        parts.append(blob)
    parts.append(struct.pack("<I", len(ckpt.blocks)))
    for name, value in ckpt.blocks.items():
        encoded = name.encode("utf-8")
        value = np.asarray(value, dtype="<f8")
        parts.append(struct.pack("<H", len(encoded)))
        parts.append(encoded)
        parts.append(struct.pack("<B", value.ndim))
        parts.append(struct.pack(f"<{value.ndim}I", *value.shape))
        parts.append(value.tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int, what: str) -> bytes:
        end = self.offset + size
        if end > len(self.data):
            raise CheckpointError(f"Checkpoint truncated while reading {what}")
        chunk = self.data[self.offset : end]
        self.offset = end
        return chunk

    def unpack(self, fmt: str, what: str) -> Tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))


def decode_checkpoint(data: bytes) -> Checkpoint:
    reader = _Reader(data)
    magic, version, epoch = reader.unpack(PREAMBLE.format, "header")
    if magic != MAGIC:
        raise CheckpointError(f"Bad checkpoint magic {magic!r}")
    if version != VERSION:
        raise CheckpointError(f"Unsupported checkpoint version {version}")

    documents = []
    for what in ("config", "rng state"):
        (length,) = reader.unpack("<I", f"{what} length")
        try:
            documents.append(json.loads(reader.take(length, what).decode("utf-8")))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise CheckpointError(f"Corrupt {what} in checkpoint: {e}")

    (n_blocks,) = reader.unpack("<I", "block count")
    blocks = OrderedDict()
    for _ in range(n_blocks):
        (name_len,) = reader.unpack("<H", "block name length")
        name = reader.take(name_len, "block name").decode("utf-8")
        (ndim,) = reader.unpack("<B", f"rank of {name}")
        shape = reader.unpack(f"<{ndim}I", f"shape of {name}")
        count = int(np.prod(shape, dtype=np.int64))
        raw = reader.take(8 * count, f"data of {name}")
        blocks[name] = np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(shape)
    if reader.offset != len(data):
        raise CheckpointError(f"Checkpoint has {len(data) - reader.offset} trailing bytes")
    return Checkpoint(epoch=epoch, blocks=blocks, config=documents[0], rng_state=documents[1])


def save_checkpoint(ckpt: Checkpoint, path: PathLike) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as f:
            f.write(encode_checkpoint(ckpt))
    except OSError as e:
        raise WriteError(str(path), e.strerror or str(e))
    return path


def load_checkpoint(path: PathLike) -> Checkpoint:
    path = Path(path)
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise CheckpointError(f"Cannot read checkpoint {path}: {e.strerror or e}")
    return decode_checkpoint(data)
