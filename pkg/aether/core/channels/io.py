"""
Plain-text channel dump format.

Layout::

    aether-channels 1
    K <users>
    N <antennas>
    M <elements>
    seed <int or none>
    d_bs_irs <meters>
    [G] <count>
    <re> <im>            one complex entry per line, row-major
    [h_r] <count>
    [h_d] <count>
    [d_direct] <count>
    <value>
    [d_reflect] <count>

Numbers are written with 17 significant digits so a load reproduces the
arrays bit for bit.
"""

from pathlib import Path
from typing import Dict, Iterator, List, Union

import numpy as np

from aether.core.exceptions import ConfigError
from aether.core.model.types import ChannelSet

MAGIC = "aether-channels 1"
COMPLEX_BLOCKS = ("G", "h_r", "h_d")
REAL_BLOCKS = ("d_direct", "d_reflect")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def dump_channels(channels: ChannelSet, path: Union[str, Path]) -> Path:
    """Write a channel realization to ``path``"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines: List[str] = [
        MAGIC,
        f"K {channels.num_users}",
        f"N {channels.num_antennas}",
        f"M {channels.num_elements}",
        f"seed {'none' if channels.seed is None else channels.seed}",
        f"d_bs_irs {_fmt(channels.d_bs_irs)}",
    ]
    for name in COMPLEX_BLOCKS:
        values = np.asarray(getattr(channels, name)).ravel()
        lines.append(f"[{name}] {values.size}")
        lines.extend(f"{_fmt(v.real)} {_fmt(v.imag)}" for v in values)
    for name in REAL_BLOCKS:
        values = np.asarray(getattr(channels, name)).ravel()
        lines.append(f"[{name}] {values.size}")
        lines.extend(_fmt(v) for v in values)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _read_block(lines: Iterator[str], name: str, is_complex: bool) -> np.ndarray:
    header = next(lines, "").split()
    if len(header) != 2 or header[0] != f"[{name}]":
        raise ConfigError(f"expected block [{name}], got {' '.join(header)!r}")
    count = int(header[1])
    values = []
    for _ in range(count):
        parts = next(lines, "").split()
        if is_complex:
            values.append(complex(float(parts[0]), float(parts[1])))
        else:
            values.append(float(parts[0]))
    return np.array(values, dtype=complex if is_complex else float)


def load_channels(path: Union[str, Path]) -> ChannelSet:
    """Read a channel realization written by ``dump_channels``"""
    lines = iter(Path(path).read_text(encoding="utf-8").splitlines())
    if next(lines, "").strip() != MAGIC:
        raise ConfigError(f"{path} is not an aether channel dump")
    header: Dict[str, str] = {}
    for key in ("K", "N", "M", "seed", "d_bs_irs"):
        parts = next(lines, "").split()
        if len(parts) != 2 or parts[0] != key:
            raise ConfigError(f"expected header field {key!r} in {path}")
        header[key] = parts[1]
    K, N, M = int(header["K"]), int(header["N"]), int(header["M"])
    try:
        G = _read_block(lines, "G", True).reshape(M, N)
        h_r = _read_block(lines, "h_r", True).reshape(K, M)
        h_d = _read_block(lines, "h_d", True).reshape(K, N)
        d_direct = _read_block(lines, "d_direct", False)
        d_reflect = _read_block(lines, "d_reflect", False)
    except (ValueError, IndexError) as e:
        raise ConfigError(f"malformed channel dump {path}: {e}") from e
    return ChannelSet(
        G=G,
        h_r=h_r,
        h_d=h_d,
        d_direct=d_direct,
        d_reflect=d_reflect,
        d_bs_irs=float(header["d_bs_irs"]),
        seed=None if header["seed"] == "none" else int(header["seed"]),
    )
