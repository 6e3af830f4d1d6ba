# Copyright 2026 qfern contributors
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:
#
# 1. Redistributions of source code must retain the above copyright notice, this
# list of conditions and the following disclaimer.
#
# 2. Redistributions in binary form must reproduce the above copyright notice,
# this list of conditions and the following disclaimer in the documentation
# and/or other materials provided with the distribution.
#
# 3. Neither the name of the copyright holder nor the names of its contributors
# may be used to endorse or promote products derived from this software without
# specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

"""Report writers and the run manifest.

Every float in a JSON or CSV output is rounded to 12 significant digits (see
:func:`~qfern.core.format_float`) and JSON keys are sorted, so identical runs
produce byte-identical files.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, TextIO

import numpy as np

from ._version import __version__
from .core import Matrix, format_float, round_float
from .graph import PathLike

logger = logging.getLogger(__name__)
_CHUNK = 1 << 16


def file_digest(path: PathLike) -> str:
    """SHA-256 of the contents of `path`, as hex."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(_CHUNK), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _normalize(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(key): _normalize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_normalize(item) for item in value)
    if isinstance(value, np.ndarray):
        return _normalize(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return round_float(value)
    return value


def dump_json(data: Any, stream: TextIO) -> None:
    """Write `data` as indented JSON with sorted keys and rounded floats."""
    json.dump(_normalize(data), stream, sort_keys=True, indent=2, allow_nan=False)
    stream.write("\n")


def write_json(data: Any, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as f:
        dump_json(data, f)


def write_matrix_csv(matrix: Matrix, stream: TextIO) -> None:
    """One row per line, comma-separated, 12 significant digits."""
    for row in np.atleast_2d(matrix):
        stream.write(",".join(format_float(value) for value in row) + "\n")


def save_matrix_csv(matrix: Matrix, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as f:
        write_matrix_csv(matrix, f)


@dataclass
class RunManifest:
    """Everything needed to reproduce one CLI invocation.

    Parameters
    ----------
    command
        Subcommand name
    params
        Resolved parameter values, defaults included
    seed
        PRNG seed, if the command uses one
    inputs
        Input file paths mapped to their SHA-256 digests
    version
        Version of this package that produced the outputs
    """

    command: str
    params: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    inputs: Dict[str, str] = field(default_factory=dict)
    version: str = __version__

    def add_input(self, path: PathLike) -> None:
        """Record the digest of an input file.

        Raises
        ------
        OSError
            If the file cannot be read
        """
        self.inputs[str(path)] = file_digest(path)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "params": dict(self.params),
            "seed": self.seed,
            "inputs": dict(self.inputs),
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunManifest":
        return cls(
            command=data["command"],
            params=dict(data.get("params", {})),
            seed=data.get("seed"),
            inputs=dict(data.get("inputs", {})),
            version=data.get("version", __version__),
        )

    def save(self, path: PathLike) -> None:
        write_json(self.to_dict(), path)
        logger.debug("Wrote manifest for %r to %s", self.command, path)
