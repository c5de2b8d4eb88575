# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

import os
from pathlib import Path

from .errors import SavingFailedError


class LocalStorage:
    def __init__(self, base_path: str | Path):
        self.base_path = Path(base_path)

    def path(self, file_name: str) -> Path:
        return self.base_path / file_name

    def upload(self, file_name: str, file: bytes) -> None:
        target = self.path(file_name)
        tmp = target.with_name(target.name + ".part")
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            tmp.write_bytes(file)
            os.replace(tmp, target)
        except OSError as e:
            raise SavingFailedError(f"cannot write {file_name}: {e}")
