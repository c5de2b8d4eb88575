# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

from pathlib import Path

from .local_storage import LocalStorage


class Storage:
    """
    Run artifacts (models, shot files, checkpoints, traces, manifests) kept beneath one location.
    """

    def __init__(self, backend: str, storage_path: str | Path | None):
        self.backend = backend
        self.instance: LocalStorage | None = None

        if backend == "local":
            if storage_path is None:
                raise ValueError("storage_path must be provided")
            else:
                self.instance = LocalStorage(base_path=storage_path)

        else:
            raise NotImplementedError(f"Backend {backend} not implemented")

    def upload(self, file_name: str, file_data: bytes | str) -> None:
        if isinstance(file_data, str):
            file_data = file_data.encode("utf-8")
        return self.instance.upload(file_name=file_name, file=file_data)

    def path(self, file_name: str) -> Path:
        return self.instance.path(file_name)
