# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT


class DecoderBenchError(Exception):
    pass


class DemSyntaxError(DecoderBenchError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidModelError(DecoderBenchError):
    pass


class InvalidCodeSpecError(DecoderBenchError):
    pass


class NotGraphLikeError(DecoderBenchError):
    pass


class ShapeMismatchError(DecoderBenchError):
    pass


class CapacityExceededError(DecoderBenchError):
    pass


class ModelTooLargeError(DecoderBenchError):
    pass


class TooManyDefectsError(DecoderBenchError):
    pass


class MatchingError(DecoderBenchError):
    pass


class FingerprintMismatchError(DecoderBenchError):
    pass


class ConfigurationMismatchError(DecoderBenchError):
    pass


class EmptyShotSetError(DecoderBenchError):
    pass


class ShotFormatError(DecoderBenchError):
    pass


class CheckpointFormatError(DecoderBenchError):
    pass
