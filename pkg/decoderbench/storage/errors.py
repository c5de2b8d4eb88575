# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

from decoderbench.errors import DecoderBenchError


class SavingFailedError(DecoderBenchError):
    pass
