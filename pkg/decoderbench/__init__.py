# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

__version__ = "0.1.0"
