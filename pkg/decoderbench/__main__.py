# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

from decoderbench.cli import main_entry

main_entry()
