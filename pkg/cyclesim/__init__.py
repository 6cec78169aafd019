# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""Command line front end: python -m cyclesim <command> ..."""
