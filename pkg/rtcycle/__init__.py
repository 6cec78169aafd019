# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
'''
       .---.         .---.         .---.
  --> ( t_1 ) ----> ( ... ) ----> ( t_2 ) --.
       `---'         `---'         `---'    |
         ^                                  |
         `----------------------------------'

    rtcycle: periodic behavior of deterministic memoryless schedulers.
    Simulate until the state repeats, bound where that must happen,
    and enumerate every schedule of tiny systems to check the bounds.
'''
from . utl import *
from . tsk import *
from . sim import *
from . pol import *
from . bnd import *
from . cyc import *
from . enm import *
from . fmt import *
from . gen import *

from . import utl, tsk, sim, pol, bnd, cyc, enm, fmt, gen
