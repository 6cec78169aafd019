# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
from setup_utils import *

ext_modules = []
executables = []
setup_kwarg = {}

# ==============================================================================
# ~ [ rtcycle ]
# ==============================================================================

ext_modules.extend(cythonize(
[
    # tick() and the graph search are where the time goes
    Extension('rtcycle.sim', ['rtcycle/sim.py']),
    Extension('rtcycle.enm', ['rtcycle/enm.py']),
]))

# ==============================================================================
# ~ [ cyclesim ]
# ==============================================================================

executables.extend(
[
    Executable('cyclesim/__main__.py', target_name='cyclesim', base=None),
])

# ==============================================================================
# ~ [ setup ]
# ==============================================================================

try: # setup hook for drop-in projects
    import setup_project
    setup_project.patch(globals())

except ImportError: pass

setup(
    name = 'rtcycle',
    version = '0.1.0',
    description = 'Cycles and simulation intervals of memoryless multiprocessor schedules',
    license = 'BSD-3-Clause',

    packages = ['rtcycle', 'cyclesim'],
    python_requires = '>=3.8',

    install_requires = [
        'networkx>=2.5',
        'matplotlib>=3.3',
    ],

    extras_require = {
        'build': ['Cython>=0.29', 'cx_Freeze>=6.0'],
        'test': ['pytest>=6.0'],
    },

    entry_points = {
        'console_scripts': ['cyclesim = cyclesim.cli:main_entry'],
    },

    ext_modules = ext_modules,
    executables = executables,

    # anything else we may have missed
    **setup_kwarg
)
