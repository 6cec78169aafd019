# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
from glob import glob
import shutil
import copy
import time
import sys
import os

import setuptools
import setuptools.command.build_ext

try:
    import Cython.Compiler.Options
    import Cython.Build
except ImportError:
    Cython = None # pure python install, the hot modules just run slower

try:
    import cx_Freeze
except ImportError:
    cx_Freeze = None

# ==============================================================================
# ~ [ cython configuration ]
# ==============================================================================

if Cython is not None:
    # don't include class and function documentation in release builds
    Cython.Compiler.Options.docstrings = __debug__

    # don't copy cython code into generated c as comments (build speedup)
    Cython.Compiler.Options.emit_code_comments = False

    # abort compilation on the first error (don't keep printing errors)
    Cython.Compiler.Options.fast_fail = True

# ===== [ compiler directives ] ================================================

# the compiled modules are plain python: tick arithmetic stays on python ints
# with floor division, and annotations are documentation, not c types.
cython_directives = {
    'language_level': 3,
    'boundscheck': __debug__,
    'nonecheck': __debug__,
    'cdivision': False,
    'overflowcheck': __debug__,
    'annotation_typing': False,
    'infer_types': True,
    'emit_code_comments': False,
    'autotestdict': False,
    'unraisable_tracebacks': __debug__,
}

# ==============================================================================
# ~ [ info containers ]
# ==============================================================================

class Extension(setuptools.Extension):
    def apply_global_config(self):
        """Add compiler flags and macros we want applied to all extensions. We
        assume that non-Windows platforms are Unix & have GCC-compatible compilers."""
        if sys.platform == 'win32':
            # silence bogus warnings about c standard library functions like sprintf
            self.define_macros.append(('_CRT_SECURE_NO_WARNINGS', '1'))

            self.extra_compile_args.append('/wd4244') # size_t -> int
            self.extra_compile_args.append('/wd4267') # size_t -> long
        else:
            # cython-generated code trips these all over the place
            self.extra_compile_args.append('-Wno-unused-function')
            self.extra_compile_args.append('-Wno-unused-variable')
            self.extra_compile_args.append('-Wno-unreachable-code')

        if sys.platform != 'win32' and __debug__:
            self.undef_macros.append('NDEBUG')
            self.extra_compile_args.append('-O0')
        elif not __debug__:
            # disable the runtime check for "__debug__" in release builds
            self.define_macros.append(('CYTHON_WITHOUT_ASSERTIONS', '1'))

        return self

def cythonize(extensions):
    """Compile pure python modules when Cython is around, else ship them as is."""
    if Cython is None or '--pure' in sys.argv:
        return []

    return Cython.Build.cythonize(extensions, compiler_directives=cython_directives,
                                    quiet=not __debug__)

def Executable(script, **kwargs):
    if cx_Freeze is None:
        return None

    return cx_Freeze.Executable(script, **kwargs)

# ==============================================================================
# ~ [ commands ]
# ==============================================================================

class build_ext(setuptools.command.build_ext.build_ext):
    def build_extension(self, ext):
        if isinstance(ext, Extension): ext.apply_global_config()
        setuptools.command.build_ext.build_ext.build_extension(self, ext)

class clean(setuptools.Command):
    user_options = []

    def initialize_options(self):
        pass

    def finalize_options(self):
        pass

    def run(self):
        # just toss the entire build directory, as cx_freeze doesn't clean up exes.
        for path in ['build', 'dist'] + glob('*.egg-info'):
            if os.path.exists(path): shutil.rmtree(path)

        # clean up the c files and shared objects cython leaves next to the sources
        for extension in self.distribution.ext_modules or []:
            for source in extension.sources:
                name = os.path.splitext(source)[0]

                for ext in ['.c', '.cpp', '.html']:
                    if os.path.exists(name + ext) and source != name + ext:
                        os.remove(name + ext)

            path = os.path.dirname(extension.sources[0]) or '.'
            for name in os.listdir(path):
                if name.endswith('.so') or name.endswith('.pyd'):
                    os.remove(os.path.join(path, name))

        # python 3 puts serialized bytecode files into a __pycache__ directory.
        for dirpath, dirnames, filenames in os.walk('.'):
            if '__pycache__' in dirnames:
                shutil.rmtree(os.path.join(dirpath, '__pycache__'))
                dirnames.remove('__pycache__')

            for filename in filenames:
                if filename.endswith('.pyc') or filename.endswith('.pyo'):
                    os.remove(os.path.join(dirpath, filename))

# ==============================================================================
# ~ [ setup ]
# ==============================================================================

def setup(**options):
    # don't pollute the user config with ours (in case they want to setup twice)
    kwargs = copy.deepcopy(options)

    if '--pure' in sys.argv: sys.argv.remove('--pure')

    kwargs.setdefault('cmdclass', {})
    kwargs['cmdclass'].setdefault('build_ext', build_ext)
    kwargs['cmdclass'].setdefault('clean', clean)

    # avoid trying to iterate over Nones where we expect these attrs to be lists
    kwargs['ext_modules'] = [m for m in kwargs.get('ext_modules') or [] if m is not None]
    executables = [e for e in kwargs.pop('executables', None) or [] if e is not None]

    kwargs.setdefault('options', {})

    if executables:
        kwargs['executables'] = executables

        kwargs['options'].setdefault('build_exe', {}) # pass -OO in release builds
        kwargs['options']['build_exe'].setdefault('optimize', 0 if __debug__ else 2)
        kwargs['options']['build_exe'].setdefault('packages', ['rtcycle', 'cyclesim'])

    start_time = time.time( )

    if executables:
        cx_Freeze.setup(**kwargs)
    else:
        setuptools.setup(**kwargs)

    print("Completed in", time.time() - start_time, "seconds.")
