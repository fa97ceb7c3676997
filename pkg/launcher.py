#!/usr/bin/env python3
"""
Twist Launcher

Main entry point for the twisted-spin simulator:
    python launcher.py simulate|texture|experiment|converge [options]
"""

import os
import sys

# Keep BLAS single-threaded; the converge command parallelizes across rungs instead
os.environ.setdefault('OMP_NUM_THREADS', '1')
os.environ.setdefault('MKL_NUM_THREADS', '1')
os.environ.setdefault('OPENBLAS_NUM_THREADS', '1')

# Add the current directory to the Python path
# Handle cases where __file__ might not be defined (e.g., when run via exec())
try:
    script_dir = os.path.dirname(os.path.abspath(__file__))
except NameError:
    script_dir = os.getcwd()
sys.path.insert(0, script_dir)

from app.main.main_application import main


if __name__ == "__main__":
    sys.exit(main())
