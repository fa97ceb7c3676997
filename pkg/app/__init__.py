"""
Twist Application Package

Twisted-spin simulator: a spin-1/2 wavepacket in a gradient magnetic field,
organized into:
- main: Command-line front end and the simulation controller
- components: Grid, spinor field and observables
- services: Integrators, analytic oracle, spin texture, aperture experiment, exports
- setup: Run configuration and environment checks
- utils: Exceptions and message catalogs
"""

__version__ = "1.0.0"
__author__ = "Twist Team"
