"""
Services package for the Twist application.

This package contains the numerical services including:
- integrator: Split-step and Crank-Nicolson time stepping
- tridiagonal: Thomas solver used by the implicit scheme
- analytic_oracle: Closed-form solution and its residual certificate
- spin_texture: Spin direction and twist profile
- experiment: Aperture post-selection and analyzer statistics
- export_manager: CSV/JSON artifacts
"""
