"""
Setup package for the Twist application.

This package contains configuration modules including:
- SimulationConfig: Run configuration and its parser
- SystemChecker: Library version report
- ConfigManager: Configuration file loading, overrides and saving
"""
