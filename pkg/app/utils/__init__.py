"""
Utilities package for the Twist application.

This package contains:
- exceptions: Error hierarchy
- translation_manager: Localized messages
"""
