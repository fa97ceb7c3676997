"""
Components Module

Contains the core types shared by every service.
"""
