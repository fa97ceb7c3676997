"""
Main Application Module

Contains the command-line entry point and the simulation controller.
"""
