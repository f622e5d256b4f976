"""
Core component tests.

This package contains tests for the core components of Aether.
"""