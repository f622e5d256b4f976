"""Aether command line interface."""
