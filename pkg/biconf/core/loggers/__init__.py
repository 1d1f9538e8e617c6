"""Structured run loggers."""
