"""Pydantic models for phases, circuits and HTTP bodies."""
