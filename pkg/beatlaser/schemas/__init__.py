"""Pydantic data models for the beat laser simulation."""
