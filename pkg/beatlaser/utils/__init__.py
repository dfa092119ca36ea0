"""Utility helpers shared by services and commands."""
