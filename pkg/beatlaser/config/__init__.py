"""Configuration constants and column mappings."""
