"""Test package for beatlaser."""
