"""Test package for the incompatibility hierarchy toolkit."""
