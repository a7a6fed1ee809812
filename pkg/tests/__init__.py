"""Unit test package for inertia."""
