"""Tests for the prm-weights package."""
