"""Tests for the harvesting small-cell simulator."""
