"""Tests for the nonlocalhopf package."""
