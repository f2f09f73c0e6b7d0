"""Tests for the reduced-GE OSD library."""
