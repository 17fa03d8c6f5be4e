"""Integration tests for complete processing pipelines."""
