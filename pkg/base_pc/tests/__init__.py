"""Test Cases for the parent package."""
