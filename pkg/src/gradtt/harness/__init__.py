"""Test harness: named examples, a seeded term generator, and property suites."""
