"""Exact certificates for Borda-type relative social welfare functions."""
