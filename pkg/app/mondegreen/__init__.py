"""Mondegreen: voice query correction mined from search session logs."""
