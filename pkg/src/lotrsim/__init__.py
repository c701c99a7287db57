"""Cooperative card-game simulator."""
