"""Geometric intersection numbers and minimal position of closed curves on surfaces."""
