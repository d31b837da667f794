"""Projection methods on pairs of closed convex cones in the plane."""
