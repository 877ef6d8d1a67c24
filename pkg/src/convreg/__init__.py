"""Convex regularity toolkit: polyhedral set calculus, normality constants,
CHIP verdicts and linear regularity checks on finite (and one analytic
infinite) collections of convex sets in Q^n."""

__version__ = "0.1.0"
