"""
Services package for the operator convexity toolkit
Contains the numerical core: Hermitian calculus, function catalog,
inequalities, entropy bounds, sampling, mining and verification
"""
