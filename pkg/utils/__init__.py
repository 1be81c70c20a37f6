"""
Utils package for the operator convexity toolkit
Contains matrix document I/O, report writing and small helpers
"""
