"""
Tests package for the phase tropical isotopy toolkit.
"""
