"""
Command handlers of the command-line front end, one module per command.
"""
