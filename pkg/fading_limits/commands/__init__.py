"""
Commands

One module per CLI subcommand, plus the shared request models, flag
definitions and CSV export.
"""
