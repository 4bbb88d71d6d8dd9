"""Packaged YAML configuration files (iconfig, logging, TEP dataset)."""
