"""YAML helpers shared by the instance loaders and plans."""
