# GRNF - Graph Random Neural Features
__version__ = "1.0.0"
