"""
fading-limits

Data-oriented performance limits of adaptive transmission over Rayleigh
block-fading channels:

- MTT / DOR: how long delivering H bits takes, and how often it misses T_th
- MET / IOR: how many bits fit in T seconds, and how often fewer than H_th do
- ORA (constant power) against OPRA (water-filling power)

Run with:
    python main.py --help
"""

__version__ = "1.0.0"
