# This file marks the unit directory as a Python package.
