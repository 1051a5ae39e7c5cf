# This file marks the services directory as a Python package.
