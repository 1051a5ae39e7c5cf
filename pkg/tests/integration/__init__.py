# This file marks the integration directory as a Python package.
