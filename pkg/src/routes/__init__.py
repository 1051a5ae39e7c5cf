# This file marks the routes directory as a Python package.
