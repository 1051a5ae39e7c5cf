# This file marks the app directory as a Python package.
