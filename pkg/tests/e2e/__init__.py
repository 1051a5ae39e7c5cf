# This file marks the e2e directory as a Python package.
