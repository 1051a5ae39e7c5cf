# This file marks the core_service directory as a Python package.
