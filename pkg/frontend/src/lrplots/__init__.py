"""Rendering of correlation-spreading simulation artifacts.

Consumes only the exported CSV/JSON files; never imports the simulation
package.
"""

__version__ = "0.1.0"
