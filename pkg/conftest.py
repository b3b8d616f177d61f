# Load the installed plotview package before test collection reaches the
# plotview/ project directory, so pytest's importlib module-name stubs for
# "plotview.tests.*" attach to the real package instead of shadowing it.
import plotview  # noqa: F401
