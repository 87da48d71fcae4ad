from typing import Final

__prog__: Final = "eplan"
__version__: Final = "0.1.0"
