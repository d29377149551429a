"""Base exporter class for all exporters."""

import logging
from pathlib import Path
from typing import Any, Dict, Union

logger = logging.getLogger(__name__)


class BaseExporter:
    """Base class for all artifact exporters."""

    suffix = ""

    def __init__(self, config: Dict[str, Any]):
        """Initialize the exporter with configuration.

        Args:
            config: Exporter configuration dictionary
        """
        self.config = config

    def target(self, path: Union[str, Path]) -> Path:
        """Output path with the exporter's suffix and an existing parent directory."""
        path = Path(path)
        if self.suffix and path.suffix != self.suffix:
            path = path.with_suffix(self.suffix)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def export(self, data: Any, path: Union[str, Path]) -> str:
        """Write data to path.

        Args:
            data: Object to export
            path: Destination file

        Returns:
            Path to exported file

        Raises:
            NotImplementedError: This method must be implemented by subclasses
        """
        raise NotImplementedError("Subclasses must implement export method")
