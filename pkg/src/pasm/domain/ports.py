"""
Domain Ports - Interfaces between the experiment service and the outside world

The experiment service reads instances and writes result rows only through
these ports, so the same sweep runs against files, generators or test doubles.
"""
from abc import ABC, abstractmethod
from typing import Sequence

from pasm.types.model import Instance
from pasm.types.reports import ResultRow


class InstanceSourcePort(ABC):
    """Port for obtaining problem instances"""

    @abstractmethod
    def load_instance(self, source: str) -> Instance:
        """
        Load and validate an instance

        Args:
            source: Location of the instance, e.g. a JSON file path

        Returns:
            The validated instance
        """
        pass


class ResultSinkPort(ABC):
    """Port for persisting experiment rows"""

    @abstractmethod
    def write_rows(self, rows: Sequence[ResultRow], destination: str) -> str:
        """
        Write result rows in a stable order

        Args:
            rows: Rows in (instance, policy, alpha) order
            destination: Where to write them

        Returns:
            The location written
        """
        pass
