import math
from typing import Optional

import numpy as np


class BaseModel:
    r"""
    The Base Class for named Model objects.

    .. container:: operations

        .. describe:: str(x)

            Returns the model's name.

    Parameters
    ----------
    name: :class:`str`
        The name of the object (criterion name, curve series, observable label, ...).

    Attributes
    ----------
    name: :class:`str`
        The name of the object.
    """
    def __init__(self, name: Optional[str] = None):
        self.name: Optional[str] = name

    def __str__(self):
        return self.name or self.__class__.__name__

    def __repr__(self):
        return f"<{self.__class__.__name__} name={self.name!r}>"

    def to_dict(self) -> dict:
        """JSON-ready representation. Overridden by models that appear in reports."""
        return {"name": self.name}

    @staticmethod
    def plain(value):
        """
        Converts numpy scalars, arrays and enums into plain JSON-serialisable values.

        Parameters
        ----------
        value:
            The value to convert.

        Returns
        -------
        A float/int/str/list/dict/None made of builtins only.
        """
        if value is None or isinstance(value, (bool, str)):
            return value
        if isinstance(value, np.bool_):
            return bool(value)
        if hasattr(value, "value") and hasattr(value, "name") and not isinstance(value, np.generic):
            return value.value  # enums
        if isinstance(value, dict):
            return {str(key): BaseModel.plain(item) for key, item in value.items()}
        if isinstance(value, (list, tuple, np.ndarray)):
            return [BaseModel.plain(item) for item in value]
        if isinstance(value, (int, np.integer)):
            return int(value)
        value = float(value)
        return value if math.isfinite(value) else None
